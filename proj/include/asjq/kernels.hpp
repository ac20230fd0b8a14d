#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asjq/join.hpp"

// The phase-2 verification kernel, in OpenMP-parallel and serial-reference
// flavors.  Both produce identical keep masks and comparison counts: each
// candidate's scan is sequential with early exit, so the total is
// schedule-independent.

namespace asjq {

/// Receives algorithm progress events.  Installing an observer forces the
/// serial path so the event order is meaningful.
struct ExecObserver {
    virtual ~ExecObserver() = default;
    virtual void on_emit(IdPair /*tuple*/, int /*phase*/) {}
    virtual void on_phase2_compare(IdPair /*candidate*/, IdPair /*against*/) {}
};

/// Marks keep[i] for every candidate not joined-dominated by any tuple of
/// the target blocks (scanned in the given order, the candidate itself
/// excluded by id).  Returns the number of dominance tests performed.
std::uint64_t verify_candidates(const JoinedBlock& candidates,
                                std::span<const JoinedBlock* const> targets,
                                std::span<const std::int8_t> signs,
                                std::vector<char>& keep,
                                bool parallel,
                                ExecObserver* observer = nullptr);

}  // namespace asjq
