#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asjq/core.hpp"
#include "asjq/join.hpp"
#include "asjq/kernels.hpp"
#include "asjq/skyline.hpp"

// The four ASJQ evaluation strategies plus the single-aggregate fast path.
// Every algorithm emits a guaranteed phase followed by a verification
// phase; in Verified mode all of them return exactly the naive result set.

namespace asjq {

enum class Mode : std::uint8_t {
    Verified,       // output always equals the brute-force oracle
    PaperFaithful,  // reproduces the original phase structure and target sets
};

enum class Algo : std::uint8_t { Naive, Msc, Dominator, Iterative, SingleAggregate, Auto };

struct RunOptions {
    Mode mode = Mode::Verified;
    std::size_t delta = 100;   // iterative peeling threshold
    bool parallel = true;
    ExecObserver* observer = nullptr;  // forces the serial path when set
};

struct RunReport {
    std::uint64_t join_pairs = 0;         // valid pairs enumerated
    std::uint64_t phase1_emitted = 0;     // guaranteed tuples
    std::uint64_t phase2_candidates = 0;  // tuples that required verification
    std::uint64_t phase2_emitted = 0;     // verification survivors
    std::uint64_t comparisons = 0;        // phase-2 dominance tests
    double wall_ms = 0.0;
};

struct RunResult {
    std::vector<IdPair> result;  // canonical (left, right) ascending
    RunReport report;
};

RunResult run_naive(const Relation& A, const Relation& B, const CompiledQuery& q,
                    const RunOptions& opts = {});
RunResult run_msc(const Relation& A, const Relation& B, const CompiledQuery& q,
                  const RunOptions& opts = {});
RunResult run_dominator(const Relation& A, const Relation& B, const CompiledQuery& q,
                        const RunOptions& opts = {});
RunResult run_iterative(const Relation& A, const Relation& B, const CompiledQuery& q,
                        const RunOptions& opts = {});

/// Single-aggregate fast path: all valid A0 x B0 pairs, no dominance
/// tests.  Requires one strictly monotone aggregate and pure equality
/// joins; in Verified mode it additionally requires constant join keys
/// (see single_aggregate_sound).  Throws std::invalid_argument otherwise.
RunResult run_single_aggregate(const Relation& A, const Relation& B,
                               const CompiledQuery& q, const RunOptions& opts = {});

/// One strict (SUM/AVG) aggregate, equality joins only.
bool single_aggregate_eligible(const CompiledQuery& q);

/// Eligible and provably exact: additionally every join column is constant
/// within its relation, so all joinable tuples are mutually prune
/// -comparable.  With two or more equality-key groups a pair from one
/// group can dominate a full-skyline pair of another group on the joined
/// vector (which excludes join attributes), so the shortcut would emit
/// dominated tuples.
bool single_aggregate_sound(const Relation& A, const Relation& B,
                            const CompiledQuery& q);

/// Dispatcher: Auto picks the fast path when exact for the requested mode
/// (PaperFaithful: eligible; Verified: sound), else iterative.
RunResult run(Algo algo, const Relation& A, const Relation& B,
              const CompiledQuery& q, const RunOptions& opts = {});

// ---------------------------------------------------------------------
// Building blocks, exposed for direct testing.

/// One (levelA, levelB) block of the leveled join; levels are 1-based with
/// the residual (when present) as the last level of its side.
struct LevelPair {
    int a = 0, b = 0;
    friend bool operator==(const LevelPair&, const LevelPair&) = default;
    friend auto operator<=>(const LevelPair&, const LevelPair&) = default;
};

/// Target blocks a candidate in block (p, q) must be verified against.
/// ka/kb count levels per side; a_res/b_res mark the last level as a
/// residual (primed) set rather than a weak-local skyline layer.
std::vector<LevelPair> target_sets(int p, int q, int ka, int kb,
                                   bool a_res, bool b_res, Mode mode);

/// Candidates not joined-dominated by any pool member (the pool normally
/// contains the candidates themselves; self-comparison excluded by id).
std::vector<IdPair> skyline_with_seed(const JoinedBlock& candidates,
                                      const JoinedBlock& pool,
                                      const CompiledQuery& q);

/// Valid pairs guaranteed to be in the result without verification.
/// pa / pb are the weak-local partitions of the prune skylines (A1 | A'1).
/// EquiStrict admits all three level-1 regions; Restricted only A1 x B1;
/// PaperFaithful emits all three regardless of regime.
std::vector<IdPair> guaranteed_set(const Partition& pa, const Partition& pb,
                                   const Relation& A, const Relation& B,
                                   const CompiledQuery& q,
                                   GuaranteeRegime regime, Mode mode);

/// Join-valid dominator pairs a candidate (u, v) is checked against.
/// Verified uses the weak closures including the candidate's own
/// components; PaperFaithful uses wld(u) x wld(v) exactly.
std::vector<IdPair> dominator_check_pairs(std::uint32_t u, std::uint32_t v,
                                          const DominatorInfo& da,
                                          const DominatorInfo& db,
                                          const Relation& A, const Relation& B,
                                          const CompiledQuery& q, Mode mode);

}  // namespace asjq
