#include "asjq/kernels.hpp"

#include "asjq/core.hpp"

namespace asjq {

namespace {

// one candidate vs the target blocks, early exit on the first dominator
bool survives(std::span<const double> cand, IdPair cand_id,
              std::span<const JoinedBlock* const> targets,
              std::span<const std::int8_t> signs,
              std::uint64_t& comps, ExecObserver* observer) {
    for (const JoinedBlock* blk : targets) {
        for (std::size_t i = 0; i < blk->size(); ++i) {
            if (blk->ids[i] == cand_id) continue;
            ++comps;
            if (observer) observer->on_phase2_compare(cand_id, blk->ids[i]);
            if (joined_dominates(blk->row(i), cand, signs)) return false;
        }
    }
    return true;
}

}  // namespace

std::uint64_t verify_candidates(const JoinedBlock& candidates,
                                std::span<const JoinedBlock* const> targets,
                                std::span<const std::int8_t> signs,
                                std::vector<char>& keep,
                                bool parallel,
                                ExecObserver* observer) {
    const std::int64_t n = static_cast<std::int64_t>(candidates.size());
    keep.assign(candidates.size(), 0);
    std::uint64_t total = 0;

    if (parallel && observer == nullptr) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 32) reduction(+ : total)
#endif
        for (std::int64_t i = 0; i < n; ++i) {
            std::uint64_t comps = 0;
            keep[i] = survives(candidates.row(i), candidates.ids[i], targets, signs,
                               comps, nullptr);
            total += comps;
        }
        return total;
    }

    for (std::int64_t i = 0; i < n; ++i) {
        std::uint64_t comps = 0;
        keep[i] = survives(candidates.row(i), candidates.ids[i], targets, signs,
                           comps, observer);
        total += comps;
    }
    return total;
}

}  // namespace asjq
