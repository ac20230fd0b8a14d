#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "asjq/core.hpp"

// Skyline computation on source relations: SFS-style prune-skyline
// partitioning, weak-local partitioning with dominator collection, and
// thresholded layer peeling for the iterative algorithm.

namespace asjq {

struct Partition {
    std::vector<std::uint32_t> skyline;
    std::vector<std::uint32_t> rest;
};

/// For each non-locally-skyline id, every id of the input set that
/// weak-locally dominates it (the weak closure, ties included).
using DominatorMap = std::unordered_map<std::uint32_t, std::vector<std::uint32_t>>;

struct DominatorInfo {
    Partition part;          // local skyline | rest
    DominatorMap dominators; // keyed by rest ids
};

struct LayerDecomposition {
    std::vector<std::vector<std::uint32_t>> layers;  // A1..Ak
    std::vector<std::uint32_t> residual;
};

/// Monotone SFS presort score: sum of per-attribute normalized ranks over
/// the prune-relevant attributes (EQUAL join attributes excluded), oriented
/// so that a prune-dominator always scores strictly lower.
std::vector<double> sfs_scores(const Relation& rel, const SideView& view);

/// Full-dominance skyline of the whole relation (A0 | A'0).  Presorts by
/// sfs_scores then filters against accepted tuples only; the result is
/// identical to the O(N^2) definition.  Output id lists are ascending.
Partition prune_skyline(const Relation& rel, const SideView& view,
                        bool parallel = false);

/// Weak-local-dominance skyline of an id subset.  All-tie groups of
/// distinct tuples dominate each other and land in rest.
Partition weak_local_partition(std::span<const std::uint32_t> ids,
                               const Relation& rel, const SideView& view);

/// weak_local_partition plus, for every rest member, its full weak-local
/// dominator list within the input set.
DominatorInfo find_weak_local_dominators(std::span<const std::uint32_t> ids,
                                         const Relation& rel, const SideView& view,
                                         bool parallel = false);

/// Repeatedly peels weak-local skylines off the running rest set.  Stops
/// when the rest is no larger than delta, when the next layer would be
/// empty (mutual-tie group), or when the rest is a single antichain that
/// the next peel would absorb whole; the final rest becomes the residual.
LayerDecomposition peel_layers(std::span<const std::uint32_t> ids,
                               const Relation& rel, const SideView& view,
                               std::size_t delta);

}  // namespace asjq
