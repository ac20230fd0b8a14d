#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "asjq/core.hpp"
#include "asjq/join.hpp"

// Brute-force reference oracle.  Deliberately shares no evaluation code
// with the optimized algorithms: it resolves columns, applies aggregates
// and tests dominance with its own straightforward definitions, so the
// differential tests compare two independent implementations.

namespace asjq {

/// Exact ASJQ answer by definition: nested-loop join of all rows, then a
/// quadratic skyline over the joined vectors.  Canonical (left, right)
/// ascending order.  Precondition: validate_query(spec).ok().
std::vector<IdPair> brute_force_asjq(const Relation& A, const Relation& B,
                                     const QuerySpec& spec);

/// Quadratic skyline of {0..n-1} under an arbitrary dominance predicate
/// dom(i, j) = "i dominates j".  Returns surviving indices ascending.
std::vector<std::size_t> brute_force_skyline(
    std::size_t n, const std::function<bool(std::size_t, std::size_t)>& dom);

}  // namespace asjq
