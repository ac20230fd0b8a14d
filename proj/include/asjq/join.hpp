#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "asjq/core.hpp"

// Join pair enumeration under the j-condition conjunction and
// materialization of joined tuples with aggregated values.  Pairs are
// always emitted in ascending (left id, right id) order so downstream
// phase outputs are byte-reproducible.

namespace asjq {

struct IdPair {
    std::uint32_t left = 0, right = 0;
    friend bool operator==(const IdPair&, const IdPair&) = default;
    friend auto operator<=>(const IdPair&, const IdPair&) = default;
};

/// A joined tuple: the (left, right) pair plus its skyline vector.
struct JoinedTuple {
    std::uint32_t left = 0, right = 0;
    std::vector<double> vec;  // m1 left locals ++ m2 right locals ++ n aggregates
};

/// Structure-of-arrays set of joined tuples sharing one skyline-vector layout.
struct JoinedBlock {
    int dim = 0;
    std::vector<IdPair> ids;
    std::vector<double> vec;  // ids.size() * dim

    std::size_t size() const { return ids.size(); }
    std::span<const double> row(std::size_t i) const {
        return {vec.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
    void push(IdPair id, std::span<const double> v) {
        ids.push_back(id);
        vec.insert(vec.end(), v.begin(), v.end());
    }
};

/// Streams every valid pair of leftIds x rightIds to fn(left, right), in
/// canonical order.  Hash-partitions on the equality slots when any exist,
/// block-nested-loop filters otherwise.
template <class F>
void for_each_join_pair(std::span<const std::uint32_t> leftIds,
                        std::span<const std::uint32_t> rightIds,
                        const Relation& A, const Relation& B,
                        const CompiledQuery& q, F&& fn);

/// Materialized pair list, canonical order.  force_nested_loop bypasses the
/// hash path (used by the physical-plan equivalence tests).
std::vector<IdPair> compute_join(std::span<const std::uint32_t> leftIds,
                                 std::span<const std::uint32_t> rightIds,
                                 const Relation& A, const Relation& B,
                                 const CompiledQuery& q,
                                 bool force_nested_loop = false);

/// Precondition: (u, v) satisfies the join conditions.
JoinedTuple aggregate_pair(const CompiledQuery& q, const Relation& A,
                           const Relation& B, std::uint32_t u, std::uint32_t v);

/// Joins and aggregates into one SoA block, canonical order.
JoinedBlock materialize_join(std::span<const std::uint32_t> leftIds,
                             std::span<const std::uint32_t> rightIds,
                             const Relation& A, const Relation& B,
                             const CompiledQuery& q);

// --- implementation -------------------------------------------------

namespace detail {

struct JoinIndex {
    // right ids grouped by equality key; group ids sorted ascending
    std::vector<std::vector<std::uint32_t>> groups;
    std::vector<std::size_t> lookup_order;  // scratch-free probe support
};

std::size_t hash_key(const Relation& rel, std::span<const int> cols, std::uint32_t row);
bool keys_equal(const Relation& A, std::span<const int> ca, std::uint32_t u,
                const Relation& B, std::span<const int> cb, std::uint32_t v);
bool inequality_ok(const CompiledQuery& q, const Relation& A, const Relation& B,
                   std::uint32_t u, std::uint32_t v);

}  // namespace detail

template <class F>
void for_each_join_pair(std::span<const std::uint32_t> leftIds,
                        std::span<const std::uint32_t> rightIds,
                        const Relation& A, const Relation& B,
                        const CompiledQuery& q, F&& fn) {
    std::vector<int> eq_a, eq_b;
    for (int i = 0; i < q.j; ++i) {
        if (q.join_ops[i] == JoinOp::Eq) {
            eq_a.push_back(q.a.join_cols[i]);
            eq_b.push_back(q.b.join_cols[i]);
        }
    }
    std::vector<std::uint32_t> lsorted(leftIds.begin(), leftIds.end());
    std::sort(lsorted.begin(), lsorted.end());

    if (eq_a.empty()) {
        std::vector<std::uint32_t> rsorted(rightIds.begin(), rightIds.end());
        std::sort(rsorted.begin(), rsorted.end());
        for (std::uint32_t u : lsorted)
            for (std::uint32_t v : rsorted)
                if (join_compatible(q, A, B, u, v)) fn(u, v);
        return;
    }

    // bucket the right side on the equality key
    const std::size_t nbuckets = std::max<std::size_t>(16, rightIds.size() * 2);
    std::vector<std::vector<std::uint32_t>> buckets(nbuckets);
    std::vector<std::uint32_t> rsorted(rightIds.begin(), rightIds.end());
    std::sort(rsorted.begin(), rsorted.end());
    for (std::uint32_t v : rsorted)
        buckets[detail::hash_key(B, eq_b, v) % nbuckets].push_back(v);

    for (std::uint32_t u : lsorted) {
        const auto& bucket = buckets[detail::hash_key(A, eq_a, u) % nbuckets];
        for (std::uint32_t v : bucket)
            if (detail::keys_equal(A, eq_a, u, B, eq_b, v) &&
                detail::inequality_ok(q, A, B, u, v))
                fn(u, v);
    }
}

}  // namespace asjq
