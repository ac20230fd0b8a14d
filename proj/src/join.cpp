#include "asjq/join.hpp"

#include <cstring>

namespace asjq {
namespace detail {

namespace {
std::uint64_t bits_of(double d) {
    if (d == 0.0) d = 0.0;  // collapse -0.0
    std::uint64_t u;
    std::memcpy(&u, &d, sizeof u);
    return u;
}
}  // namespace

std::size_t hash_key(const Relation& rel, std::span<const int> cols, std::uint32_t row) {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    std::span<const double> r = rel.row(row);
    for (int c : cols) {
        h ^= bits_of(r[c]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<std::size_t>(h);
}

bool keys_equal(const Relation& A, std::span<const int> ca, std::uint32_t u,
                const Relation& B, std::span<const int> cb, std::uint32_t v) {
    std::span<const double> ra = A.row(u), rb = B.row(v);
    for (std::size_t i = 0; i < ca.size(); ++i)
        if (ra[ca[i]] != rb[cb[i]]) return false;
    return true;
}

bool inequality_ok(const CompiledQuery& q, const Relation& A, const Relation& B,
                   std::uint32_t u, std::uint32_t v) {
    std::span<const double> ra = A.row(u), rb = B.row(v);
    for (int i = 0; i < q.j; ++i) {
        const double x = ra[q.a.join_cols[i]], y = rb[q.b.join_cols[i]];
        switch (q.join_ops[i]) {
            case JoinOp::Eq: break;  // handled by the hash partition
            case JoinOp::Lt: if (!(x < y)) return false;  break;
            case JoinOp::Le: if (!(x <= y)) return false; break;
            case JoinOp::Gt: if (!(x > y)) return false;  break;
            case JoinOp::Ge: if (!(x >= y)) return false; break;
        }
    }
    return true;
}

}  // namespace detail

std::vector<IdPair> compute_join(std::span<const std::uint32_t> leftIds,
                                 std::span<const std::uint32_t> rightIds,
                                 const Relation& A, const Relation& B,
                                 const CompiledQuery& q, bool force_nested_loop) {
    std::vector<IdPair> out;
    if (force_nested_loop) {
        std::vector<std::uint32_t> ls(leftIds.begin(), leftIds.end());
        std::vector<std::uint32_t> rs(rightIds.begin(), rightIds.end());
        std::sort(ls.begin(), ls.end());
        std::sort(rs.begin(), rs.end());
        for (std::uint32_t u : ls)
            for (std::uint32_t v : rs)
                if (join_compatible(q, A, B, u, v)) out.push_back({u, v});
        return out;
    }
    for_each_join_pair(leftIds, rightIds, A, B, q,
                       [&](std::uint32_t u, std::uint32_t v) { out.push_back({u, v}); });
    return out;
}

JoinedTuple aggregate_pair(const CompiledQuery& q, const Relation& A,
                           const Relation& B, std::uint32_t u, std::uint32_t v) {
    JoinedTuple t;
    t.left = u;
    t.right = v;
    t.vec.resize(q.joined_dim());
    joined_vector(q, A, B, u, v, t.vec.data());
    return t;
}

JoinedBlock materialize_join(std::span<const std::uint32_t> leftIds,
                             std::span<const std::uint32_t> rightIds,
                             const Relation& A, const Relation& B,
                             const CompiledQuery& q) {
    JoinedBlock block;
    block.dim = q.joined_dim();
    for_each_join_pair(leftIds, rightIds, A, B, q, [&](std::uint32_t u, std::uint32_t v) {
        block.ids.push_back({u, v});
        const std::size_t off = block.vec.size();
        block.vec.resize(off + block.dim);
        joined_vector(q, A, B, u, v, block.vec.data() + off);
    });
    return block;
}

}  // namespace asjq
