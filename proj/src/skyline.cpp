#include "asjq/skyline.hpp"

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace asjq {

std::vector<double> sfs_scores(const Relation& rel, const SideView& view) {
    const std::size_t n = rel.size();
    std::vector<double> score(n, 0.0);

    // (column, sign) pairs of the prune-relevant attributes
    std::vector<std::pair<int, std::int8_t>> attrs;
    for (std::size_t i = 0; i < view.local_cols.size(); ++i)
        attrs.emplace_back(view.local_cols[i], view.local_signs[i]);
    for (std::size_t i = 0; i < view.agg_cols.size(); ++i)
        attrs.emplace_back(view.agg_cols[i], view.agg_signs[i]);
    for (std::size_t i = 0; i < view.join_cols.size(); ++i) {
        if (view.join_prefs[i] == Pref::Equal) continue;
        attrs.emplace_back(view.join_cols[i],
                           view.join_prefs[i] == Pref::Max ? std::int8_t{-1} : std::int8_t{1});
    }

    std::vector<double> vals;
    for (auto [col, sign] : attrs) {
        vals.clear();
        vals.reserve(n);
        for (std::size_t r = 0; r < n; ++r) vals.push_back(sign * rel.row(r)[col]);
        std::vector<double> sorted = vals;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        const double denom = static_cast<double>(sorted.size());
        for (std::size_t r = 0; r < n; ++r) {
            const auto it = std::lower_bound(sorted.begin(), sorted.end(), vals[r]);
            score[r] += static_cast<double>(it - sorted.begin()) / denom;
        }
    }
    return score;
}

Partition prune_skyline(const Relation& rel, const SideView& view, bool parallel) {
    const std::size_t n = rel.size();
    Partition out;
    if (n == 0) return out;

    if (parallel) {
        // definition-style O(N^2) filter, one independent scan per tuple
        std::vector<char> in_sky(n, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
        for (std::int64_t u = 0; u < static_cast<std::int64_t>(n); ++u) {
            bool dominated = false;
            for (std::size_t o = 0; o < n && !dominated; ++o)
                if (o != static_cast<std::size_t>(u) && prune_dominates(rel, o, u, view))
                    dominated = true;
            in_sky[u] = !dominated;
        }
        for (std::uint32_t u = 0; u < n; ++u)
            (in_sky[u] ? out.skyline : out.rest).push_back(u);
        return out;
    }

    // SFS: a prune-dominator always scores strictly lower, so testing each
    // tuple against the accepted prefix is exhaustive.
    std::vector<double> score = sfs_scores(rel, view);
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
        return score[x] != score[y] ? score[x] < score[y] : x < y;
    });

    std::vector<std::uint32_t> accepted;
    for (std::uint32_t u : order) {
        bool dominated = false;
        for (std::uint32_t s : accepted)
            if (prune_dominates(rel, s, u, view)) { dominated = true; break; }
        if (dominated)
            out.rest.push_back(u);
        else
            accepted.push_back(u);
    }
    out.skyline = accepted;
    std::sort(out.skyline.begin(), out.skyline.end());
    std::sort(out.rest.begin(), out.rest.end());
    return out;
}

Partition weak_local_partition(std::span<const std::uint32_t> ids,
                               const Relation& rel, const SideView& view) {
    Partition out;
    for (std::uint32_t u : ids) {
        bool dominated = false;
        for (std::uint32_t o : ids)
            if (o != u && weak_local_dominates(rel, o, u, view)) { dominated = true; break; }
        (dominated ? out.rest : out.skyline).push_back(u);
    }
    return out;
}

DominatorInfo find_weak_local_dominators(std::span<const std::uint32_t> ids,
                                         const Relation& rel, const SideView& view,
                                         bool parallel) {
    DominatorInfo info;
    info.part = weak_local_partition(ids, rel, view);
    const auto& rest = info.part.rest;
    std::vector<std::vector<std::uint32_t>> lists(rest.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(rest.size()); ++i) {
        const std::uint32_t u = rest[i];
        for (std::uint32_t o : ids)
            if (o != u && weak_local_dominates(rel, o, u, view)) lists[i].push_back(o);
    }
    for (std::size_t i = 0; i < rest.size(); ++i)
        info.dominators.emplace(rest[i], std::move(lists[i]));
    return info;
}

LayerDecomposition peel_layers(std::span<const std::uint32_t> ids,
                               const Relation& rel, const SideView& view,
                               std::size_t delta) {
    LayerDecomposition out;
    std::vector<std::uint32_t> rest(ids.begin(), ids.end());
    while (rest.size() > delta) {
        Partition p = weak_local_partition(rest, rel, view);
        if (p.skyline.empty() || p.rest.empty()) break;
        out.layers.push_back(std::move(p.skyline));
        rest = std::move(p.rest);
    }
    out.residual = std::move(rest);
    return out;
}

}  // namespace asjq
