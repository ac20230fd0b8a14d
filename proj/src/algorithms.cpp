#include "asjq/algorithms.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace asjq {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::uint32_t> all_ids(const Relation& r) {
    std::vector<std::uint32_t> ids(r.size());
    std::iota(ids.begin(), ids.end(), 0u);
    return ids;
}

// -1: a dominates b, +1: b dominates a, 0: incomparable or equal
int compare_vectors(std::span<const double> a, std::span<const double> b,
                    std::span<const std::int8_t> signs) {
    bool a_better = false, b_better = false;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        const double d = signs[i] * (a[i] - b[i]);
        if (d < 0) a_better = true;
        else if (d > 0) b_better = true;
        if (a_better && b_better) return 0;
    }
    if (a_better) return -1;
    if (b_better) return 1;
    return 0;
}

// ------------------------------------------------------------------
// Leveled decomposition of the prune skylines and the block grid of
// valid A0 x B0 pairs, shared by MSC / dominator / iterative.

struct Levels {
    std::vector<std::vector<std::uint32_t>> sets;  // level 1.. (residual last)
    int layer_count = 0;  // how many leading sets are weak-local layers

    int count() const { return static_cast<int>(sets.size()); }
    bool residual_last() const { return layer_count < count(); }
    bool has_level1_layer() const { return layer_count >= 1; }
};

Levels levels_from_partition(Partition p) {
    Levels lv;
    if (!p.skyline.empty()) {
        lv.sets.push_back(std::move(p.skyline));
        lv.layer_count = 1;
    }
    if (!p.rest.empty()) lv.sets.push_back(std::move(p.rest));
    return lv;
}

Levels levels_from_peel(LayerDecomposition ld) {
    Levels lv;
    lv.sets = std::move(ld.layers);
    lv.layer_count = static_cast<int>(lv.sets.size());
    if (!ld.residual.empty()) lv.sets.push_back(std::move(ld.residual));
    return lv;
}

struct Grid {
    int ka = 0, kb = 0;
    std::vector<JoinedBlock> blocks;  // row-major, 1-based via at()
    std::uint64_t pairs = 0;

    JoinedBlock& at(int p, int q) { return blocks[(p - 1) * kb + (q - 1)]; }
    const JoinedBlock& at(int p, int q) const { return blocks[(p - 1) * kb + (q - 1)]; }
};

Grid build_grid(const Relation& A, const Relation& B, const CompiledQuery& q,
                std::span<const std::uint32_t> a0, std::span<const std::uint32_t> b0,
                const Levels& la, const Levels& lb) {
    Grid g;
    g.ka = std::max(1, la.count());
    g.kb = std::max(1, lb.count());
    g.blocks.resize(static_cast<std::size_t>(g.ka) * g.kb);
    for (JoinedBlock& b : g.blocks) b.dim = q.joined_dim();

    std::vector<int> lofA(A.size(), 0), lofB(B.size(), 0);
    for (int p = 1; p <= la.count(); ++p)
        for (std::uint32_t id : la.sets[p - 1]) lofA[id] = p;
    for (int p = 1; p <= lb.count(); ++p)
        for (std::uint32_t id : lb.sets[p - 1]) lofB[id] = p;

    std::vector<double> buf(q.joined_dim());
    for_each_join_pair(a0, b0, A, B, q, [&](std::uint32_t u, std::uint32_t v) {
        ++g.pairs;
        joined_vector(q, A, B, u, v, buf.data());
        g.at(lofA[u], lofB[v]).push({u, v}, buf);
    });
    return g;
}

bool block_guaranteed(int p, int q, const Levels& la, const Levels& lb,
                      GuaranteeRegime regime, Mode mode) {
    const bool a1 = p == 1 && la.has_level1_layer();
    const bool b1 = q == 1 && lb.has_level1_layer();
    if (a1 && b1) return true;  // A1 x B1 is sound in every regime
    const bool all_level1 = mode == Mode::PaperFaithful || regime == GuaranteeRegime::EquiStrict;
    return all_level1 && (a1 || b1);
}

void emit_block(const JoinedBlock& blk, std::vector<IdPair>& out, RunReport& rep,
                int phase, ExecObserver* obs) {
    for (IdPair id : blk.ids) {
        out.push_back(id);
        if (phase == 1) ++rep.phase1_emitted; else ++rep.phase2_emitted;
        if (obs) obs->on_emit(id, phase);
    }
}

GuaranteeRegime regime_of(const CompiledQuery& q) {
    return validate_query(q.spec).regime;
}

// Verification of all candidate blocks of a grid against per-block target
// lists; shared by MSC (targets = whole pool) and iterative (target_sets).
template <class TargetsFn>
void verify_grid(const Grid& g, const Levels& la, const Levels& lb,
                 GuaranteeRegime regime, const RunOptions& opts,
                 TargetsFn&& targets_of, const CompiledQuery& q,
                 std::vector<IdPair>& out, RunReport& rep) {
    // guaranteed phase first
    for (int p = 1; p <= g.ka; ++p)
        for (int qq = 1; qq <= g.kb; ++qq)
            if (block_guaranteed(p, qq, la, lb, regime, opts.mode))
                emit_block(g.at(p, qq), out, rep, 1, opts.observer);

    std::vector<char> keep;
    for (int p = 1; p <= g.ka; ++p) {
        for (int qq = 1; qq <= g.kb; ++qq) {
            if (block_guaranteed(p, qq, la, lb, regime, opts.mode)) continue;
            const JoinedBlock& cand = g.at(p, qq);
            if (cand.size() == 0) continue;
            rep.phase2_candidates += cand.size();
            std::vector<const JoinedBlock*> targets = targets_of(p, qq);
            rep.comparisons += verify_candidates(cand, targets, q.joined_signs, keep,
                                                 opts.parallel, opts.observer);
            for (std::size_t i = 0; i < cand.size(); ++i) {
                if (!keep[i]) continue;
                out.push_back(cand.ids[i]);
                ++rep.phase2_emitted;
                if (opts.observer) opts.observer->on_emit(cand.ids[i], 2);
            }
        }
    }
}

}  // namespace

std::vector<LevelPair> target_sets(int p, int q, int ka, int kb,
                                   bool a_res, bool b_res, Mode mode) {
    std::vector<LevelPair> out;
    if (mode == Mode::Verified) {
        for (int a = 1; a <= p; ++a)
            for (int b = 1; b <= q; ++b) out.push_back({a, b});
        return out;
    }
    // PaperFaithful: lower-rectangle of strictly shallower layers, plus the
    // level-1 rows/columns when a side is the residual set.
    const bool p_primed = a_res && p == ka;
    const bool q_primed = b_res && q == kb;
    const int p_eff = p_primed ? p - 1 : p;
    const int q_eff = q_primed ? q - 1 : q;
    for (int a = 1; a < p_eff; ++a)
        for (int b = 1; b < q_eff; ++b) out.push_back({a, b});
    if (p_primed)
        for (int a = 1; a <= ka; ++a) out.push_back({a, 1});
    if (q_primed)
        for (int b = 1; b <= kb; ++b) out.push_back({1, b});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    // never the candidate block itself
    std::erase(out, LevelPair{p, q});
    return out;
}

std::vector<IdPair> guaranteed_set(const Partition& pa, const Partition& pb,
                                   const Relation& A, const Relation& B,
                                   const CompiledQuery& q,
                                   GuaranteeRegime regime, Mode mode) {
    std::vector<IdPair> out = compute_join(pa.skyline, pb.skyline, A, B, q);
    if (mode == Mode::PaperFaithful || regime == GuaranteeRegime::EquiStrict) {
        for (IdPair id : compute_join(pa.skyline, pb.rest, A, B, q)) out.push_back(id);
        for (IdPair id : compute_join(pa.rest, pb.skyline, A, B, q)) out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IdPair> skyline_with_seed(const JoinedBlock& candidates,
                                      const JoinedBlock& pool,
                                      const CompiledQuery& q) {
    std::vector<IdPair> out;
    const JoinedBlock* targets[] = {&pool};
    std::vector<char> keep;
    verify_candidates(candidates, targets, q.joined_signs, keep, false);
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (keep[i]) out.push_back(candidates.ids[i]);
    return out;
}

std::vector<IdPair> dominator_check_pairs(std::uint32_t u, std::uint32_t v,
                                          const DominatorInfo& da,
                                          const DominatorInfo& db,
                                          const Relation& A, const Relation& B,
                                          const CompiledQuery& q, Mode mode) {
    auto closure = [mode](std::uint32_t id, const DominatorInfo& info) {
        std::vector<std::uint32_t> ids;
        if (auto it = info.dominators.find(id); it != info.dominators.end())
            ids = it->second;
        if (mode == Mode::Verified) ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        return ids;
    };
    const std::vector<std::uint32_t> as = closure(u, da), bs = closure(v, db);
    std::vector<IdPair> out;
    for (std::uint32_t x : as)
        for (std::uint32_t y : bs) {
            if (x == u && y == v) continue;
            if (join_compatible(q, A, B, x, y)) out.push_back({x, y});
        }
    return out;
}

// ------------------------------------------------------------------

RunResult run_naive(const Relation& A, const Relation& B, const CompiledQuery& q,
                    const RunOptions& opts) {
    const auto start = Clock::now();
    RunResult res;
    RunReport& rep = res.report;

    const int dim = q.joined_dim();
    std::vector<IdPair> wids;       // block-nested-loop window
    std::vector<double> wvec;
    std::vector<double> x(dim);

    const std::vector<std::uint32_t> ia = all_ids(A), ib = all_ids(B);
    for_each_join_pair(ia, ib, A, B, q, [&](std::uint32_t u, std::uint32_t v) {
        ++rep.join_pairs;
        joined_vector(q, A, B, u, v, x.data());
        std::size_t i = 0;
        bool dominated = false;
        while (i < wids.size()) {
            std::span<const double> w{wvec.data() + i * dim, static_cast<std::size_t>(dim)};
            ++rep.comparisons;
            const int c = compare_vectors(w, x, q.joined_signs);
            if (c < 0) { dominated = true; break; }
            if (c > 0) {
                // window tuple dominated by the newcomer: swap-remove
                const std::size_t last = wids.size() - 1;
                wids[i] = wids[last];
                std::copy_n(wvec.data() + last * dim, dim, wvec.data() + i * dim);
                wids.pop_back();
                wvec.resize(last * dim);
            } else {
                ++i;
            }
        }
        if (!dominated) {
            wids.push_back({u, v});
            wvec.insert(wvec.end(), x.begin(), x.end());
        }
    });

    rep.phase2_candidates = rep.join_pairs;
    rep.phase2_emitted = wids.size();
    res.result = std::move(wids);
    std::sort(res.result.begin(), res.result.end());
    if (opts.observer)
        for (IdPair id : res.result) opts.observer->on_emit(id, 2);
    rep.wall_ms = ms_since(start);
    return res;
}

RunResult run_msc(const Relation& A, const Relation& B, const CompiledQuery& q,
                  const RunOptions& opts) {
    const auto start = Clock::now();
    RunResult res;
    const GuaranteeRegime regime = regime_of(q);

    const Partition a0 = prune_skyline(A, q.a);
    const Partition b0 = prune_skyline(B, q.b);
    const Levels la = levels_from_partition(weak_local_partition(a0.skyline, A, q.a));
    const Levels lb = levels_from_partition(weak_local_partition(b0.skyline, B, q.b));
    const Grid g = build_grid(A, B, q, a0.skyline, b0.skyline, la, lb);
    res.report.join_pairs = g.pairs;

    // phase 2 checks against the entire candidate pool R u R'
    std::vector<const JoinedBlock*> pool;
    for (const JoinedBlock& b : g.blocks)
        if (b.size() > 0) pool.push_back(&b);

    verify_grid(g, la, lb, regime, opts, [&](int, int) { return pool; }, q,
                res.result, res.report);
    std::sort(res.result.begin(), res.result.end());
    res.report.wall_ms = ms_since(start);
    return res;
}

RunResult run_dominator(const Relation& A, const Relation& B, const CompiledQuery& q,
                        const RunOptions& opts) {
    const auto start = Clock::now();
    RunResult res;
    RunReport& rep = res.report;
    const GuaranteeRegime regime = regime_of(q);

    const Partition a0 = prune_skyline(A, q.a);
    const Partition b0 = prune_skyline(B, q.b);
    const DominatorInfo da = find_weak_local_dominators(a0.skyline, A, q.a, opts.parallel);
    const DominatorInfo db = find_weak_local_dominators(b0.skyline, B, q.b, opts.parallel);
    const Levels la = levels_from_partition(da.part);
    const Levels lb = levels_from_partition(db.part);
    const Grid g = build_grid(A, B, q, a0.skyline, b0.skyline, la, lb);
    rep.join_pairs = g.pairs;

    for (int p = 1; p <= g.ka; ++p)
        for (int qq = 1; qq <= g.kb; ++qq)
            if (block_guaranteed(p, qq, la, lb, regime, opts.mode))
                emit_block(g.at(p, qq), res.result, rep, 1, opts.observer);

    // flatten candidates, then verify each against its dominator closure
    std::vector<IdPair> cands;
    for (int p = 1; p <= g.ka; ++p)
        for (int qq = 1; qq <= g.kb; ++qq)
            if (!block_guaranteed(p, qq, la, lb, regime, opts.mode))
                for (IdPair id : g.at(p, qq).ids) cands.push_back(id);
    rep.phase2_candidates = cands.size();

    const int dim = q.joined_dim();
    const int agg_off = q.m1 + q.m2;
    std::vector<char> keep(cands.size(), 0);
    std::uint64_t comps = 0;
    const bool par = opts.parallel && opts.observer == nullptr;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : comps) if (par)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(cands.size()); ++i) {
        const IdPair c = cands[i];
        std::vector<double> cv(dim), dv(dim);
        joined_vector(q, A, B, c.left, c.right, cv.data());
        bool dominated = false;
        for (IdPair d : dominator_check_pairs(c.left, c.right, da, db, A, B, q, opts.mode)) {
            joined_vector(q, A, B, d.left, d.right, dv.data());
            ++comps;
            if (opts.observer) opts.observer->on_phase2_compare(c, d);
            if (opts.mode == Mode::Verified) {
                dominated = joined_dominates(dv, cv, q.joined_signs);
            } else {
                // the locals are dominated by construction; only the
                // aggregate attributes need to be checked
                dominated = true;
                for (int k = agg_off; k < dim; ++k)
                    if (q.joined_signs[k] * (dv[k] - cv[k]) > 0) { dominated = false; break; }
            }
            if (dominated) break;
        }
        keep[i] = !dominated;
    }
    rep.comparisons += comps;

    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!keep[i]) continue;
        res.result.push_back(cands[i]);
        ++rep.phase2_emitted;
        if (opts.observer) opts.observer->on_emit(cands[i], 2);
    }
    std::sort(res.result.begin(), res.result.end());
    rep.wall_ms = ms_since(start);
    return res;
}

RunResult run_iterative(const Relation& A, const Relation& B, const CompiledQuery& q,
                        const RunOptions& opts) {
    const auto start = Clock::now();
    RunResult res;
    const GuaranteeRegime regime = regime_of(q);

    const Partition a0 = prune_skyline(A, q.a);
    const Partition b0 = prune_skyline(B, q.b);
    const Levels la = levels_from_peel(peel_layers(a0.skyline, A, q.a, opts.delta));
    const Levels lb = levels_from_peel(peel_layers(b0.skyline, B, q.b, opts.delta));
    const Grid g = build_grid(A, B, q, a0.skyline, b0.skyline, la, lb);
    res.report.join_pairs = g.pairs;

    auto targets_of = [&](int p, int qq) {
        std::vector<const JoinedBlock*> out;
        for (LevelPair t : target_sets(p, qq, g.ka, g.kb, la.residual_last(),
                                       lb.residual_last(), opts.mode)) {
            const JoinedBlock& blk = g.at(t.a, t.b);
            if (blk.size() > 0) out.push_back(&blk);
        }
        return out;
    };
    verify_grid(g, la, lb, regime, opts, targets_of, q, res.result, res.report);
    std::sort(res.result.begin(), res.result.end());
    res.report.wall_ms = ms_since(start);
    return res;
}

bool single_aggregate_eligible(const CompiledQuery& q) {
    if (q.n != 1 || !agg_is_strict(q.agg_fns[0])) return false;
    for (JoinOp op : q.join_ops)
        if (op != JoinOp::Eq) return false;
    return true;
}

bool single_aggregate_sound(const Relation& A, const Relation& B,
                            const CompiledQuery& q) {
    if (!single_aggregate_eligible(q)) return false;
    auto constant_keys = [](const Relation& rel, const SideView& view) {
        for (int col : view.join_cols)
            for (std::size_t r = 1; r < rel.size(); ++r)
                if (rel.row(r)[col] != rel.row(0)[col]) return false;
        return true;
    };
    return constant_keys(A, q.a) && constant_keys(B, q.b);
}

RunResult run_single_aggregate(const Relation& A, const Relation& B,
                               const CompiledQuery& q, const RunOptions& opts) {
    if (!single_aggregate_eligible(q))
        throw std::invalid_argument(
            "single-aggregate fast path requires exactly one SUM/AVG aggregate and "
            "equality joins only; use a general algorithm");
    if (opts.mode == Mode::Verified && !single_aggregate_sound(A, B, q))
        throw std::invalid_argument(
            "single-aggregate fast path is exact only for a single join-key group; "
            "with several key groups a cross-group pair can dominate the result of "
            "another group, so use a general algorithm (or PaperFaithful mode)");
    const auto start = Clock::now();
    RunResult res;
    const Partition a0 = prune_skyline(A, q.a);
    const Partition b0 = prune_skyline(B, q.b);
    res.result = compute_join(a0.skyline, b0.skyline, A, B, q);
    res.report.join_pairs = res.result.size();
    res.report.phase1_emitted = res.result.size();
    if (opts.observer)
        for (IdPair id : res.result) opts.observer->on_emit(id, 1);
    res.report.wall_ms = ms_since(start);
    return res;
}

RunResult run(Algo algo, const Relation& A, const Relation& B,
              const CompiledQuery& q, const RunOptions& opts) {
    switch (algo) {
        case Algo::Naive: return run_naive(A, B, q, opts);
        case Algo::Msc: return run_msc(A, B, q, opts);
        case Algo::Dominator: return run_dominator(A, B, q, opts);
        case Algo::Iterative: return run_iterative(A, B, q, opts);
        case Algo::SingleAggregate: return run_single_aggregate(A, B, q, opts);
        case Algo::Auto: {
            const bool fast = opts.mode == Mode::Verified
                                  ? single_aggregate_sound(A, B, q)
                                  : single_aggregate_eligible(q);
            return fast ? run_single_aggregate(A, B, q, opts)
                        : run_iterative(A, B, q, opts);
        }
    }
    throw std::invalid_argument("unknown algorithm");
}

}  // namespace asjq
