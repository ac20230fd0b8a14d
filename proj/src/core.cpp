#include "asjq/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asjq {

const char* to_string(Pref p) {
    switch (p) {
        case Pref::Min: return "MIN";
        case Pref::Max: return "MAX";
        case Pref::Equal: return "EQUAL";
    }
    return "?";
}

const char* to_string(JoinOp op) {
    switch (op) {
        case JoinOp::Eq: return "EQ";
        case JoinOp::Lt: return "LT";
        case JoinOp::Le: return "LE";
        case JoinOp::Gt: return "GT";
        case JoinOp::Ge: return "GE";
    }
    return "?";
}

const char* to_string(AggFn fn) {
    switch (fn) {
        case AggFn::Sum: return "SUM";
        case AggFn::Avg: return "AVG";
        case AggFn::Min: return "MIN";
        case AggFn::Max: return "MAX";
    }
    return "?";
}

bool agg_is_strict(AggFn fn) { return fn == AggFn::Sum || fn == AggFn::Avg; }

double apply_agg(AggFn fn, double a, double b) {
    switch (fn) {
        case AggFn::Sum: return a + b;
        case AggFn::Avg: return (a + b) / 2.0;
        case AggFn::Min: return std::min(a, b);
        case AggFn::Max: return std::max(a, b);
    }
    return 0.0;
}

Pref derive_join_preference(JoinOp op, Side side) {
    switch (op) {
        case JoinOp::Eq: return Pref::Equal;
        case JoinOp::Lt:
        case JoinOp::Le:
            return side == Side::Left ? Pref::Min : Pref::Max;
        case JoinOp::Gt:
        case JoinOp::Ge:
            return side == Side::Left ? Pref::Max : Pref::Min;
    }
    return Pref::Equal;
}

int RelationSchema::column_index(const std::string& col) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == col) return static_cast<int>(i);
    return -1;
}

namespace {

void check_schema(const RelationSchema& s, std::size_t j, std::size_t n,
                  std::vector<std::string>& errors) {
    std::vector<int> join_seen(j, 0), agg_seen(n, 0);
    for (const Column& c : s.columns) {
        switch (c.kind) {
            case RoleKind::Join:
                if (c.slot < 0 || static_cast<std::size_t>(c.slot) >= j)
                    errors.push_back(s.name + "." + c.name + ": join slot out of range");
                else
                    ++join_seen[c.slot];
                break;
            case RoleKind::Aggregate:
                if (c.slot < 0 || static_cast<std::size_t>(c.slot) >= n)
                    errors.push_back(s.name + "." + c.name + ": aggregate slot out of range");
                else
                    ++agg_seen[c.slot];
                if (c.pref == Pref::Equal)
                    errors.push_back(s.name + "." + c.name + ": EQUAL preference on aggregate attribute");
                break;
            case RoleKind::Local:
                if (c.pref == Pref::Equal)
                    errors.push_back(s.name + "." + c.name + ": EQUAL preference on local attribute");
                break;
        }
    }
    for (std::size_t i = 0; i < j; ++i)
        if (join_seen[i] != 1)
            errors.push_back(s.name + ": join slot " + std::to_string(i) +
                             (join_seen[i] == 0 ? " unused" : " used more than once"));
    for (std::size_t i = 0; i < n; ++i)
        if (agg_seen[i] != 1)
            errors.push_back(s.name + ": aggregate slot " + std::to_string(i) +
                             (agg_seen[i] == 0 ? " unused" : " used more than once"));
}

}  // namespace

Validation validate_query(const QuerySpec& spec) {
    Validation v;
    const std::size_t j = spec.joins.size();
    const std::size_t n = spec.aggregates.size();
    if (n == 0) v.errors.push_back("ASJQ requires at least one aggregate");
    check_schema(spec.left, j, n, v.errors);
    check_schema(spec.right, j, n, v.errors);
    for (const AggSpec& a : spec.aggregates)
        if (a.pref == Pref::Equal)
            v.errors.push_back("aggregate " + a.name + ": preference must be MIN or MAX");

    v.join_regime = JoinRegime::Equi;
    for (JoinOp op : spec.joins)
        if (op != JoinOp::Eq) v.join_regime = JoinRegime::Mixed;
    v.weak_aggregates = false;
    for (const AggSpec& a : spec.aggregates)
        if (!agg_is_strict(a.fn)) v.weak_aggregates = true;
    v.regime = (v.join_regime == JoinRegime::Equi && !v.weak_aggregates)
                   ? GuaranteeRegime::EquiStrict
                   : GuaranteeRegime::Restricted;
    return v;
}

namespace {

std::int8_t sign_of(Pref p) { return p == Pref::Max ? std::int8_t{-1} : std::int8_t{1}; }

SideView build_side(const RelationSchema& s, const QuerySpec& spec, Side side) {
    SideView v;
    const std::size_t j = spec.joins.size();
    const std::size_t n = spec.aggregates.size();
    v.agg_cols.resize(n);
    v.agg_signs.resize(n);
    v.agg_strict.resize(n);
    v.join_cols.resize(j);
    v.join_prefs.resize(j);
    for (std::size_t i = 0; i < s.columns.size(); ++i) {
        const Column& c = s.columns[i];
        switch (c.kind) {
            case RoleKind::Local:
                v.local_cols.push_back(static_cast<int>(i));
                v.local_signs.push_back(sign_of(c.pref));
                break;
            case RoleKind::Aggregate:
                v.agg_cols[c.slot] = static_cast<int>(i);
                v.agg_signs[c.slot] = sign_of(spec.aggregates[c.slot].pref);
                v.agg_strict[c.slot] = agg_is_strict(spec.aggregates[c.slot].fn);
                break;
            case RoleKind::Join:
                v.join_cols[c.slot] = static_cast<int>(i);
                v.join_prefs[c.slot] = derive_join_preference(spec.joins[c.slot], side);
                break;
        }
    }
    return v;
}

}  // namespace

CompiledQuery compile(const QuerySpec& spec) {
    Validation val = validate_query(spec);
    if (!val.ok()) throw std::invalid_argument("compile: invalid query: " + val.errors.front());
    CompiledQuery q;
    q.spec = spec;
    q.a = build_side(spec.left, spec, Side::Left);
    q.b = build_side(spec.right, spec, Side::Right);
    q.join_ops = spec.joins;
    for (const AggSpec& a : spec.aggregates) q.agg_fns.push_back(a.fn);
    q.m1 = static_cast<int>(q.a.local_cols.size());
    q.m2 = static_cast<int>(q.b.local_cols.size());
    q.n = static_cast<int>(spec.aggregates.size());
    q.j = static_cast<int>(spec.joins.size());
    q.joined_signs.reserve(q.joined_dim());
    q.joined_signs.insert(q.joined_signs.end(), q.a.local_signs.begin(), q.a.local_signs.end());
    q.joined_signs.insert(q.joined_signs.end(), q.b.local_signs.begin(), q.b.local_signs.end());
    for (const AggSpec& a : spec.aggregates) q.joined_signs.push_back(sign_of(a.pref));
    return q;
}

const SideView& side_view(const CompiledQuery& q, Side s) {
    return s == Side::Left ? q.a : q.b;
}

bool prune_dominates(const Relation& rel, std::size_t u, std::size_t u2,
                     const SideView& view) {
    std::span<const double> r = rel.row(u), r2 = rel.row(u2);
    for (std::size_t i = 0; i < view.join_cols.size(); ++i) {
        const double x = r[view.join_cols[i]], y = r2[view.join_cols[i]];
        switch (view.join_prefs[i]) {
            case Pref::Equal: if (x != y) return false; break;
            case Pref::Min:   if (x > y) return false;  break;
            case Pref::Max:   if (x < y) return false;  break;
        }
    }
    bool strict = false;
    for (std::size_t i = 0; i < view.local_cols.size(); ++i) {
        const double d = view.local_signs[i] * (r[view.local_cols[i]] - r2[view.local_cols[i]]);
        if (d > 0) return false;
        if (d < 0) strict = true;
    }
    for (std::size_t i = 0; i < view.agg_cols.size(); ++i) {
        const double d = view.agg_signs[i] * (r[view.agg_cols[i]] - r2[view.agg_cols[i]]);
        if (d > 0) return false;
        // weak (MIN/MAX) aggregation can absorb a strictly better input into
        // a tie, so only strict slots justify the strictness requirement
        if (d < 0 && view.agg_strict[i]) strict = true;
    }
    return strict;  // join attributes never supply the strictness
}

bool weak_local_dominates(const Relation& rel, std::size_t u, std::size_t u2,
                          const SideView& view) {
    std::span<const double> r = rel.row(u), r2 = rel.row(u2);
    for (std::size_t i = 0; i < view.local_cols.size(); ++i) {
        const double d = view.local_signs[i] * (r[view.local_cols[i]] - r2[view.local_cols[i]]);
        if (d > 0) return false;
    }
    return true;
}

bool joined_dominates(std::span<const double> a, std::span<const double> b,
                      std::span<const std::int8_t> signs) {
    bool strict = false;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        const double d = signs[i] * (a[i] - b[i]);
        if (d > 0) return false;
        if (d < 0) strict = true;
    }
    return strict;
}

void joined_vector(const CompiledQuery& q, const Relation& A, const Relation& B,
                   std::size_t u, std::size_t v, double* out) {
    std::span<const double> ra = A.row(u), rb = B.row(v);
    double* p = out;
    for (int c : q.a.local_cols) *p++ = ra[c];
    for (int c : q.b.local_cols) *p++ = rb[c];
    for (int i = 0; i < q.n; ++i)
        *p++ = apply_agg(q.agg_fns[i], ra[q.a.agg_cols[i]], rb[q.b.agg_cols[i]]);
}

bool join_compatible(const CompiledQuery& q, const Relation& A, const Relation& B,
                     std::size_t u, std::size_t v) {
    std::span<const double> ra = A.row(u), rb = B.row(v);
    for (int i = 0; i < q.j; ++i) {
        const double x = ra[q.a.join_cols[i]], y = rb[q.b.join_cols[i]];
        switch (q.join_ops[i]) {
            case JoinOp::Eq: if (!(x == y)) return false; break;
            case JoinOp::Lt: if (!(x < y)) return false;  break;
            case JoinOp::Le: if (!(x <= y)) return false; break;
            case JoinOp::Gt: if (!(x > y)) return false;  break;
            case JoinOp::Ge: if (!(x >= y)) return false; break;
        }
    }
    return true;
}

}  // namespace asjq
