#include "asjq/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace asjq {

namespace {

// Everything below re-derives what it needs from the QuerySpec alone.

struct OracleCols {
    std::vector<int> join_a, join_b;
    std::vector<int> agg_a, agg_b;
    std::vector<int> loc_a, loc_b;
    std::vector<Pref> loc_a_pref, loc_b_pref;
};

int find_slot(const RelationSchema& s, RoleKind kind, int slot) {
    for (std::size_t i = 0; i < s.columns.size(); ++i)
        if (s.columns[i].kind == kind && s.columns[i].slot == slot)
            return static_cast<int>(i);
    throw std::invalid_argument("oracle: missing slot " + std::to_string(slot));
}

OracleCols resolve(const QuerySpec& spec) {
    OracleCols c;
    for (int s = 0; s < static_cast<int>(spec.joins.size()); ++s) {
        c.join_a.push_back(find_slot(spec.left, RoleKind::Join, s));
        c.join_b.push_back(find_slot(spec.right, RoleKind::Join, s));
    }
    for (int s = 0; s < static_cast<int>(spec.aggregates.size()); ++s) {
        c.agg_a.push_back(find_slot(spec.left, RoleKind::Aggregate, s));
        c.agg_b.push_back(find_slot(spec.right, RoleKind::Aggregate, s));
    }
    for (const Column& col : spec.left.columns)
        if (col.kind == RoleKind::Local) {
            c.loc_a.push_back(spec.left.column_index(col.name));
            c.loc_a_pref.push_back(col.pref);
        }
    for (const Column& col : spec.right.columns)
        if (col.kind == RoleKind::Local) {
            c.loc_b.push_back(spec.right.column_index(col.name));
            c.loc_b_pref.push_back(col.pref);
        }
    return c;
}

bool pair_joins(const QuerySpec& spec, const OracleCols& c,
                std::span<const double> ra, std::span<const double> rb) {
    for (std::size_t i = 0; i < spec.joins.size(); ++i) {
        const double x = ra[c.join_a[i]], y = rb[c.join_b[i]];
        bool ok = false;
        switch (spec.joins[i]) {
            case JoinOp::Eq: ok = x == y; break;
            case JoinOp::Lt: ok = x < y;  break;
            case JoinOp::Le: ok = x <= y; break;
            case JoinOp::Gt: ok = x > y;  break;
            case JoinOp::Ge: ok = x >= y; break;
        }
        if (!ok) return false;
    }
    return true;
}

double combine(AggFn fn, double a, double b) {
    switch (fn) {
        case AggFn::Sum: return a + b;
        case AggFn::Avg: return (a + b) / 2.0;
        case AggFn::Min: return a < b ? a : b;
        case AggFn::Max: return a > b ? a : b;
    }
    throw std::invalid_argument("oracle: unknown aggregate");
}

struct OracleTuple {
    IdPair id;
    std::vector<double> vals;   // locals(A) ++ locals(B) ++ aggregates
};

// better/worse per component, read off the preferences each time
bool dominates(const OracleTuple& a, const OracleTuple& b,
               const std::vector<Pref>& prefs) {
    bool strict = false;
    for (std::size_t i = 0; i < prefs.size(); ++i) {
        const double x = a.vals[i], y = b.vals[i];
        if (prefs[i] == Pref::Min) {
            if (x > y) return false;
            if (x < y) strict = true;
        } else {
            if (x < y) return false;
            if (x > y) strict = true;
        }
    }
    return strict;
}

}  // namespace

std::vector<IdPair> brute_force_asjq(const Relation& A, const Relation& B,
                                     const QuerySpec& spec) {
    const OracleCols c = resolve(spec);

    std::vector<Pref> prefs = c.loc_a_pref;
    prefs.insert(prefs.end(), c.loc_b_pref.begin(), c.loc_b_pref.end());
    for (const AggSpec& a : spec.aggregates) prefs.push_back(a.pref);

    std::vector<OracleTuple> joined;
    for (std::uint32_t u = 0; u < A.size(); ++u) {
        const std::span<const double> ra = A.row(u);
        for (std::uint32_t v = 0; v < B.size(); ++v) {
            const std::span<const double> rb = B.row(v);
            if (!pair_joins(spec, c, ra, rb)) continue;
            OracleTuple t;
            t.id = {u, v};
            for (int col : c.loc_a) t.vals.push_back(ra[col]);
            for (int col : c.loc_b) t.vals.push_back(rb[col]);
            for (std::size_t s = 0; s < spec.aggregates.size(); ++s)
                t.vals.push_back(
                    combine(spec.aggregates[s].fn, ra[c.agg_a[s]], rb[c.agg_b[s]]));
            joined.push_back(std::move(t));
        }
    }

    std::vector<IdPair> out;
    for (std::size_t i = 0; i < joined.size(); ++i) {
        bool dominated = false;
        for (std::size_t k = 0; k < joined.size(); ++k)
            if (k != i && dominates(joined[k], joined[i], prefs)) { dominated = true; break; }
        if (!dominated) out.push_back(joined[i].id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> brute_force_skyline(
    std::size_t n, const std::function<bool(std::size_t, std::size_t)>& dom) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        bool dominated = false;
        for (std::size_t k = 0; k < n && !dominated; ++k)
            if (k != i && dom(k, i)) dominated = true;
        if (!dominated) out.push_back(i);
    }
    return out;
}

}  // namespace asjq
