#include <doctest.h>

#include "asjq/core.hpp"
#include "test_support.hpp"

using namespace asjq;
using test_support::make_relation;

TEST_CASE("join operators convert to derived skyline preferences") {
    // EQ -> EQUAL on both sides; LT/LE -> left MIN, right MAX;
    // GT/GE -> left MAX, right MIN
    CHECK(derive_join_preference(JoinOp::Eq, Side::Left) == Pref::Equal);
    CHECK(derive_join_preference(JoinOp::Eq, Side::Right) == Pref::Equal);
    CHECK(derive_join_preference(JoinOp::Lt, Side::Left) == Pref::Min);
    CHECK(derive_join_preference(JoinOp::Lt, Side::Right) == Pref::Max);
    CHECK(derive_join_preference(JoinOp::Le, Side::Left) == Pref::Min);
    CHECK(derive_join_preference(JoinOp::Le, Side::Right) == Pref::Max);
    CHECK(derive_join_preference(JoinOp::Gt, Side::Left) == Pref::Max);
    CHECK(derive_join_preference(JoinOp::Gt, Side::Right) == Pref::Min);
    CHECK(derive_join_preference(JoinOp::Ge, Side::Left) == Pref::Max);
    CHECK(derive_join_preference(JoinOp::Ge, Side::Right) == Pref::Min);
}

TEST_CASE("aggregate strictness and application") {
    CHECK(agg_is_strict(AggFn::Sum));
    CHECK(agg_is_strict(AggFn::Avg));
    CHECK_FALSE(agg_is_strict(AggFn::Min));
    CHECK_FALSE(agg_is_strict(AggFn::Max));
    CHECK(apply_agg(AggFn::Sum, 162, 162) == 324);
    CHECK(apply_agg(AggFn::Avg, 1, 3) == 2);
    CHECK(apply_agg(AggFn::Min, 5, 3) == 3);
    CHECK(apply_agg(AggFn::Max, 5, 3) == 5);
}

namespace {

QuerySpec tiny_spec(AggFn fn = AggFn::Sum, JoinOp op = JoinOp::Eq) {
    QuerySpec s;
    s.left.name = "A";
    s.left.columns = {{"k", RoleKind::Join, 0, Pref::Min},
                      {"x", RoleKind::Local, -1, Pref::Min},
                      {"g", RoleKind::Aggregate, 0, Pref::Min}};
    s.right.name = "B";
    s.right.columns = {{"k", RoleKind::Join, 0, Pref::Min},
                       {"y", RoleKind::Local, -1, Pref::Max},
                       {"g", RoleKind::Aggregate, 0, Pref::Min}};
    s.joins = {op};
    s.aggregates = {{"total", fn, Pref::Min}};
    return s;
}

}  // namespace

TEST_CASE("validation classifies regimes and rejects bad specs") {
    Validation v = validate_query(tiny_spec());
    REQUIRE(v.ok());
    CHECK(v.join_regime == JoinRegime::Equi);
    CHECK(v.regime == GuaranteeRegime::EquiStrict);
    CHECK_FALSE(v.weak_aggregates);

    v = validate_query(tiny_spec(AggFn::Min));
    CHECK(v.regime == GuaranteeRegime::Restricted);
    CHECK(v.weak_aggregates);

    v = validate_query(tiny_spec(AggFn::Sum, JoinOp::Lt));
    CHECK(v.join_regime == JoinRegime::Mixed);
    CHECK(v.regime == GuaranteeRegime::Restricted);

    QuerySpec no_agg = tiny_spec();
    no_agg.aggregates.clear();
    // the aggregate columns now point at a non-existent slot as well
    CHECK_FALSE(validate_query(no_agg).ok());

    QuerySpec equal_local = tiny_spec();
    equal_local.left.columns[1].pref = Pref::Equal;
    CHECK_FALSE(validate_query(equal_local).ok());
    CHECK_THROWS_AS((void)compile(equal_local), std::invalid_argument);

    QuerySpec missing_join = tiny_spec();
    missing_join.left.columns[0].kind = RoleKind::Local;
    CHECK_FALSE(validate_query(missing_join).ok());
}

TEST_CASE("prune dominance is join-aware, strictness from locals/aggregates only") {
    const CompiledQuery q = compile(tiny_spec());
    //            k    x    g
    Relation A = make_relation(q.spec.left, {
        1,   2,   5,    // 0
        1,   3,   6,    // 1: dominated by 0 (same key, worse local+agg)
        2,   1,   1,    // 2: different key -> incomparable under EQ
        1,   2,   5,    // 3: exact duplicate of 0 -> no strict attribute
    });
    CHECK(prune_dominates(A, 0, 1, q.a));
    CHECK_FALSE(prune_dominates(A, 1, 0, q.a));
    CHECK_FALSE(prune_dominates(A, 2, 1, q.a));   // key mismatch
    CHECK_FALSE(prune_dominates(A, 0, 3, q.a));   // tie everywhere
    CHECK_FALSE(prune_dominates(A, 0, 0, q.a));   // irreflexive
}

TEST_CASE("inequality joins derive one-sided join-attribute dominance") {
    const CompiledQuery q = compile(tiny_spec(AggFn::Sum, JoinOp::Lt));
    // left side: smaller k preferred-or-equal (more join partners)
    Relation A = make_relation(q.spec.left, {
        1, 2, 5,   // 0
        4, 2, 5,   // 1: same local/agg, larger key
    });
    CHECK_FALSE(prune_dominates(A, 0, 1, q.a));  // no strict local/agg attr
    Relation A2 = make_relation(q.spec.left, {
        1, 2, 4,   // 0: smaller key and better aggregate
        4, 2, 5,   // 1
    });
    CHECK(prune_dominates(A2, 0, 1, q.a));
    CHECK_FALSE(prune_dominates(A2, 1, 0, q.a));  // worse join coverage
}

TEST_CASE("weak-local dominance ignores joins/aggregates and admits ties") {
    const CompiledQuery q = compile(tiny_spec());
    Relation A = make_relation(q.spec.left, {
        1, 2, 9,   // 0
        7, 2, 1,   // 1: same local, different join/agg
        1, 3, 1,   // 2: worse local
    });
    CHECK(weak_local_dominates(A, 0, 1, q.a));
    CHECK(weak_local_dominates(A, 1, 0, q.a));  // tie both ways
    CHECK(weak_local_dominates(A, 0, 2, q.a));
    CHECK_FALSE(weak_local_dominates(A, 2, 0, q.a));
}

TEST_CASE("joined vectors and joined dominance") {
    const CompiledQuery q = compile(tiny_spec());
    Relation A = make_relation(q.spec.left, {1, 2, 5});
    Relation B = make_relation(q.spec.right, {1, 4, 7});
    REQUIRE(q.joined_dim() == 3);
    double v[3];
    joined_vector(q, A, B, 0, 0, v);
    CHECK(v[0] == 2);    // left local x (MIN)
    CHECK(v[1] == 4);    // right local y (MAX)
    CHECK(v[2] == 12);   // SUM aggregate (MIN)
    CHECK(q.joined_signs == std::vector<std::int8_t>{1, -1, 1});

    const double better[3] = {2, 5, 12};
    const double equal[3] = {2, 4, 12};
    CHECK(joined_dominates({better, 3}, {v, 3}, q.joined_signs));
    CHECK_FALSE(joined_dominates({equal, 3}, {v, 3}, q.joined_signs));

    CHECK(join_compatible(q, A, B, 0, 0));
    Relation B2 = make_relation(q.spec.right, {2, 4, 7});
    CHECK_FALSE(join_compatible(q, A, B2, 0, 0));
}
