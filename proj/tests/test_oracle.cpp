#include <doctest.h>

#include "asjq/oracle.hpp"
#include "test_support.hpp"

using namespace asjq;

TEST_CASE("oracle on a tiny hand-checked instance") {
    QuerySpec s;
    s.left.name = "A";
    s.left.columns = {{"k", RoleKind::Join, 0, Pref::Min},
                      {"x", RoleKind::Local, -1, Pref::Min},
                      {"g", RoleKind::Aggregate, 0, Pref::Min}};
    s.right.name = "B";
    s.right.columns = {{"k", RoleKind::Join, 0, Pref::Min},
                       {"y", RoleKind::Local, -1, Pref::Max},
                       {"g", RoleKind::Aggregate, 0, Pref::Min}};
    s.joins = {JoinOp::Eq};
    s.aggregates = {{"t", AggFn::Sum, Pref::Min}};

    //                       k  x  g
    const Relation A = test_support::make_relation(s.left, {1, 1, 2,
                                                            1, 2, 1,
                                                            2, 9, 9});
    //                       k  y  g
    const Relation B = test_support::make_relation(s.right, {1, 5, 3,
                                                             1, 5, 4});
    // joined vectors (x MIN, y MAX, sum MIN):
    //   (0,0)=(1,5,5)  (0,1)=(1,5,6)  (1,0)=(2,5,4)  (1,1)=(2,5,5)
    // (0,1) is dominated by (0,0); (1,1) by (1,0); no pair for k=2
    CHECK(brute_force_asjq(A, B, s) == std::vector<IdPair>{{0, 0}, {1, 0}});
}

TEST_CASE("oracle ignores tuple order") {
    const test_support::Instance inst = test_support::random_instance(42);
    const std::vector<IdPair> base = brute_force_asjq(inst.A, inst.B, inst.spec);

    // reverse the rows of A and remap the expected ids accordingly
    Relation ra = inst.A;
    const std::size_t n = ra.size(), w = ra.width();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < w; ++c)
            ra.values[i * w + c] = inst.A.values[(n - 1 - i) * w + c];
    std::vector<IdPair> remapped;
    for (IdPair p : base)
        remapped.push_back({static_cast<std::uint32_t>(n - 1 - p.left), p.right});
    std::sort(remapped.begin(), remapped.end());
    CHECK(brute_force_asjq(ra, inst.B, inst.spec) == remapped);
}

TEST_CASE("duplicate joined vectors all survive together") {
    QuerySpec s;
    s.left.name = "A";
    s.left.columns = {{"k", RoleKind::Join, 0, Pref::Min},
                      {"g", RoleKind::Aggregate, 0, Pref::Min}};
    s.right = s.left;
    s.right.name = "B";
    s.joins = {JoinOp::Eq};
    s.aggregates = {{"t", AggFn::Min, Pref::Min}};
    // both pairs aggregate to MIN = 1: mutually tied, both stay
    const Relation A = test_support::make_relation(s.left, {1, 1,
                                                            1, 1});
    const Relation B = test_support::make_relation(s.right, {1, 9});
    CHECK(brute_force_asjq(A, B, s) == std::vector<IdPair>{{0, 0}, {1, 0}});
}

TEST_CASE("generic quadratic skyline helper") {
    const std::vector<int> vals{3, 1, 2, 1};
    auto dom = [&](std::size_t i, std::size_t k) { return vals[i] < vals[k]; };
    CHECK(brute_force_skyline(vals.size(), dom) == std::vector<std::size_t>{1, 3});
    CHECK(brute_force_skyline(0, dom).empty());
}
