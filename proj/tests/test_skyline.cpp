#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "asjq/skyline.hpp"
#include "test_support.hpp"

using namespace asjq;
using test_support::Flights;

namespace {

std::vector<std::uint32_t> definition_skyline(const Relation& rel, const SideView& view) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < rel.size(); ++i) {
        bool dominated = false;
        for (std::uint32_t k = 0; k < rel.size() && !dominated; ++k)
            if (k != i && prune_dominates(rel, k, i, view)) dominated = true;
        if (!dominated) out.push_back(i);
    }
    return out;
}

}  // namespace

TEST_CASE("flights prune partition matches the worked example") {
    const Flights f = test_support::load_flights();
    const Partition a = prune_skyline(f.a, f.q.a);
    CHECK(a.skyline == std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5});
    CHECK(a.rest == std::vector<std::uint32_t>{6});
    const Partition b = prune_skyline(f.b, f.q.b);
    CHECK(b.skyline == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
    CHECK(b.rest == std::vector<std::uint32_t>{5, 6});
}

TEST_CASE("flights weak-local layers match the worked example") {
    const Flights f = test_support::load_flights();
    const Partition a0 = prune_skyline(f.a, f.q.a);
    const Partition a1 = weak_local_partition(a0.skyline, f.a, f.q.a);
    CHECK(a1.skyline == std::vector<std::uint32_t>{0, 1});
    CHECK(a1.rest == std::vector<std::uint32_t>{2, 3, 4, 5});
    const Partition a2 = weak_local_partition(a1.rest, f.a, f.q.a);
    CHECK(a2.skyline == std::vector<std::uint32_t>{2, 3});
    CHECK(a2.rest == std::vector<std::uint32_t>{4, 5});

    const Partition b0 = prune_skyline(f.b, f.q.b);
    const Partition b1 = weak_local_partition(b0.skyline, f.b, f.q.b);
    CHECK(b1.skyline == std::vector<std::uint32_t>{0, 1});
    CHECK(b1.rest == std::vector<std::uint32_t>{2, 3, 4});
    const Partition b2 = weak_local_partition(b1.rest, f.b, f.q.b);
    CHECK(b2.skyline == std::vector<std::uint32_t>{2});
    CHECK(b2.rest == std::vector<std::uint32_t>{3, 4});
}

TEST_CASE("layer peeling respects the threshold and residualizes antichains") {
    const Flights f = test_support::load_flights();
    const Partition a0 = prune_skyline(f.a, f.q.a);

    SUBCASE("delta 0 peels until the rest stops shrinking") {
        const LayerDecomposition ld = peel_layers(a0.skyline, f.a, f.q.a, 0);
        REQUIRE(ld.layers.size() == 3);
        CHECK(ld.layers[0] == std::vector<std::uint32_t>{0, 1});
        CHECK(ld.layers[1] == std::vector<std::uint32_t>{2, 3});
        CHECK(ld.layers[2] == std::vector<std::uint32_t>{5});
        CHECK(ld.residual == std::vector<std::uint32_t>{4});
    }
    SUBCASE("delta 2 stops once the rest is small enough") {
        const LayerDecomposition ld = peel_layers(a0.skyline, f.a, f.q.a, 2);
        REQUIRE(ld.layers.size() == 2);
        CHECK(ld.layers[0] == std::vector<std::uint32_t>{0, 1});
        CHECK(ld.layers[1] == std::vector<std::uint32_t>{2, 3});
        CHECK(ld.residual == std::vector<std::uint32_t>{4, 5});
    }
    SUBCASE("large delta peels nothing") {
        const LayerDecomposition ld = peel_layers(a0.skyline, f.a, f.q.a, 100);
        CHECK(ld.layers.empty());
        CHECK(ld.residual == a0.skyline);
    }
    SUBCASE("layers plus residual partition the input") {
        for (std::size_t delta : {0u, 1u, 2u, 3u, 100u}) {
            const LayerDecomposition ld = peel_layers(a0.skyline, f.a, f.q.a, delta);
            std::vector<std::uint32_t> all = ld.residual;
            for (const auto& l : ld.layers) all.insert(all.end(), l.begin(), l.end());
            std::sort(all.begin(), all.end());
            CHECK(all == a0.skyline);
        }
    }
}

TEST_CASE("presorted skyline filtering equals the quadratic definition") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        test_support::InstanceParams ip;
        ip.max_n = 300;
        const test_support::Instance inst = test_support::random_instance(seed, ip);
        const CompiledQuery q = compile(inst.spec);
        for (const auto& [rel, view] : {std::pair{&inst.A, &q.a}, {&inst.B, &q.b}}) {
            const Partition p = prune_skyline(*rel, *view);
            CHECK(p.skyline == definition_skyline(*rel, *view));
            CHECK(p.skyline.size() + p.rest.size() == rel->size());
            // parallel flavor agrees with the serial one
            const Partition pp = prune_skyline(*rel, *view, true);
            CHECK(pp.skyline == p.skyline);
            CHECK(pp.rest == p.rest);
        }
    }
}

TEST_CASE("all-tie groups of distinct tuples land in the rest") {
    QuerySpec s;
    s.left.name = "A";
    s.left.columns = {{"k", RoleKind::Join, 0, Pref::Min},
                      {"x", RoleKind::Local, -1, Pref::Min},
                      {"g", RoleKind::Aggregate, 0, Pref::Min}};
    s.right = s.left;
    s.right.name = "B";
    s.joins = {JoinOp::Eq};
    s.aggregates = {{"t", AggFn::Sum, Pref::Min}};
    const CompiledQuery q = compile(s);
    // two tuples with identical locals weak-dominate each other
    const Relation A = test_support::make_relation(s.left, {1, 5, 1,
                                                            2, 5, 2});
    const std::vector<std::uint32_t> ids{0, 1};
    const Partition p = weak_local_partition(ids, A, q.a);
    CHECK(p.skyline.empty());
    CHECK(p.rest == ids);

    const DominatorInfo di = find_weak_local_dominators(ids, A, q.a);
    CHECK(di.dominators.at(0) == std::vector<std::uint32_t>{1});
    CHECK(di.dominators.at(1) == std::vector<std::uint32_t>{0});
}

TEST_CASE("weak-local dominator lists are complete") {
    for (std::uint64_t seed = 50; seed < 70; ++seed) {
        const test_support::Instance inst = test_support::random_instance(seed);
        const CompiledQuery q = compile(inst.spec);
        std::vector<std::uint32_t> ids(inst.A.size());
        std::iota(ids.begin(), ids.end(), 0u);
        const DominatorInfo di = find_weak_local_dominators(ids, inst.A, q.a, true);
        for (std::uint32_t r : di.part.rest) {
            std::vector<std::uint32_t> expect;
            for (std::uint32_t d : ids)
                if (d != r && weak_local_dominates(inst.A, d, r, q.a)) expect.push_back(d);
            CHECK(di.dominators.at(r) == expect);
            CHECK_FALSE(expect.empty());
        }
        for (std::uint32_t skl : di.part.skyline)
            CHECK(di.dominators.find(skl) == di.dominators.end());
    }
}
