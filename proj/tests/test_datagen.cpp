#include <doctest.h>

#include "asjq/datagen.hpp"
#include "asjq/skyline.hpp"
#include "test_support.hpp"

using namespace asjq;

TEST_CASE("generation is deterministic per seed") {
    GenParams p;
    p.n = 500;
    p.seed = 99;
    for (Dist d : {Dist::Correlated, Dist::Independent, Dist::AntiCorrelated}) {
        p.dist = d;
        const Relation a = generate_relation(p);
        const Relation b = generate_relation(p);
        CHECK(a.values == b.values);
        p.seed ^= 1;
        const Relation c = generate_relation(p);
        CHECK(a.values != c.values);
        p.seed ^= 1;
    }
}

TEST_CASE("values stay in range and the schema is well-formed") {
    GenParams p;
    p.n = 2000;
    p.locals = 3;
    p.aggs = 2;
    p.cats = 7;
    for (Dist d : {Dist::Correlated, Dist::Independent, Dist::AntiCorrelated}) {
        p.dist = d;
        const Relation r = generate_relation(p);
        REQUIRE(r.size() == p.n);
        REQUIRE(r.width() == 1u + p.locals + p.aggs);
        CHECK(r.schema.columns[0].name == "cat");
        CHECK(r.schema.columns[0].kind == RoleKind::Join);
        for (std::size_t i = 0; i < r.size(); ++i) {
            const std::span<const double> row = r.row(i);
            CHECK(row[0] == std::floor(row[0]));
            CHECK(row[0] >= 0);
            CHECK(row[0] < p.cats);
            for (std::size_t c = 1; c < r.width(); ++c) {
                CHECK(row[c] >= 0.0);
                CHECK(row[c] < 1.0);
            }
        }
    }
}

TEST_CASE("skyline cardinality orders correlated < independent < anti-correlated") {
    GenParams p;
    p.n = 5000;
    p.locals = 2;
    p.aggs = 2;
    p.cats = 10;
    p.seed = 11;

    QuerySpec spec;
    spec.joins = {JoinOp::Eq};
    for (int i = 0; i < p.aggs; ++i)
        spec.aggregates.push_back({"s" + std::to_string(i + 1), AggFn::Sum, Pref::Min});

    auto fraction = [&](Dist d) {
        p.dist = d;
        Relation r = generate_relation(p);
        r.schema.name = "A";
        spec.left = r.schema;
        spec.right = r.schema;
        spec.right.name = "B";
        const CompiledQuery q = compile(spec);
        return static_cast<double>(prune_skyline(r, q.a).skyline.size()) / p.n;
    };
    const double fc = fraction(Dist::Correlated);
    const double fi = fraction(Dist::Independent);
    const double fa = fraction(Dist::AntiCorrelated);
    CHECK(fc < fi);
    CHECK(fi < fa);
}

TEST_CASE("distribution names round-trip") {
    Dist d;
    CHECK(parse_dist("correlated", d));
    CHECK(d == Dist::Correlated);
    CHECK(parse_dist("anticorrelated", d));
    CHECK(d == Dist::AntiCorrelated);
    CHECK(parse_dist("anti-correlated", d));
    CHECK_FALSE(parse_dist("normal", d));
    CHECK(std::string(to_string(Dist::Independent)) == "independent");
}
