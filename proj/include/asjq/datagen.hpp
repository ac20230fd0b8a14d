#pragma once

#include <cstdint>
#include <string>

#include "asjq/core.hpp"

// Seeded synthetic relation generator producing the three classic skyline
// data families (correlated / independent / anti-correlated) plus one
// integer join-category column.  Deterministic per (params, seed): every
// row draws from its own counter-based substream, so the output does not
// depend on generation order.

namespace asjq {

enum class Dist : std::uint8_t { Correlated, Independent, AntiCorrelated };

const char* to_string(Dist d);
bool parse_dist(const std::string& s, Dist& out);  // accepts anticorrelated too

struct GenParams {
    std::size_t n = 1000;    // tuple count
    int locals = 2;          // local attribute count (L)
    int aggs = 2;            // aggregate attribute count (G)
    int cats = 10;           // join categories (C)
    Dist dist = Dist::Correlated;
    std::uint64_t seed = 1;
};

/// Schema: join column "cat" (slot 0, integer codes in [0, cats)), locals
/// l1..lL with MIN preference, aggregate inputs g1..gG (slots 0..G-1).
/// All value columns lie in [0, 1).
Relation generate_relation(const GenParams& params);

}  // namespace asjq
