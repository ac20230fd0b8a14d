#include "asjq/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace asjq {

namespace {

// counter-based substream seeding: rows can be generated in any order
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double clamp01(double v) { return std::clamp(v, 0.0, std::nextafter(1.0, 0.0)); }

}  // namespace

const char* to_string(Dist d) {
    switch (d) {
        case Dist::Correlated: return "correlated";
        case Dist::Independent: return "independent";
        case Dist::AntiCorrelated: return "anticorrelated";
    }
    return "?";
}

bool parse_dist(const std::string& s, Dist& out) {
    if (s == "correlated") { out = Dist::Correlated; return true; }
    if (s == "independent") { out = Dist::Independent; return true; }
    if (s == "anticorrelated" || s == "anti-correlated") {
        out = Dist::AntiCorrelated;
        return true;
    }
    return false;
}

Relation generate_relation(const GenParams& params) {
    const int d = params.locals + params.aggs;

    Relation rel;
    rel.schema.name = "gen";
    rel.schema.columns.push_back({"cat", RoleKind::Join, 0, Pref::Min});
    for (int i = 0; i < params.locals; ++i)
        rel.schema.columns.push_back({"l" + std::to_string(i + 1), RoleKind::Local,
                                      -1, Pref::Min});
    for (int i = 0; i < params.aggs; ++i)
        rel.schema.columns.push_back({"g" + std::to_string(i + 1), RoleKind::Aggregate,
                                      i, Pref::Min});

    rel.values.resize(rel.width() * params.n);

    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> jitter(0.0, 0.05);
    std::exponential_distribution<double> expo(1.0);

    for (std::size_t row = 0; row < params.n; ++row) {
        std::mt19937_64 rng(splitmix64(params.seed ^ (row * 0x51ed2701a9b3c4d5ull + 1)));
        double* out = rel.values.data() + row * rel.width();
        out[0] = static_cast<double>(
            std::uniform_int_distribution<int>(0, params.cats - 1)(rng));

        switch (params.dist) {
            case Dist::Independent:
                for (int i = 0; i < d; ++i) out[1 + i] = uni(rng);
                break;
            case Dist::Correlated: {
                const double base = uni(rng);
                for (int i = 0; i < d; ++i) out[1 + i] = clamp01(base + jitter(rng));
                break;
            }
            case Dist::AntiCorrelated: {
                // uniform point on the simplex sum = d/2, plus jitter
                double sum = 0.0;
                std::vector<double> e(d);
                for (int i = 0; i < d; ++i) { e[i] = expo(rng); sum += e[i]; }
                for (int i = 0; i < d; ++i)
                    out[1 + i] = clamp01(e[i] / sum * (d / 2.0) + jitter(rng));
                break;
            }
        }
    }
    return rel;
}

}  // namespace asjq
