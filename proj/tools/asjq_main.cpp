// asjq: generate data, evaluate aggregate-skyline join queries, check the
// optimized algorithms against the brute-force oracle, and run parameter
// sweeps emitting plot-ready CSV.
//
// Exit codes: 0 ok, 1 check mismatch, 2 usage error, 3 parse/load error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "asjq/algorithms.hpp"
#include "asjq/core.hpp"
#include "asjq/datagen.hpp"
#include "asjq/io.hpp"
#include "asjq/oracle.hpp"

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLoad = 3;

bool parse_algo(const std::string& s, asjq::Algo& out) {
    if (s == "naive") out = asjq::Algo::Naive;
    else if (s == "msc") out = asjq::Algo::Msc;
    else if (s == "dominator") out = asjq::Algo::Dominator;
    else if (s == "iterative") out = asjq::Algo::Iterative;
    else if (s == "single") out = asjq::Algo::SingleAggregate;
    else if (s == "auto") out = asjq::Algo::Auto;
    else return false;
    return true;
}

void write_relation_csv(const std::string& path, const asjq::Relation& rel) {
    std::ofstream out(path);
    if (!out) throw asjq::IoError("cannot write '" + path + "'");
    for (std::size_t i = 0; i < rel.width(); ++i)
        out << (i ? "," : "") << rel.schema.columns[i].name;
    out << "\n";
    for (std::size_t r = 0; r < rel.size(); ++r) {
        const std::span<const double> row = rel.row(r);
        for (std::size_t i = 0; i < rel.width(); ++i)
            out << (i ? "," : "") << asjq::format_double(row[i]);
        out << "\n";
    }
    if (!out) throw asjq::IoError("write failure on '" + path + "'");
}

/// Equi-join query over two generated relations: join on "cat", SUM of
/// every g-column preferred MIN, every l-column local preferred MIN.
asjq::QuerySpec generated_query(int locals, int aggs) {
    asjq::QuerySpec spec;
    auto schema = [&](const char* name) {
        asjq::RelationSchema s;
        s.name = name;
        s.columns.push_back({"cat", asjq::RoleKind::Join, 0, asjq::Pref::Min});
        for (int i = 0; i < locals; ++i)
            s.columns.push_back({"l" + std::to_string(i + 1), asjq::RoleKind::Local,
                                 -1, asjq::Pref::Min});
        for (int i = 0; i < aggs; ++i)
            s.columns.push_back({"g" + std::to_string(i + 1), asjq::RoleKind::Aggregate,
                                 i, asjq::Pref::Min});
        return s;
    };
    spec.left = schema("A");
    spec.right = schema("B");
    spec.joins = {asjq::JoinOp::Eq};
    for (int i = 0; i < aggs; ++i)
        spec.aggregates.push_back({"sum_g" + std::to_string(i + 1), asjq::AggFn::Sum,
                                   asjq::Pref::Min});
    return spec;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = base ^ (a * 0x9e3779b97f4a7c15ull) ^ (b * 0xc2b2ae3d27d4eb4full);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 29;
    return x;
}

int cmd_run_or_check(const std::string& query_path, const std::string& algo_str,
                     const std::string& mode_str, std::size_t delta,
                     const std::string& out_path, const std::string& report_path,
                     bool do_check) {
    asjq::Algo algo;
    if (!parse_algo(algo_str, algo)) {
        std::cerr << "unknown algorithm '" << algo_str << "'\n";
        return kExitUsage;
    }
    asjq::Mode mode;
    if (mode_str == "verified") mode = asjq::Mode::Verified;
    else if (mode_str == "paper") mode = asjq::Mode::PaperFaithful;
    else {
        std::cerr << "unknown mode '" << mode_str << "'\n";
        return kExitUsage;
    }

    asjq::LoadedQuery lq;
    try {
        lq = asjq::load_query_file(query_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLoad;
    }
    const asjq::Validation val = asjq::validate_query(lq.spec);
    if (!val.ok()) {
        for (const std::string& e : val.errors) std::cerr << "error: " << e << "\n";
        return kExitLoad;
    }
    const asjq::CompiledQuery q = asjq::compile(lq.spec);

    asjq::RunOptions opts;
    opts.mode = mode;
    opts.delta = delta;
    asjq::RunResult res;
    try {
        res = asjq::run(algo, lq.left, lq.right, q, opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::cout << "result cardinality: " << res.result.size() << "\n"
              << "join pairs: " << res.report.join_pairs << "\n"
              << "guaranteed (phase 1): " << res.report.phase1_emitted << "\n"
              << "phase-2 candidates: " << res.report.phase2_candidates << "\n"
              << "phase-2 survivors: " << res.report.phase2_emitted << "\n"
              << "dominance comparisons: " << res.report.comparisons << "\n"
              << "wall time ms: " << asjq::format_double(res.report.wall_ms) << "\n";

    try {
        if (!out_path.empty())
            asjq::write_results(out_path, res.result, q, lq.left, lq.right);
        if (!report_path.empty()) asjq::write_report(report_path, res.report);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLoad;
    }

    if (!do_check) return 0;

    const std::vector<asjq::IdPair> expect =
        asjq::brute_force_asjq(lq.left, lq.right, lq.spec);
    std::vector<asjq::IdPair> missing, extra;
    std::set_difference(expect.begin(), expect.end(), res.result.begin(),
                        res.result.end(), std::back_inserter(missing));
    std::set_difference(res.result.begin(), res.result.end(), expect.begin(),
                        expect.end(), std::back_inserter(extra));
    if (missing.empty() && extra.empty()) {
        std::cout << "check: result matches the oracle (" << expect.size()
                  << " tuples)\n";
        return 0;
    }
    auto show = [](const char* label, const std::vector<asjq::IdPair>& v) {
        if (v.empty()) return;
        std::cout << label << " " << v.size() << " tuple(s); witness: ("
                  << v.front().left << ", " << v.front().right << ")\n";
    };
    show("check: missing from result:", missing);
    show("check: extra in result:", extra);
    if (mode == asjq::Mode::PaperFaithful) {
        std::cout << "check: divergence characterized (paper-faithful mode)\n";
        return 0;
    }
    return kExitMismatch;
}

struct BenchRow {
    std::string sweep_param, sweep_value, algo, mode;
    double runtime_ms = 0;
    std::uint64_t cardinality = 0, comparisons = 0, join_pairs = 0, seed = 0;
};

int cmd_bench(const std::string& sweep, const std::string& values_csv, int repeat,
              const std::string& algos_csv, const std::string& mode_str,
              std::uint64_t base_seed, const std::string& out_path) {
    if (sweep != "L" && sweep != "G" && sweep != "N" && sweep != "C" && sweep != "D") {
        std::cerr << "unknown sweep parameter '" << sweep << "'\n";
        return kExitUsage;
    }
    asjq::Mode mode;
    if (mode_str == "verified") mode = asjq::Mode::Verified;
    else if (mode_str == "paper") mode = asjq::Mode::PaperFaithful;
    else {
        std::cerr << "unknown mode '" << mode_str << "'\n";
        return kExitUsage;
    }

    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') { out.push_back(cur); cur.clear(); }
            else cur += c;
        }
        if (!cur.empty()) out.push_back(cur);
        return out;
    };
    const std::vector<std::string> values = split(values_csv);
    if (values.empty()) {
        std::cerr << "--values must name at least one sweep value\n";
        return kExitUsage;
    }
    std::vector<asjq::Algo> algos;
    std::vector<std::string> algo_names = split(algos_csv);
    for (const std::string& name : algo_names) {
        asjq::Algo a;
        if (!parse_algo(name, a)) {
            std::cerr << "unknown algorithm '" << name << "'\n";
            return kExitUsage;
        }
        algos.push_back(a);
    }

    std::vector<BenchRow> rows;
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        // defaults per sweep point; the swept parameter overrides one of them
        asjq::GenParams gp;
        gp.n = 40000;
        gp.locals = 2;
        gp.aggs = 2;
        gp.cats = 10;
        gp.dist = asjq::Dist::Correlated;
        const std::string& v = values[vi];
        try {
            if (sweep == "L") gp.locals = std::stoi(v);
            else if (sweep == "G") gp.aggs = std::stoi(v);
            else if (sweep == "N") gp.n = std::stoul(v);
            else if (sweep == "C") gp.cats = std::stoi(v);
            else if (!asjq::parse_dist(v, gp.dist)) {
                std::cerr << "unknown distribution '" << v << "'\n";
                return kExitUsage;
            }
        } catch (const std::exception&) {
            std::cerr << "invalid sweep value '" << v << "'\n";
            return kExitUsage;
        }

        const asjq::QuerySpec spec = generated_query(gp.locals, gp.aggs);
        const asjq::CompiledQuery q = asjq::compile(spec);

        for (int rep = 0; rep < repeat; ++rep) {
            asjq::GenParams ga = gp, gb = gp;
            ga.seed = mix_seed(base_seed, vi * 2 + 0, rep);
            gb.seed = mix_seed(base_seed, vi * 2 + 1, rep);
            asjq::Relation A = asjq::generate_relation(ga);
            asjq::Relation B = asjq::generate_relation(gb);
            A.schema.name = "A";
            B.schema.name = "B";

            for (std::size_t ai = 0; ai < algos.size(); ++ai) {
                asjq::RunOptions opts;
                opts.mode = mode;
                const asjq::RunResult res = asjq::run(algos[ai], A, B, q, opts);
                rows.push_back({sweep, v, algo_names[ai], mode_str,
                                res.report.wall_ms, res.result.size(),
                                res.report.comparisons, res.report.join_pairs,
                                ga.seed});
            }
        }
    }

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return kExitLoad;
        }
        out << "sweep_param,sweep_value,algo,mode,runtime_ms,cardinality,"
               "comparisons,join_pairs,seed\n";
        for (const BenchRow& r : rows)
            out << r.sweep_param << "," << r.sweep_value << "," << r.algo << ","
                << r.mode << "," << asjq::format_double(r.runtime_ms) << ","
                << r.cardinality << "," << r.comparisons << "," << r.join_pairs
                << "," << r.seed << "\n";
    }

    // median runtime per (value, algo) to stdout
    std::map<std::pair<std::string, std::string>, std::vector<double>> times;
    for (const BenchRow& r : rows) times[{r.sweep_value, r.algo}].push_back(r.runtime_ms);
    std::cout << "sweep_value,algo,median_runtime_ms\n";
    for (const std::string& v : values)
        for (const std::string& a : algo_names) {
            std::vector<double>& t = times[{v, a}];
            std::sort(t.begin(), t.end());
            std::cout << v << "," << a << ","
                      << asjq::format_double(t[t.size() / 2]) << "\n";
        }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aggregate skyline join query engine"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic relation CSV");
    asjq::GenParams gp;
    std::string dist_str = "correlated", gen_out;
    gen->add_option("--n", gp.n, "tuple count")->default_val(1000);
    gen->add_option("--local", gp.locals, "local attribute count")->default_val(2);
    gen->add_option("--agg", gp.aggs, "aggregate attribute count")->default_val(2);
    gen->add_option("--cats", gp.cats, "join category count")->default_val(10);
    gen->add_option("--dist", dist_str, "correlated|independent|anticorrelated");
    gen->add_option("--seed", gp.seed, "random seed")->default_val(1);
    gen->add_option("--out", gen_out, "output CSV path")->required();

    // run / check
    std::string query_path, algo_str = "auto", mode_str = "verified";
    std::string out_path, report_path;
    std::size_t delta = 100;
    auto add_run_opts = [&](CLI::App* c) {
        c->add_option("--query", query_path, "query DSL file")->required();
        c->add_option("--algo", algo_str, "naive|msc|dominator|iterative|single|auto");
        c->add_option("--mode", mode_str, "verified|paper");
        c->add_option("--delta", delta, "iterative peeling threshold");
        c->add_option("--out", out_path, "result CSV path");
        c->add_option("--report", report_path, "run report path");
    };
    auto* run = app.add_subcommand("run", "evaluate a query");
    add_run_opts(run);
    auto* check = app.add_subcommand("check", "evaluate and diff against the oracle");
    add_run_opts(check);

    // bench
    std::string sweep, values_csv, bench_out;
    std::string algos_csv = "msc,dominator,iterative", bench_mode = "verified";
    int repeat = 3;
    std::uint64_t bench_seed = 1;
    auto* bench = app.add_subcommand("bench", "parameter sweep benchmark");
    bench->add_option("--sweep", sweep, "L|G|N|C|D")->required();
    bench->add_option("--values", values_csv, "comma-separated sweep values")->required();
    bench->add_option("--repeat", repeat, "repetitions per value")->default_val(3);
    bench->add_option("--algos", algos_csv, "comma-separated algorithms");
    bench->add_option("--mode", bench_mode, "verified|paper");
    bench->add_option("--seed", bench_seed, "base seed")->default_val(1);
    bench->add_option("--out", bench_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            if (!asjq::parse_dist(dist_str, gp.dist)) {
                std::cerr << "unknown distribution '" << dist_str << "'\n";
                return kExitUsage;
            }
            write_relation_csv(gen_out, asjq::generate_relation(gp));
            return 0;
        }
        if (run->parsed() || check->parsed())
            return cmd_run_or_check(query_path, algo_str, mode_str, delta, out_path,
                                    report_path, check->parsed());
        if (bench->parsed())
            return cmd_bench(sweep, values_csv, repeat, algos_csv, bench_mode,
                             bench_seed, bench_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLoad;
    }
    return kExitUsage;
}
