#include <doctest.h>

#include <numeric>

#include "asjq/algorithms.hpp"
#include "asjq/kernels.hpp"
#include "test_support.hpp"

using namespace asjq;

namespace {

JoinedBlock full_join(const test_support::Instance& inst, const CompiledQuery& q) {
    std::vector<std::uint32_t> ia(inst.A.size()), ib(inst.B.size());
    std::iota(ia.begin(), ia.end(), 0u);
    std::iota(ib.begin(), ib.end(), 0u);
    return materialize_join(ia, ib, inst.A, inst.B, q);
}

}  // namespace

TEST_CASE("serial and parallel verification agree bit for bit") {
    for (std::uint64_t seed = 3000; seed < 3020; ++seed) {
        const test_support::Instance inst = test_support::random_instance(seed);
        const CompiledQuery q = compile(inst.spec);
        const JoinedBlock pool = full_join(inst, q);
        const JoinedBlock* targets[] = {&pool};

        std::vector<char> keep_s, keep_p;
        const std::uint64_t cs =
            verify_candidates(pool, targets, q.joined_signs, keep_s, false);
        const std::uint64_t cp =
            verify_candidates(pool, targets, q.joined_signs, keep_p, true);
        CHECK(keep_s == keep_p);
        CHECK(cs == cp);
    }
}

TEST_CASE("kernel keep mask equals the dominance definition") {
    const test_support::Instance inst = test_support::random_instance(77);
    const CompiledQuery q = compile(inst.spec);
    const JoinedBlock pool = full_join(inst, q);
    const JoinedBlock* targets[] = {&pool};
    std::vector<char> keep;
    verify_candidates(pool, targets, q.joined_signs, keep, true);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        bool dominated = false;
        for (std::size_t k = 0; k < pool.size() && !dominated; ++k)
            if (pool.ids[k] != pool.ids[i] &&
                joined_dominates(pool.row(k), pool.row(i), q.joined_signs))
                dominated = true;
        CHECK(static_cast<bool>(keep[i]) == !dominated);
    }
}

namespace {

struct RecordingObserver final : ExecObserver {
    int events = 0;
    int first_compare = -1;      // event index of the first phase-2 comparison
    int last_phase1_emit = -1;   // event index of the last phase-1 emission
    std::vector<IdPair> phase1;

    void on_emit(IdPair id, int phase) override {
        if (phase == 1) {
            last_phase1_emit = events;
            phase1.push_back(id);
        }
        ++events;
    }
    void on_phase2_compare(IdPair, IdPair) override {
        if (first_compare < 0) first_compare = events;
        ++events;
    }
};

}  // namespace

TEST_CASE("observer sees guaranteed emissions before any phase-2 comparison") {
    const test_support::Flights f = test_support::load_flights();
    for (Algo algo : {Algo::Msc, Algo::Dominator, Algo::Iterative}) {
        for (Mode mode : {Mode::Verified, Mode::PaperFaithful}) {
            RecordingObserver obs;
            RunOptions opts;
            opts.mode = mode;
            opts.delta = 0;
            opts.observer = &obs;
            const RunResult res = run(algo, f.a, f.b, f.q, opts);
            CHECK(obs.phase1.size() == res.report.phase1_emitted);
            if (obs.last_phase1_emit >= 0 && obs.first_compare >= 0)
                CHECK(obs.last_phase1_emit < obs.first_compare);
            // every guaranteed tuple is part of the final result
            for (IdPair p : obs.phase1)
                CHECK(std::find(res.result.begin(), res.result.end(), p) !=
                      res.result.end());
        }
    }
}

TEST_CASE("observer comparison events match the reported count") {
    const test_support::Instance inst = test_support::random_instance(4321);
    const CompiledQuery q = compile(inst.spec);
    for (Algo algo : {Algo::Msc, Algo::Dominator, Algo::Iterative}) {
        struct Counter final : ExecObserver {
            std::uint64_t compares = 0;
            void on_phase2_compare(IdPair, IdPair) override { ++compares; }
        } counter;
        RunOptions opts;
        opts.observer = &counter;
        const RunResult res = run(algo, inst.A, inst.B, q, opts);
        CHECK(counter.compares == res.report.comparisons);
    }
}
