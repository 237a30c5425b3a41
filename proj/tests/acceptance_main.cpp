// Acceptance suite: one pass/fail line per criterion, exit code 0 iff all
// criteria hold. Reference values come from the published toy scenarios.
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <iostream>
#include <mutex>
#include <sstream>
#include <vector>

#include "cutplan/harness.hpp"
#include "cutplan/matheuristic.hpp"
#include "cutplan/model.hpp"
#include "cutplan/oracle.hpp"
#include "cutplan/solver.hpp"
#include "fixtures.hpp"

using namespace cutplan;

namespace {

int failures = 0;

struct Criterion {
    std::string name;
    bool ok = true;
    std::ostringstream notes;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit Criterion(std::string n) : name(std::move(n)) {}

    void check(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes << "\n      failed: " << what;
        }
    }
    template <typename T, typename U>
    void equals(const T& got, const U& want, const std::string& what) {
        if (!(got == static_cast<T>(want))) {
            ok = false;
            notes << "\n      " << what << ": expected " << want << ", got " << got;
        }
    }
    void finish() {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        std::printf("%s %s (%.1fs)%s\n", ok ? "PASS" : "FAIL", name.c_str(), secs,
                    notes.str().c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

GenConfig micro_config(std::uint64_t seed, int periods, int xi) {
    GenConfig cfg;
    cfg.periods = periods;
    cfg.xi = xi;
    cfg.object_count = {1, 2};
    cfg.item_count = {1, 3};
    cfg.object_dim = {4, 12};
    cfg.item_dim = {2, 6};
    cfg.seed = seed;
    return cfg;
}

void criterion1() {
    Criterion c("criterion 1: toy A myopic cost 108, exact cost 80 with a 3x3 leftover");
    Instance inst = fixtures::toy_a();
    RollResult myopic = run_myopic(inst, SolverConfig{});
    c.check(myopic.feasible, "myopic run feasible");
    if (myopic.feasible) c.equals(myopic.plan.purchased_cost, 108, "myopic purchased cost");

    auto exact = exact_multi_period(inst, OracleLimits{});
    c.check(exact.has_value(), "exact search feasible");
    if (exact) {
        c.equals(exact->purchased_cost, 80, "exact purchased cost");
        c.equals(exact->final_leftover_value, 9.0, "exact final leftover value");
        bool has_3x3 = false;
        for (const ObjectState& obj : exact->pools.back().objects)
            has_3x3 |= obj.width == 3 && obj.height == 3;
        c.check(has_3x3, "a 3x3 leftover remains at the horizon");
    }
    c.check(c.seconds() < 60, "runtime under 60 s");
    c.finish();
}

void criterion2() {
    Criterion c(
        "criterion 2: toy B myopic 592; training cycle 0 cost 521 value 70; best 477");
    Instance inst = fixtures::toy_b();
    RollResult myopic = run_myopic(inst, SolverConfig{});
    c.check(myopic.feasible, "myopic run feasible");
    if (myopic.feasible) {
        c.equals(myopic.plan.purchased_cost, 592, "myopic purchased cost");
        c.equals(myopic.plan.final_leftover_value, 0.0, "myopic final leftover value");
    }

    TrainingConfig tcfg;
    tcfg.delta_ini = 1.0;
    TrainingResult training = run_forward_looking(inst, tcfg, SolverConfig{});
    c.check(training.feasible, "training run feasible");
    if (training.feasible && !training.trace.cycles.empty()) {
        c.equals(training.trace.cycles[0].cost, 521, "cycle-0 purchased cost");
        // the reference drawing keeps a 10x7 top leftover (value 70); the
        // amortized-objective optimum of that period instead hoards a 10x12
        // top, so the realized cycle-0 plan carries no value at the horizon
        c.equals(training.trace.cycles[0].leftover_value, 70.0, "cycle-0 leftover value");
        c.equals(training.best_plan.purchased_cost, 477, "best plan purchased cost");
        c.equals(training.best_plan.final_leftover_value, 0.0, "best plan leftover value");
    }
    c.check(c.seconds() < 120, "runtime under 120 s");
    c.finish();
}

void criterion3() {
    Criterion c("criterion 3: amortized-cost arithmetic");
    c.equals(amortized_cost(1, 21, 17, true, 1.0, 126, 1.0, 0), 231, "optimistic 21x17");
    c.equals(amortized_cost(1, 19, 19, true, 1.0, 152, 1.0, 0), 209, "optimistic 19x19");
    c.equals(amortized_cost(1, 24, 13, true, 1.0, 0, 1.0, 0), 312, "optimistic 24x13");
    c.equals(amortized_cost(1, 19, 19, true, 102.0 / 152.0, 152, 1.0, 0), 259,
             "after one observed fraction");
    c.equals(amortized_cost(1, 21, 17, true, 314.0 / 357.0, 126, 0.0, 0), 247,
             "floor of the weighted credit");
    c.finish();
}

void criterion4() {
    Criterion c("criterion 4: gap formula and win/tie/loss classification");
    c.equals(format_gap(gap_percent(400703843, 314108050)), std::string("27.5688"),
             "gap instance 1");
    c.equals(format_gap(gap_percent(182258424, 444536794)), std::string("-59.0004"),
             "gap instance 5");

    struct Row {
        std::int64_t mc;
        double ml;
        std::int64_t fc;
        double fl;
    };
    // four-period block: myopic (cost, leftovers) vs forward-looking
    std::vector<Row> rows = {
        {9155, 0, 11679, 2647}, {6715, 0, 6715, 0},     {8951, 0, 8951, 0},
        {9677, 0, 9677, 0},     {15954, 5462, 6541, 0}, {6246, 2066, 3914, 0},
        {13433, 0, 13433, 0},   {12191, 1407, 9659, 2674}, {4757, 0, 4757, 0},
        {10884, 3115, 10884, 3115},
    };
    int wins = 0, ties = 0, losses = 0;
    for (const Row& row : rows) {
        Outcome outcome = classify(row.fc, row.fl, row.mc, row.ml);
        wins += outcome == Outcome::Win;
        ties += outcome == Outcome::Tie;
        losses += outcome == Outcome::Loss;
    }
    c.equals(wins, 3, "wins");
    c.equals(ties, 6, "ties");
    c.equals(losses, 1, "losses");
    c.finish();
}

void criterion5() {
    Criterion c("criterion 5: built-in branch and bound matches the exhaustive search");
    std::vector<Instance> instances;
    for (int k = 0; k < 100; ++k) {
        int periods = k % 2 == 0 ? 2 : 1;
        int xi = k % 3 == 0 ? 0 : (k % 3 == 1 ? 1 : std::min(2, periods));
        instances.push_back(generate_instance(micro_config(1000 + k, periods, xi)));
    }
    std::atomic<int> matched{0}, done{0};
    std::ostringstream first_bad;
    std::mutex mu;
    auto work = [&](int from, int to) {
        for (int k = from; k < to; ++k) {
            const Instance& inst = instances[k];
            auto exact = exact_multi_period(inst, OracleLimits{});
            ModelSpec ms = build_full_model(inst);
            SolverConfig cfg;
            cfg.time_limit_seconds = 120;
            MilpSolution sol = solve(ms, cfg);
            bool ok;
            if (!exact) {
                ok = sol.status == SolveStatus::Infeasible;
            } else {
                ok = sol.status == SolveStatus::Optimal &&
                     std::abs(sol.objective - exact->objective) < 0.5;
            }
            if (ok) {
                ++matched;
            } else {
                std::lock_guard<std::mutex> lock(mu);
                if (first_bad.str().empty())
                    first_bad << "seed " << 1000 + k << ": exhaustive "
                              << (exact ? std::to_string(exact->objective) : "infeasible")
                              << " vs solver " << to_string(sol.status) << " "
                              << sol.objective;
            }
            ++done;
        }
    };
    auto half = std::async(std::launch::async, work, 0, 50);
    work(50, 100);
    half.get();
    c.equals(matched.load(), 100, "matching instances");
    if (!first_bad.str().empty()) c.check(false, first_bad.str());
    c.check(c.seconds() < 600, "runtime under 10 min");
    c.finish();
}

void criterion6() {
    Criterion c("criterion 6: training terminates within bounds on 20 instances");
    for (int k = 0; k < 20; ++k) {
        Instance inst = generate_instance(micro_config(9000 + k, 4, 1 + k % 4));
        TrainingResult res = run_forward_looking(inst, TrainingConfig{}, SolverConfig{});
        if (!res.feasible) continue;  // a myopically infeasible draw carries no cycle data
        int last_cycle = res.trace.cycles.empty() ? 0 : res.trace.cycles.back().cycle;
        c.check(last_cycle <= 44, "stops within 44 update cycles (seed " +
                                      std::to_string(9000 + k) + ")");
        for (const auto& row : res.final_delta)
            for (double d : row)
                c.check(d >= 0.0 && d <= 1.0, "delta within [0,1]");
        // the reported best is lexicographically non-increasing over cycles
        bool have_best = false;
        std::int64_t best_cost = 0;
        double best_value = 0;
        for (const CycleRecord& rec : res.trace.cycles) {
            if (rec.aborted) continue;
            bool better = !have_best || rec.cost < best_cost ||
                          (rec.cost == best_cost && rec.leftover_value > best_value + 1e-9);
            c.check(rec.improved == better, "improvement flag tracks the lexicographic best");
            if (better) {
                have_best = true;
                best_cost = rec.cost;
                best_value = rec.leftover_value;
            }
        }
        c.check(res.best_plan.purchased_cost == best_cost, "reported best matches the trace");
        c.check(validate_plan(inst, res.best_plan).empty(), "best plan validates");
    }
    c.finish();
}

void criterion7() {
    Criterion c("criterion 7: model size diagnostic on the published instance 1");
    Instance inst = fixtures::published_instance_1();
    ModelSpec ms = build_full_model(inst);
    int bv = ms.binary_count();
    c.notes << "\n      binaries=" << bv << " continuous=" << ms.continuous_count()
            << " (reference 369/150; convention: binaries v,u,eta,pi,tau,theta,zeta;"
            << " continuous t,r,all slot dims,x,y,gamma,omega)";
    c.check(std::abs(bv - 369) <= 37, "binary count within 10% of 369");
    c.finish();
}

void criterion8() {
    Criterion c("criterion 8: validator soundness and mutation sensitivity");
    std::vector<std::pair<std::string, Instance>> corpus{
        {"toy_a", fixtures::toy_a()},
        {"toy_b", fixtures::toy_b()},
    };
    for (int k = 0; k < 10; ++k)
        corpus.push_back({"micro" + std::to_string(k),
                          generate_instance(micro_config(500 + k, 2, k % 3))});

    for (const auto& [label, inst] : corpus) {
        RollResult myopic = run_myopic(inst, SolverConfig{});
        if (myopic.feasible)
            c.check(validate_plan(inst, myopic.plan).empty(), label + ": myopic plan clean");
        TrainingConfig tcfg;
        TrainingResult training = run_forward_looking(inst, tcfg, SolverConfig{});
        if (training.feasible)
            c.check(validate_plan(inst, training.best_plan).empty(),
                    label + ": trained plan clean");
        auto exact = exact_multi_period(inst, OracleLimits{});
        if (exact) c.check(validate_plan(inst, *exact).empty(), label + ": exact plan clean");

        if (myopic.feasible && !myopic.plan.periods.empty()) {
            // shift one item by one unit in some direction; solutions sit on
            // the cutting-area or neighbour boundaries, so a breaking shift
            // exists and the validator must notice it
            bool caught = false;
            bool tried = false;
            for (size_t k = 0; k < myopic.plan.periods.size() && !caught; ++k)
                for (size_t i = 0; i < myopic.plan.periods[k].items.size() && !caught; ++i)
                    for (double shift : {1.0, -1.0}) {
                        for (int axis = 0; axis < 2 && !caught; ++axis) {
                            Plan shifted = myopic.plan;
                            auto& item = shifted.periods[k].items[i];
                            if (item.object < 0) continue;
                            tried = true;
                            (axis == 0 ? item.x : item.y) += shift;
                            caught = !validate_plan(inst, shifted).empty();
                        }
                        if (caught) break;
                    }
            if (tried) c.check(caught, label + ": shifted item caught");
            // inflate a leftover
            Plan inflated = myopic.plan;
            bool grew = false;
            for (auto& obj : inflated.pools.back().objects)
                if (!grew && obj.positive()) {
                    obj.width += 1;
                    grew = true;
                }
            if (grew)
                c.check(!validate_plan(inst, inflated).empty(),
                        label + ": inflated leftover caught");
        }
    }
    c.finish();
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
