#include "cutplan/matheuristic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cutplan/model.hpp"

namespace cutplan {

namespace {

struct PassResult {
    bool feasible = false;
    int failed_instant = -1;
    std::vector<PeriodDecision> decisions;
    UsageTracker tracker;
};

// One rolling pass over the horizon, solving the single-period problem at
// every instant; delta == nullptr runs the myopic objective.
PassResult roll(const Instance& inst, const SolverConfig& scfg,
                const UtilizationTable* delta) {
    PassResult pass;
    ObjectPool pool = initial_pool(inst);
    for (int kappa = inst.first_instant; kappa < inst.last_instant; ++kappa) {
        int kp = kappa - inst.first_instant;
        SubproblemState st = make_subproblem_state(inst, kappa, pool);
        ModelSpec ms = delta ? build_flook_subproblem(st, (*delta)[kp])
                             : build_myopic_subproblem(st);
        MilpSolution sol = solve(ms, scfg);
        if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::Feasible) {
            pass.failed_instant = kappa;
            return pass;
        }
        PeriodDecision dec =
            decode_decision(ms, sol.assignment, pool, static_cast<int>(st.orders.size()));

        // first-order leftovers of this instant's purchasable objects are
        // tracked; realized area is the gamma value of the spawned child
        ObjectPool next = spawn_pool(pool, dec, inst.purchasable_at(kappa + 1), inst.xi);
        int m_next = next.purchasable_count;
        auto generators = leftover_generator_indices(pool);
        for (size_t k = 0; k < generators.size(); ++k) {
            if (generators[k] >= pool.purchasable_count) continue;
            for (int side = 0; side < 2; ++side) {
                PoolKey key{kappa + 1, m_next + 2 * static_cast<int>(k) + side};
                pass.tracker.begin_first_order(key);
                pass.tracker.set_realized_area(
                    key, leftover_value(next.objects[key.slot], inst.catalogue) /
                             static_cast<double>(next.objects[key.slot].unit_cost));
            }
        }
        const auto& items = inst.orders_at(kappa);
        for (size_t i = 0; i < items.size(); ++i)
            if (dec.items[i].object >= pool.purchasable_count)
                record_item_usage(pass.tracker, pool, items[i], dec.items[i].object);

        pass.decisions.push_back(std::move(dec));
        pool = std::move(next);
    }
    pass.feasible = true;
    return pass;
}

FractionTable fractions_from(const Instance& inst, const UsageTracker& tracker) {
    FractionTable f(inst.periods());
    for (int kappa = inst.first_instant; kappa < inst.last_instant; ++kappa) {
        int kp = kappa - inst.first_instant;
        f[kp].assign(2 * inst.purchasable_at(kappa).size(), std::nullopt);
    }
    auto fractions = utilization_fractions(tracker);
    for (const auto& [key, value] : fractions) {
        int kappa = key.instant - 1;  // first-order leftovers live one instant after purchase
        if (kappa < inst.first_instant || kappa >= inst.last_instant) continue;
        int m_next = static_cast<int>(inst.purchasable_at(key.instant).size());
        int q = key.slot - m_next;
        auto& row = f[kappa - inst.first_instant];
        if (q >= 0 && q < static_cast<int>(row.size())) row[q] = value;
    }
    return f;
}

}  // namespace

RollResult run_myopic(const Instance& inst, const SolverConfig& scfg) {
    RollResult res;
    PassResult pass = roll(inst, scfg, nullptr);
    res.feasible = pass.feasible;
    res.failed_instant = pass.failed_instant;
    if (pass.feasible) res.plan = assemble_plan(inst, pass.decisions);
    return res;
}

UtilizationTable initial_delta(const Instance& inst, double delta_ini) {
    UtilizationTable delta(inst.periods());
    for (int kappa = inst.first_instant; kappa < inst.last_instant; ++kappa)
        delta[kappa - inst.first_instant].assign(2 * inst.purchasable_at(kappa).size(),
                                                 delta_ini);
    return delta;
}

UtilizationTable update_delta(const UtilizationTable& delta, const FractionTable& fractions,
                              int cycle, double sigma) {
    if (fractions.size() != delta.size())
        throw std::invalid_argument("fraction table shape mismatch");
    double weight = std::pow(sigma, cycle);
    UtilizationTable next = delta;
    for (size_t k = 0; k < delta.size(); ++k) {
        if (fractions[k].size() != delta[k].size())
            throw std::invalid_argument("fraction table shape mismatch");
        for (size_t q = 0; q < delta[k].size(); ++q)
            if (fractions[k][q])
                next[k][q] = (1 - weight) * delta[k][q] + weight * *fractions[k][q];
    }
    return next;
}

double max_delta_change(const UtilizationTable& before, const UtilizationTable& after) {
    double worst = 0;
    for (size_t k = 0; k < before.size(); ++k)
        for (size_t q = 0; q < before[k].size(); ++q)
            worst = std::max(worst, std::abs(after[k][q] - before[k][q]));
    return worst;
}

bool should_stop(const UtilizationTable& before, const UtilizationTable& after, double eps,
                 int no_improve_count, int no_improve_limit) {
    if (no_improve_count >= no_improve_limit) return true;
    return max_delta_change(before, after) <= eps;
}

std::string TrainingTrace::to_csv() const {
    std::ostringstream out;
    out << "cycle,max_delta_change,cost,leftover_value,improved\n";
    for (const CycleRecord& rec : cycles) {
        out << rec.cycle << ",";
        if (rec.aborted)
            out << "aborted,,,\n";
        else
            out << rec.max_delta_change << "," << rec.cost << "," << rec.leftover_value << ","
                << (rec.improved ? 1 : 0) << "\n";
    }
    return out.str();
}

TrainingResult run_forward_looking(const Instance& inst, const TrainingConfig& tcfg,
                                   const SolverConfig& scfg) {
    if (tcfg.delta_ini < 0 || tcfg.delta_ini > 1)
        throw std::invalid_argument("delta_ini outside [0, 1]");
    if (!(tcfg.sigma > 0 && tcfg.sigma < 1))
        throw std::invalid_argument("sigma outside (0, 1)");
    if (!(tcfg.eps > 0)) throw std::invalid_argument("eps must be positive");

    TrainingResult result;
    UtilizationTable delta = initial_delta(inst, tcfg.delta_ini);
    int no_improve = 0;
    bool have_complete_cycle = false;

    // the update shrinks by sigma^cycle, so the stopping rule must fire within
    // ceil(log eps / log sigma) + 1 cycles even without the no-improvement cap
    int hard_cap = std::min<int>(
        tcfg.cycle_cap,
        static_cast<int>(std::ceil(std::log(tcfg.eps) / std::log(tcfg.sigma))) + 1);

    for (int cycle = 0; cycle <= tcfg.cycle_cap; ++cycle) {
        PassResult pass = roll(inst, scfg, &delta);
        CycleRecord rec;
        rec.cycle = cycle;
        if (!pass.feasible) {
            if (!have_complete_cycle) {
                result.feasible = false;
                result.failed_instant = pass.failed_instant;
                return result;
            }
            rec.aborted = true;
            result.trace.cycles.push_back(rec);
            break;  // no new information; delta is unchanged and so is the plan
        }
        have_complete_cycle = true;
        Plan plan = assemble_plan(inst, pass.decisions);
        rec.cost = plan.purchased_cost;
        rec.leftover_value = plan.final_leftover_value;
        if (result.best_cycle < 0 || plan.better_than(result.best_plan)) {
            result.best_plan = std::move(plan);
            result.best_cycle = cycle;
            rec.improved = true;
            no_improve = 0;
        } else {
            ++no_improve;
        }

        FractionTable fractions = fractions_from(inst, pass.tracker);
        UtilizationTable next = update_delta(delta, fractions, cycle, tcfg.sigma);
        rec.max_delta_change = max_delta_change(delta, next);
        result.trace.cycles.push_back(rec);
        bool stop = should_stop(delta, next, tcfg.eps, no_improve, tcfg.no_improve_limit);
        delta = std::move(next);
        if (stop) break;
        if (cycle + 1 > hard_cap) break;  // defensive; should_stop fires first
    }
    result.feasible = true;
    result.final_delta = delta;
    return result;
}

}  // namespace cutplan
