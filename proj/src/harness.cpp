#include "cutplan/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cutplan/oracle.hpp"

namespace cutplan {

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Win: return "W";
        case Outcome::Tie: return "T";
        case Outcome::Loss: return "L";
    }
    return "?";
}

double gap_percent(double objective_a, double objective_b) {
    if (objective_b == 0) throw std::invalid_argument("reference objective is zero");
    return 100.0 * (objective_a - objective_b) / objective_b;
}

std::string format_gap(double gap) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", gap);
    return buf;
}

Outcome classify(std::int64_t cost_a, double leftovers_a, std::int64_t cost_b,
                 double leftovers_b) {
    if (cost_a < cost_b) return Outcome::Win;
    if (cost_a > cost_b) return Outcome::Loss;
    if (leftovers_a > leftovers_b + 1e-9) return Outcome::Win;
    if (leftovers_a < leftovers_b - 1e-9) return Outcome::Loss;
    return Outcome::Tie;
}

namespace {

MethodResult run_method(const std::string& method, const Instance& inst,
                        const ExperimentConfig& cfg) {
    MethodResult res;
    res.method = method;
    auto start = std::chrono::steady_clock::now();
    try {
        if (method == "myopic") {
            RollResult roll = run_myopic(inst, cfg.solver);
            res.feasible = roll.feasible;
            if (roll.feasible) {
                res.objective = roll.plan.objective;
                res.cost = roll.plan.purchased_cost;
                res.leftover_value = roll.plan.final_leftover_value;
            }
        } else if (method == "flook") {
            TrainingResult training = run_forward_looking(inst, cfg.training, cfg.solver);
            res.feasible = training.feasible;
            if (training.feasible) {
                res.objective = training.best_plan.objective;
                res.cost = training.best_plan.purchased_cost;
                res.leftover_value = training.best_plan.final_leftover_value;
            }
        } else if (method == "exact") {
            ModelSpec ms = build_full_model(inst);
            MilpSolution sol = solve(ms, cfg.solver);
            res.feasible = sol.status == SolveStatus::Optimal;
            if (res.feasible) {
                res.objective = sol.objective;
                // objective = C*cost - value with 0 <= value < C
                double scale = static_cast<double>(ms.scale_constant);
                res.cost = static_cast<std::int64_t>(std::ceil(sol.objective / scale - 1e-9));
                res.leftover_value = static_cast<double>(res.cost) * scale - sol.objective;
            }
        } else if (method == "oracle") {
            auto plan = exact_multi_period(inst, OracleLimits{});
            res.feasible = plan.has_value();
            if (plan) {
                res.objective = plan->objective;
                res.cost = plan->purchased_cost;
                res.leftover_value = plan->final_leftover_value;
            }
        } else {
            throw std::invalid_argument("unknown method '" + method + "'");
        }
    } catch (const std::exception&) {
        res.feasible = false;
    }
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace

ExperimentReport run_experiment(const std::vector<std::pair<std::string, Instance>>& instances,
                                const ExperimentConfig& cfg) {
    ExperimentReport report;
    report.results.resize(instances.size());

    auto work = [&](size_t idx) {
        InstanceResult row;
        row.label = instances[idx].first;
        row.periods = instances[idx].second.periods();
        row.xi = instances[idx].second.xi;
        for (const std::string& method : cfg.methods)
            row.methods.push_back(run_method(method, instances[idx].second, cfg));
        return row;
    };

    if (cfg.workers > 1) {
        std::vector<std::future<InstanceResult>> futures;
        futures.reserve(instances.size());
        for (size_t idx = 0; idx < instances.size(); ++idx)
            futures.push_back(std::async(std::launch::async, work, idx));
        for (size_t idx = 0; idx < instances.size(); ++idx)
            report.results[idx] = futures[idx].get();
    } else {
        for (size_t idx = 0; idx < instances.size(); ++idx) report.results[idx] = work(idx);
    }

    std::ostringstream csv;
    csv << "instance,periods,xi,method,feasible,objective,cost,leftover_value,seconds\n";
    for (const InstanceResult& row : report.results)
        for (const MethodResult& mr : row.methods) {
            char line[256];
            std::snprintf(line, sizeof(line), "%s,%d,%d,%s,%d,%.0f,%lld,%.0f,%.3f\n",
                          row.label.c_str(), row.periods, row.xi, mr.method.c_str(),
                          mr.feasible ? 1 : 0, mr.objective,
                          static_cast<long long>(mr.cost), mr.leftover_value, mr.wall_seconds);
            csv << line;
        }
    report.csv = csv.str();

    std::ostringstream table;
    table << "instance      periods xi ";
    for (const std::string& method : cfg.methods) {
        char head[128];
        std::snprintf(head, sizeof(head), "| %-10s cost leftovers seconds ", method.c_str());
        table << head;
    }
    table << "\n";
    for (const InstanceResult& row : report.results) {
        char head[64];
        std::snprintf(head, sizeof(head), "%-13s %7d %2d ", row.label.c_str(), row.periods,
                      row.xi);
        table << head;
        for (const MethodResult& mr : row.methods) {
            char cell[128];
            if (mr.feasible)
                std::snprintf(cell, sizeof(cell), "| %10.0f %4lld %9.0f %7.2f ", mr.objective,
                              static_cast<long long>(mr.cost), mr.leftover_value,
                              mr.wall_seconds);
            else
                std::snprintf(cell, sizeof(cell), "| %10s %4s %9s %7.2f ", "infeasible", "-",
                              "-", mr.wall_seconds);
            table << cell;
        }
        table << "\n";
    }

    // per (periods, xi) block: averages and win/tie/loss of the first method
    // against the second
    if (cfg.methods.size() >= 2) {
        std::map<std::pair<int, int>, std::vector<const InstanceResult*>> blocks;
        for (const InstanceResult& row : report.results)
            blocks[{row.periods, row.xi}].push_back(&row);
        table << "\nblock summary (" << cfg.methods[0] << " vs " << cfg.methods[1] << ")\n";
        table << "periods xi   W/T/L   avg-gap%\n";
        for (const auto& [key, rows] : blocks) {
            int wins = 0, ties = 0, losses = 0;
            double gap_sum = 0;
            int gap_count = 0;
            for (const InstanceResult* row : rows) {
                const MethodResult& a = row->methods[0];
                const MethodResult& b = row->methods[1];
                if (!a.feasible || !b.feasible) continue;
                Outcome outcome = classify(a.cost, a.leftover_value, b.cost, b.leftover_value);
                wins += outcome == Outcome::Win;
                ties += outcome == Outcome::Tie;
                losses += outcome == Outcome::Loss;
                if (b.objective != 0) {
                    gap_sum += gap_percent(a.objective, b.objective);
                    ++gap_count;
                }
            }
            char line[128];
            std::snprintf(line, sizeof(line), "%7d %2d   %d/%d/%d   %s\n", key.first,
                          key.second, wins, ties, losses,
                          gap_count ? format_gap(gap_sum / gap_count).c_str() : "-");
            table << line;
        }
    }
    report.table = table.str();
    return report;
}

std::vector<SweepPoint> run_sweep(const Instance& inst, const TrainingConfig& base,
                                  const SolverConfig& scfg, double grid_step) {
    RollResult myopic = run_myopic(inst, scfg);
    std::vector<SweepPoint> points;
    for (double dini = 0.5; dini <= 1.0 + 1e-9; dini += grid_step)
        for (double sigma = 0.5; sigma <= 1.0 + 1e-9; sigma += grid_step) {
            TrainingConfig tcfg = base;
            tcfg.delta_ini = std::min(dini, 1.0);
            // the update rule requires sigma < 1; a request for 1.0 is clamped
            tcfg.sigma = std::min(sigma, 1.0 - 1e-9);
            SweepPoint point;
            point.delta_ini = dini;
            point.sigma = sigma;
            auto start = std::chrono::steady_clock::now();
            TrainingResult training = run_forward_looking(inst, tcfg, scfg);
            point.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
            point.cycles = static_cast<int>(training.trace.cycles.size());
            if (training.feasible && myopic.feasible && myopic.plan.objective != 0)
                point.gap = gap_percent(training.best_plan.objective, myopic.plan.objective);
            points.push_back(point);
        }
    return points;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
    std::ostringstream out;
    out << "delta_ini,sigma,gap_percent,cycles,seconds\n";
    for (const SweepPoint& point : points) {
        char line[160];
        std::snprintf(line, sizeof(line), "%.2f,%.2f,%s,%d,%.3f\n", point.delta_ini,
                      point.sigma, format_gap(point.gap).c_str(), point.cycles, point.seconds);
        out << line;
    }
    return out.str();
}

}  // namespace cutplan
