#pragma once

#include <string>
#include <vector>

#include "cutplan/instance.hpp"
#include "cutplan/matheuristic.hpp"
#include "cutplan/solver.hpp"

namespace cutplan {

enum class Outcome { Win, Tie, Loss };

const char* to_string(Outcome outcome);

// 100*(fa - fb)/fb; reported to 4 decimals in tables
double gap_percent(double objective_a, double objective_b);
std::string format_gap(double gap);  // fixed, 4 decimals

// A versus B: strictly lower cost wins; equal cost breaks ties on leftovers.
Outcome classify(std::int64_t cost_a, double leftovers_a, std::int64_t cost_b,
                 double leftovers_b);

struct MethodResult {
    std::string method;
    bool feasible = false;
    double objective = 0;
    std::int64_t cost = 0;
    double leftover_value = 0;
    double wall_seconds = 0;
};

struct InstanceResult {
    std::string label;
    int periods = 0;
    int xi = 0;
    std::vector<MethodResult> methods;
};

struct ExperimentReport {
    std::vector<InstanceResult> results;
    std::string csv;
    std::string table;
};

struct ExperimentConfig {
    std::vector<std::string> methods{"myopic", "flook"};
    TrainingConfig training;
    SolverConfig solver;
    int workers = 1;
};

ExperimentReport run_experiment(const std::vector<std::pair<std::string, Instance>>& instances,
                                const ExperimentConfig& cfg);

struct SweepPoint {
    double delta_ini = 0;
    double sigma = 0;
    double gap = 0;  // flook vs myopic, per the gap formula
    int cycles = 0;
    double seconds = 0;
};

// Grid over delta_ini, sigma in {0.5, 0.55, ..., 1.0}; sigma = 1.0 is clamped
// just below 1 since the update rule requires sigma < 1.
std::vector<SweepPoint> run_sweep(const Instance& inst, const TrainingConfig& base,
                                  const SolverConfig& scfg, double grid_step = 0.05);
std::string sweep_to_csv(const std::vector<SweepPoint>& points);

}  // namespace cutplan
