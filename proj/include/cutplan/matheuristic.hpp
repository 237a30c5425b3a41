#pragma once

#include <optional>
#include <vector>

#include "cutplan/genealogy.hpp"
#include "cutplan/instance.hpp"
#include "cutplan/solver.hpp"

namespace cutplan {

struct TrainingConfig {
    double delta_ini = 0.9;
    double sigma = 0.9;
    double eps = 0.01;
    int cycle_cap = 100;
    int no_improve_limit = 10;
};

// delta[kappa - p][q]: utilization estimate for first-order leftover q at
// instant kappa; q = 2j for the top leftover of purchasable j, 2j+1 for the
// right-hand-side one.
using UtilizationTable = std::vector<std::vector<double>>;
using FractionTable = std::vector<std::vector<std::optional<double>>>;

struct RollResult {
    bool feasible = false;
    int failed_instant = -1;
    Plan plan;
};

RollResult run_myopic(const Instance& inst, const SolverConfig& scfg);

struct CycleRecord {
    int cycle = 0;
    double max_delta_change = 0;
    bool aborted = false;
    std::int64_t cost = 0;
    double leftover_value = 0;
    bool improved = false;
};

struct TrainingTrace {
    std::vector<CycleRecord> cycles;
    std::string to_csv() const;
};

struct TrainingResult {
    bool feasible = false;
    int failed_instant = -1;
    Plan best_plan;
    int best_cycle = -1;
    TrainingTrace trace;
    UtilizationTable final_delta;
};

TrainingResult run_forward_looking(const Instance& inst, const TrainingConfig& tcfg,
                                   const SolverConfig& scfg);

UtilizationTable initial_delta(const Instance& inst, double delta_ini);
UtilizationTable update_delta(const UtilizationTable& delta, const FractionTable& fractions,
                              int cycle, double sigma);
double max_delta_change(const UtilizationTable& before, const UtilizationTable& after);
bool should_stop(const UtilizationTable& before, const UtilizationTable& after, double eps,
                 int no_improve_count, int no_improve_limit = 10);

}  // namespace cutplan
