#pragma once

#include <string>

#include "cutplan/model.hpp"

namespace cutplan {

enum class SolverBackend { Builtin, External };

struct SolverConfig {
    SolverBackend backend = SolverBackend::Builtin;
    // external backend: command with {lp} and {sol} placeholders
    std::string command_template;
    double abs_gap = 1.0 - 1e-6;
    double rel_gap = 0.0;
    double time_limit_seconds = 0;  // 0 = unlimited
    long long node_limit = 0;       // 0 = unlimited
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, Limit };

struct MilpSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> assignment;  // one value per model variable
    double objective = 0;
    double best_bound = 0;
    double wall_time_seconds = 0;
    long long nodes = 0;
};

class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

MilpSolution solve(const ModelSpec& ms, const SolverConfig& cfg);

// CPLEX-style LP text; deterministic variable and row ordering.
std::string export_lp(const ModelSpec& ms);

// Solution text: "# objective <value>" header plus "<name> <value>" lines,
// absent variables are zero.
MilpSolution import_solution(const std::string& text, const ModelSpec& ms);

const char* to_string(SolveStatus status);

}  // namespace cutplan
