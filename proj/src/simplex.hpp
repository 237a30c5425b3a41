#pragma once

#include <vector>

#include "cutplan/model.hpp"

namespace cutplan::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpProblem {
    // minimize c.x subject to row_lo <= A x <= row_up (sense encoded per row)
    // and lb <= x <= ub; lower bounds are finite, upper bounds may be +inf.
    int n = 0;
    std::vector<double> c;
    std::vector<double> lb, ub;
    std::vector<LinearRow> rows;
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0;
    int iterations = 0;
};

LpResult solve_lp(const LpProblem& prob, int iteration_limit = 0);

}  // namespace cutplan::lp
