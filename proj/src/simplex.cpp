#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace cutplan::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-7;
constexpr double kPivotTol = 1e-8;
constexpr double kCostTol = 1e-8;

// Dense bounded-variable two-phase simplex on the full tableau. Columns are
// the structural variables followed by one logical (slack) column per row;
// every column carries bounds, equalities pin their slack to [0, 0].
class Tableau {
  public:
    explicit Tableau(const LpProblem& prob) : m_(static_cast<int>(prob.rows.size())) {
        n_ = prob.n;
        cols_ = n_ + m_;
        lb_ = prob.lb;
        ub_ = prob.ub;
        cost_ = prob.c;
        lb_.resize(cols_, 0);
        ub_.resize(cols_, 0);
        cost_.resize(cols_, 0);
        rhs_.assign(m_, 0);
        a_.assign(static_cast<size_t>(m_) * cols_, 0);
        for (int r = 0; r < m_; ++r) {
            const LinearRow& row = prob.rows[r];
            double sign = row.sense == RowSense::Ge ? -1.0 : 1.0;  // normalize >= to <=
            for (const Term& term : row.terms) at(r, term.var) += sign * term.coef;
            rhs_[r] = sign * row.rhs;
            int sc = n_ + r;
            at(r, sc) = 1.0;
            lb_[sc] = 0;
            ub_[sc] = row.sense == RowSense::Eq ? 0 : kInf;
        }
        basis_.resize(m_);
        in_basis_.assign(cols_, -1);
        at_upper_.assign(cols_, false);
        x_.assign(cols_, 0);
        for (int r = 0; r < m_; ++r) {
            basis_[r] = n_ + r;
            in_basis_[n_ + r] = r;
        }
        for (int j = 0; j < cols_; ++j)
            if (in_basis_[j] < 0) x_[j] = nonbasic_value(j);
        orig_ = a_;
        for (double c : cost_) cost_scale_ = std::max(cost_scale_, std::abs(c));
        recompute_beta();
    }

    LpResult run(int iteration_limit) {
        LpResult res;
        int limit = iteration_limit > 0 ? iteration_limit : 20000 + 60 * (m_ + cols_);
        int iter = 0;
        int stall = 0;  // consecutive degenerate pivots; Bland's rule breaks cycles
        bool unbounded = false;
        while (iter < limit) {
            if (since_refactor_ > 3000) refactor();
            if (max_infeasibility() <= kFeasTol) break;
            int step = phase1_step(stall > 300);
            if (step == 0) {
                // confirm on fresh numerics before declaring infeasibility
                if (since_refactor_ > 0) {
                    refactor();
                    continue;
                }
                res.status = LpStatus::Infeasible;
                res.iterations = iter;
                return res;
            }
            stall = (step == 2) ? stall + 1 : 0;
            ++iter;
            ++since_refactor_;
        }
        if (max_infeasibility() > kFeasTol) {
            res.status = iter >= limit ? LpStatus::IterationLimit : LpStatus::Infeasible;
            res.iterations = iter;
            if (res.status == LpStatus::IterationLimit && std::getenv("CUTPLAN_LP_DEBUG"))
                std::fprintf(stderr, "lp limit in phase 1: m=%d cols=%d iter=%d inf=%g\n", m_,
                             cols_, iter, max_infeasibility());
            return res;
        }
        stall = 0;
        while (iter < limit) {
            if (since_refactor_ > 3000) refactor();
            int step = phase2_step(stall > 300);
            if (step == 0) {
                // declare optimality only right after a refactorization
                if (since_refactor_ > 0) {
                    refactor();
                    continue;
                }
                break;
            }
            if (step < 0) {
                unbounded = true;
                break;
            }
            stall = (step == 2) ? stall + 1 : 0;  // degenerate pivot
            ++iter;
            ++since_refactor_;
        }
        res.iterations = iter;
        if (unbounded) {
            res.status = LpStatus::Unbounded;
            return res;
        }
        if (iter >= limit) {
            res.status = LpStatus::IterationLimit;
            if (std::getenv("CUTPLAN_LP_DEBUG"))
                std::fprintf(stderr, "lp limit in phase 2: m=%d cols=%d iter=%d stall=%d\n", m_,
                             cols_, iter, stall);
            return res;
        }
        res.status = LpStatus::Optimal;
        res.x.assign(x_.begin(), x_.begin() + n_);
        for (int r = 0; r < m_; ++r)
            if (basis_[r] < n_) res.x[basis_[r]] = beta_[r];
        res.objective = 0;
        for (int j = 0; j < n_; ++j) res.objective += cost_[j] * res.x[j];
        return res;
    }

  private:
    double& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    double at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    double nonbasic_value(int j) const { return at_upper_[j] ? ub_[j] : lb_[j]; }

    void recompute_beta() {
        beta_.assign(m_, 0);
        for (int r = 0; r < m_; ++r) beta_[r] = rhs_[r];
        // beta = rhs - sum over nonbasic columns of value * column
        for (int j = 0; j < cols_; ++j) {
            if (in_basis_[j] >= 0) continue;
            double v = nonbasic_value(j);
            if (v == 0) continue;
            for (int r = 0; r < m_; ++r) beta_[r] -= at(r, j) * v;
        }
    }

    double max_infeasibility() const {
        double worst = 0;
        for (int r = 0; r < m_; ++r) {
            int b = basis_[r];
            worst = std::max(worst, lb_[b] - beta_[r]);
            if (ub_[b] < kInf) worst = std::max(worst, beta_[r] - ub_[b]);
        }
        return worst;
    }

    // Rebuilds the tableau as B^{-1}[A|I] from the pristine data via a dense
    // LU of the basis matrix; row updates accumulate error on large
    // coefficients and this restores full accuracy.
    void refactor() {
        since_refactor_ = 0;
        std::vector<double> lu(static_cast<size_t>(m_) * m_);
        for (int r = 0; r < m_; ++r)
            for (int k = 0; k < m_; ++k)
                lu[static_cast<size_t>(r) * m_ + k] = orig_[static_cast<size_t>(r) * cols_ +
                                                           basis_[k]];
        std::vector<int> perm(m_);
        for (int r = 0; r < m_; ++r) perm[r] = r;
        for (int col = 0; col < m_; ++col) {
            int piv = col;
            double best = std::abs(lu[static_cast<size_t>(perm[col]) * m_ + col]);
            for (int r = col + 1; r < m_; ++r) {
                double v = std::abs(lu[static_cast<size_t>(perm[r]) * m_ + col]);
                if (v > best) {
                    best = v;
                    piv = r;
                }
            }
            std::swap(perm[col], perm[piv]);
            double diag = lu[static_cast<size_t>(perm[col]) * m_ + col];
            if (std::abs(diag) < 1e-12) diag = diag < 0 ? -1e-12 : 1e-12;
            lu[static_cast<size_t>(perm[col]) * m_ + col] = diag;
            for (int r = col + 1; r < m_; ++r) {
                double* row = &lu[static_cast<size_t>(perm[r]) * m_];
                double factor = row[col] / diag;
                row[col] = factor;
                if (factor == 0) continue;
                const double* prow = &lu[static_cast<size_t>(perm[col]) * m_];
                for (int k = col + 1; k < m_; ++k) row[k] -= factor * prow[k];
            }
        }
        auto solve_inplace = [&](std::vector<double>& y) {
            std::vector<double> z(m_);
            for (int r = 0; r < m_; ++r) {
                double v = y[perm[r]];
                const double* row = &lu[static_cast<size_t>(perm[r]) * m_];
                for (int k = 0; k < r; ++k) v -= row[k] * z[k];
                z[r] = v;
            }
            for (int r = m_ - 1; r >= 0; --r) {
                const double* row = &lu[static_cast<size_t>(perm[r]) * m_];
                double v = z[r];
                for (int k = r + 1; k < m_; ++k) v -= row[k] * z[k];
                z[r] = v / row[r];
            }
            y = z;
        };
        std::vector<double> col(m_);
        for (int j = 0; j < cols_; ++j) {
            int pos = in_basis_[j];
            if (pos >= 0) {
                for (int r = 0; r < m_; ++r) at(r, j) = r == pos ? 1.0 : 0.0;
                continue;
            }
            for (int r = 0; r < m_; ++r) col[r] = orig_[static_cast<size_t>(r) * cols_ + j];
            solve_inplace(col);
            for (int r = 0; r < m_; ++r) at(r, j) = col[r];
        }
        for (int r = 0; r < m_; ++r) col[r] = rhs_[r];
        for (int j = 0; j < cols_; ++j) {
            if (in_basis_[j] >= 0) continue;
            double v = nonbasic_value(j);
            if (v == 0) continue;
            for (int r = 0; r < m_; ++r) col[r] -= orig_[static_cast<size_t>(r) * cols_ + j] * v;
        }
        solve_inplace(col);
        beta_ = col;
    }

    // gradient of the total infeasibility with respect to nonbasic j moving up
    std::vector<double> phase1_gradient() const {
        std::vector<double> d(m_, 0);
        for (int r = 0; r < m_; ++r) {
            int b = basis_[r];
            if (beta_[r] < lb_[b] - kFeasTol)
                d[r] = 1.0;  // below its bound: increasing beta reduces Phi
            else if (ub_[b] < kInf && beta_[r] > ub_[b] + kFeasTol)
                d[r] = -1.0;
        }
        std::vector<double> grad(cols_, 0);
        for (int r = 0; r < m_; ++r) {
            if (d[r] == 0) continue;
            const double* row = &a_[static_cast<size_t>(r) * cols_];
            for (int j = 0; j < cols_; ++j) grad[j] += d[r] * row[j];
        }
        return grad;
    }

    // 0 = no improving direction (infeasible), 1 = progressed, 2 = degenerate
    int phase1_step(bool bland) {
        std::vector<double> grad = phase1_gradient();
        int enter = -1;
        double best = kCostTol;
        int dir = 1;
        for (int j = 0; j < cols_; ++j) {
            if (in_basis_[j] >= 0) continue;
            if (ub_[j] - lb_[j] < 1e-12) continue;  // fixed column
            // dPhi/dx_j = grad[j]
            double score = 0;
            int d = 0;
            if (!at_upper_[j] && -grad[j] > kCostTol) {
                score = -grad[j];
                d = 1;
            } else if (at_upper_[j] && grad[j] > kCostTol) {
                score = grad[j];
                d = -1;
            } else {
                continue;
            }
            if (bland) {
                enter = j;
                dir = d;
                break;
            }
            if (score > best) {
                best = score;
                enter = j;
                dir = d;
            }
        }
        if (enter < 0) return 0;
        int moved = pivot(enter, dir, true);
        return moved < 0 ? 1 : moved;
    }

    // returns 0 = optimal, 1 = progressed, 2 = degenerate pivot, -1 = unbounded
    int phase2_step(bool bland) {
        // reduced costs via the basic cost multipliers: z_j = c_j - y.A_j with
        // y solving y B = c_B; on the updated tableau z_j = c_j - c_B . T_j
        std::vector<double> z(cols_, 0);
        for (int j = 0; j < cols_; ++j) z[j] = cost_[j];
        for (int r = 0; r < m_; ++r) {
            double cb = cost_[basis_[r]];
            if (cb == 0) continue;
            const double* row = &a_[static_cast<size_t>(r) * cols_];
            for (int j = 0; j < cols_; ++j) z[j] -= cb * row[j];
        }
        int enter = -1;
        int dir = 1;
        // noise in the updated reduced costs scales with the largest objective
        // coefficient; anything below that floor is not a real direction
        double tol = std::max(kCostTol, 1e-10 * cost_scale_);
        double best = tol;
        for (int j = 0; j < cols_; ++j) {
            if (in_basis_[j] >= 0) continue;
            if (ub_[j] - lb_[j] < 1e-12) continue;
            double score = 0;
            int d = 0;
            if (!at_upper_[j] && z[j] < -tol) {
                score = -z[j];
                d = 1;
            } else if (at_upper_[j] && z[j] > tol) {
                score = z[j];
                d = -1;
            } else {
                continue;
            }
            if (bland) {  // first eligible index
                enter = j;
                dir = d;
                break;
            }
            if (score > best) {
                best = score;
                enter = j;
                dir = d;
            }
        }
        if (enter < 0) return 0;
        int moved = pivot(enter, dir, false);
        return moved;
    }

    // Moves nonbasic `enter` in direction dir (+1 up from lower, -1 down from
    // upper) until a bound blocks. Returns -1 unbounded, 1 progressed, 2
    // degenerate.
    int pivot(int enter, int dir, bool phase1) {
        double limit = kInf;  // step on x_enter
        int leave_row = -1;
        bool leave_to_upper = false;
        // entering variable's own opposite bound
        if (ub_[enter] < kInf) limit = ub_[enter] - lb_[enter];

        for (int r = 0; r < m_; ++r) {
            double alpha = at(r, enter);
            if (std::abs(alpha) < kPivotTol) continue;
            int b = basis_[r];
            double rate = -static_cast<double>(dir) * alpha;  // d beta_r / d step
            double lo = lb_[b], hi = ub_[b];
            double beta = beta_[r];
            bool below = beta < lo - kFeasTol;
            bool above = hi < kInf && beta > hi + kFeasTol;
            double step = kInf;
            bool to_upper = false;
            if (phase1 && below) {
                if (rate > 0) step = (lo - beta) / rate;  // blocks on becoming feasible
                to_upper = false;
            } else if (phase1 && above) {
                if (rate < 0) step = (hi - beta) / rate;
                to_upper = true;
            } else {
                if (rate > 0 && hi < kInf) {
                    step = (hi - beta) / rate;
                    to_upper = true;
                } else if (rate < 0) {
                    step = (lo - beta) / rate;
                    to_upper = false;
                }
            }
            if (step < -1e-12) step = 0;
            if (step < limit - 1e-12 ||
                (step < limit + 1e-12 && leave_row >= 0 &&
                 std::abs(alpha) > std::abs(at(leave_row, enter)))) {
                limit = step;
                leave_row = r;
                leave_to_upper = to_upper;
            }
        }

        if (limit == kInf) return -1;  // unbounded direction

        if (leave_row < 0) {
            // bound flip: entering moves to its other bound
            at_upper_[enter] = dir > 0;
            x_[enter] = nonbasic_value(enter);
            for (int r = 0; r < m_; ++r)
                beta_[r] -= at(r, enter) * static_cast<double>(dir) * limit;
            return limit > 1e-10 ? 1 : 2;
        }

        // update beta for the step, then exchange
        for (int r = 0; r < m_; ++r)
            beta_[r] -= at(r, enter) * static_cast<double>(dir) * limit;
        double enter_value = nonbasic_value(enter) + dir * limit;
        int leave = basis_[leave_row];
        at_upper_[leave] = leave_to_upper;
        x_[leave] = nonbasic_value(leave);
        beta_[leave_row] = enter_value;

        // row reduction on the full tableau
        double piv = at(leave_row, enter);
        double* prow = &a_[static_cast<size_t>(leave_row) * cols_];
        double inv = 1.0 / piv;
        for (int j = 0; j < cols_; ++j) prow[j] *= inv;
        for (int r = 0; r < m_; ++r) {
            if (r == leave_row) continue;
            double factor = at(r, enter);
            if (std::abs(factor) < 1e-12) continue;
            double* row = &a_[static_cast<size_t>(r) * cols_];
            for (int j = 0; j < cols_; ++j) row[j] -= factor * prow[j];
            row[enter] = 0;
        }
        prow[enter] = 1;
        in_basis_[leave] = -1;
        in_basis_[enter] = leave_row;
        basis_[leave_row] = enter;
        return limit > 1e-10 ? 1 : 2;
    }

    int m_ = 0, n_ = 0, cols_ = 0;
    std::vector<double> a_;
    std::vector<double> orig_;
    std::vector<double> rhs_;
    double cost_scale_ = 1.0;
    int since_refactor_ = 0;
    std::vector<double> lb_, ub_, cost_;
    std::vector<int> basis_, in_basis_;
    std::vector<bool> at_upper_;
    std::vector<double> x_, beta_;
};

}  // namespace

LpResult solve_lp(const LpProblem& prob, int iteration_limit) {
    for (int j = 0; j < prob.n; ++j) {
        if (!(prob.lb[j] > -kInf)) throw std::invalid_argument("lower bounds must be finite");
        if (prob.lb[j] > prob.ub[j] + kFeasTol) {
            LpResult res;
            res.status = LpStatus::Infeasible;
            return res;
        }
    }
    if (prob.rows.empty()) {
        // pure bound problem
        LpResult res;
        res.status = LpStatus::Optimal;
        res.x.resize(prob.n);
        for (int j = 0; j < prob.n; ++j) {
            if (prob.c[j] > 0)
                res.x[j] = prob.lb[j];
            else if (prob.c[j] < 0) {
                if (prob.ub[j] == kInf) {
                    res.status = LpStatus::Unbounded;
                    return res;
                }
                res.x[j] = prob.ub[j];
            } else {
                res.x[j] = prob.lb[j];
            }
            res.objective += prob.c[j] * res.x[j];
        }
        return res;
    }
    Tableau tableau(prob);
    return tableau.run(iteration_limit);
}

}  // namespace cutplan::lp
