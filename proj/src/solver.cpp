#include "cutplan/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include "simplex.hpp"

namespace cutplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntTol = 1e-6;

bool is_int_kind(VarKind kind) { return kind != VarKind::Continuous; }

struct Working {
    std::vector<double> lb, ub;
    std::vector<char> fixed;
    std::vector<LinearRow> rows;   // terms reference original variable ids
    std::vector<char> row_alive;
    double objective_shift = 0;
    bool infeasible = false;
};

void round_integer_bounds(const ModelSpec& ms, Working& w, int j) {
    if (!is_int_kind(ms.vars[j].kind)) return;
    w.lb[j] = std::ceil(w.lb[j] - kIntTol);
    if (w.ub[j] < kInf) w.ub[j] = std::floor(w.ub[j] + kIntTol);
}

// Lossless reductions: activity-redundant rows, implied bounds, fixed-variable
// substitution, singleton rows. Keeps the optimum of the node intact.
void presolve(const ModelSpec& ms, Working& w) {
    const double ftol = 1e-7;
    int n = ms.var_count();
    for (int j = 0; j < n; ++j) round_integer_bounds(ms, w, j);

    bool changed = true;
    int passes = 0;
    while (changed && passes < 30 && !w.infeasible) {
        changed = false;
        ++passes;
        for (int j = 0; j < n; ++j)
            if (w.lb[j] > w.ub[j] + ftol) {
                w.infeasible = true;
                return;
            }
        for (size_t ri = 0; ri < w.rows.size(); ++ri) {
            if (!w.row_alive[ri]) continue;
            LinearRow& row = w.rows[ri];
            // substitute fixed variables
            auto dst = row.terms.begin();
            for (const Term& term : row.terms) {
                if (w.fixed[term.var]) {
                    row.rhs -= term.coef * w.lb[term.var];
                } else {
                    *dst++ = term;
                }
            }
            if (dst != row.terms.end()) {
                row.terms.erase(dst, row.terms.end());
                changed = true;
            }

            double min_act = 0, max_act = 0;
            bool min_inf = false, max_inf = false;
            for (const Term& term : row.terms) {
                double lo = w.lb[term.var], hi = w.ub[term.var];
                double a = term.coef;
                double tlo = a > 0 ? a * lo : (hi == kInf ? -kInf : a * hi);
                double thi = a > 0 ? (hi == kInf ? kInf : a * hi) : a * lo;
                if (tlo == -kInf)
                    min_inf = true;
                else
                    min_act += tlo;
                if (thi == kInf)
                    max_inf = true;
                else
                    max_act += thi;
            }
            double act_lo = min_inf ? -kInf : min_act;
            double act_hi = max_inf ? kInf : max_act;

            double row_lo = row.sense == RowSense::Le ? -kInf : row.rhs;
            double row_up = row.sense == RowSense::Ge ? kInf : row.rhs;
            if (act_lo > row_up + ftol + 1e-9 * std::abs(row_up)) {
                w.infeasible = true;
                return;
            }
            if (act_hi < row_lo - ftol - 1e-9 * std::abs(row_lo)) {
                w.infeasible = true;
                return;
            }
            if (act_lo >= row_lo - ftol && act_hi <= row_up + ftol) {
                w.row_alive[ri] = 0;  // redundant
                changed = true;
                continue;
            }
            if (row.terms.empty()) {
                w.row_alive[ri] = 0;
                changed = true;
                continue;
            }
            if (row.terms.size() == 1) {
                const Term& term = row.terms[0];
                double a = term.coef;
                double blo = a > 0 ? row_lo / a : (row_up == kInf ? -kInf : row_up / a);
                double bhi = a > 0 ? (row_up == kInf ? kInf : row_up / a)
                                   : (row_lo == -kInf ? kInf : row_lo / a);
                if (blo > w.lb[term.var] + ftol) {
                    w.lb[term.var] = blo;
                    changed = true;
                }
                if (bhi < w.ub[term.var] - ftol) {
                    w.ub[term.var] = bhi;
                    changed = true;
                }
                round_integer_bounds(ms, w, term.var);
                w.row_alive[ri] = 0;
                continue;
            }
            // implied bounds from residual activity
            for (const Term& term : row.terms) {
                double a = term.coef;
                double lo = w.lb[term.var], hi = w.ub[term.var];
                double self_lo = a > 0 ? a * lo : (hi == kInf ? -kInf : a * hi);
                double self_hi = a > 0 ? (hi == kInf ? kInf : a * hi) : a * lo;
                double rest_lo =
                    (act_lo == -kInf || self_lo == -kInf) ? -kInf : act_lo - self_lo;
                double rest_hi = (act_hi == kInf || self_hi == kInf) ? kInf : act_hi - self_hi;
                if (row_up < kInf && rest_lo > -kInf) {
                    double cap = (row.rhs - rest_lo) / a;
                    if (a > 0 && cap < w.ub[term.var] - ftol) {
                        w.ub[term.var] = cap;
                        round_integer_bounds(ms, w, term.var);
                        changed = true;
                    } else if (a < 0 && cap > w.lb[term.var] + ftol) {
                        w.lb[term.var] = cap;
                        round_integer_bounds(ms, w, term.var);
                        changed = true;
                    }
                }
                if (row_lo > -kInf && rest_hi < kInf) {
                    double cap = (row_lo - rest_hi) / a;
                    if (a > 0 && cap > w.lb[term.var] + ftol) {
                        w.lb[term.var] = cap;
                        round_integer_bounds(ms, w, term.var);
                        changed = true;
                    } else if (a < 0 && cap < w.ub[term.var] - ftol) {
                        w.ub[term.var] = cap;
                        round_integer_bounds(ms, w, term.var);
                        changed = true;
                    }
                }
            }
        }
        for (int j = 0; j < n; ++j) {
            if (w.fixed[j]) continue;
            if (w.ub[j] - w.lb[j] <= 1e-9) {
                double v = w.lb[j];
                if (is_int_kind(ms.vars[j].kind)) v = std::round(v);
                w.lb[j] = w.ub[j] = v;
                w.fixed[j] = 1;
                changed = true;
            }
        }
    }
}

struct NodeBound {
    int var;
    bool is_upper;
    double value;
};

struct Node {
    double bound;
    long long id;
    std::vector<NodeBound> tight;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
        return a.id > b.id;
    }
};

MilpSolution solve_builtin(const ModelSpec& ms, const SolverConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    int n = ms.var_count();
    std::vector<double> base_lb(n), base_ub(n), cost(n, 0);
    for (int j = 0; j < n; ++j) {
        base_lb[j] = ms.vars[j].lb;
        base_ub[j] = ms.vars[j].ub;
    }
    for (const Term& term : ms.objective) cost[term.var] += term.coef;

    MilpSolution best;
    best.status = SolveStatus::Infeasible;
    best.best_bound = -kInf;
    bool have_incumbent = false;
    double incumbent = kInf;

    std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
    queue.push(Node{-kInf, 0, {}});
    long long next_id = 1;
    long long nodes = 0;
    double global_bound = -kInf;
    bool hit_limit = false;

    auto gap_closed = [&](double bound) {
        if (!have_incumbent) return false;
        double margin = 1e-7 * (1.0 + std::abs(incumbent));
        if (bound >= incumbent - cfg.abs_gap + margin) return true;
        double rel = std::abs(incumbent - bound) / (1e-10 + std::abs(incumbent));
        return rel <= cfg.rel_gap;
    };

    bool plunging = false;
    Node node{-kInf, 0, {}};
    while (true) {
        if (!plunging) {
            if (queue.empty()) break;
            node = queue.top();
            queue.pop();
            if (node.bound > -kInf) global_bound = std::max(global_bound, node.bound);
            if (gap_closed(node.bound)) {
                global_bound = incumbent;  // everything left is within the gap
                break;
            }
        }
        plunging = false;
        if (cfg.time_limit_seconds > 0 && elapsed() > cfg.time_limit_seconds) {
            hit_limit = true;
            break;
        }
        if (cfg.node_limit > 0 && nodes >= cfg.node_limit) {
            hit_limit = true;
            break;
        }
        ++nodes;

        Working w;
        w.lb = base_lb;
        w.ub = base_ub;
        w.fixed.assign(n, 0);
        w.rows = ms.rows;
        w.row_alive.assign(ms.rows.size(), 1);
        for (const NodeBound& nb : node.tight) {
            if (nb.is_upper)
                w.ub[nb.var] = std::min(w.ub[nb.var], nb.value);
            else
                w.lb[nb.var] = std::max(w.lb[nb.var], nb.value);
        }
        presolve(ms, w);
        if (w.infeasible) continue;

        // reduced LP over the surviving variables
        std::vector<int> back;
        std::vector<int> map(n, -1);
        for (int j = 0; j < n; ++j)
            if (!w.fixed[j]) {
                map[j] = static_cast<int>(back.size());
                back.push_back(j);
            }
        lp::LpProblem prob;
        prob.n = static_cast<int>(back.size());
        prob.c.resize(prob.n);
        prob.lb.resize(prob.n);
        prob.ub.resize(prob.n);
        double shift = 0;
        for (int j = 0; j < n; ++j)
            if (w.fixed[j]) shift += cost[j] * w.lb[j];
        for (int k = 0; k < prob.n; ++k) {
            prob.c[k] = cost[back[k]];
            prob.lb[k] = w.lb[back[k]];
            prob.ub[k] = w.ub[back[k]];
        }
        for (size_t ri = 0; ri < w.rows.size(); ++ri) {
            if (!w.row_alive[ri]) continue;
            LinearRow row = w.rows[ri];
            for (Term& term : row.terms) term.var = map[term.var];
            prob.rows.push_back(std::move(row));
        }

        lp::LpResult lpres = lp::solve_lp(prob);
        if (lpres.status == lp::LpStatus::Infeasible) continue;
        if (lpres.status == lp::LpStatus::IterationLimit)
            throw SolverError("simplex iteration limit reached");
        if (lpres.status == lp::LpStatus::Unbounded) {
            best.status = SolveStatus::Unbounded;
            best.wall_time_seconds = elapsed();
            best.nodes = nodes;
            return best;
        }
        double bound = lpres.objective + shift;
        if (gap_closed(bound)) continue;

        std::vector<double> x(n);
        for (int j = 0; j < n; ++j) x[j] = w.fixed[j] ? w.lb[j] : 0;
        for (int k = 0; k < prob.n; ++k) x[back[k]] = lpres.x[k];

        // branch on the most fractional variable within the structurally most
        // decisive role tier: assignment and use binaries drive everything,
        // the value-encoding bits follow, and the wide-range lambda integers
        // resolve last
        int branch_var = -1;
        double branch_score = -1;
        int branch_tier = 4;
        for (int j = 0; j < n; ++j) {
            if (!is_int_kind(ms.vars[j].kind)) continue;
            double frac = x[j] - std::floor(x[j]);
            double dist = std::min(frac, 1 - frac);
            if (dist <= kIntTol) continue;
            int tier;
            switch (ms.info[j].role) {
                case VarRole::AssignV:
                case VarRole::UseU:
                case VarRole::Eta:
                    tier = 0;
                    break;
                case VarRole::OverlapPi:
                case VarRole::OverlapTau:
                    tier = 1;
                    break;
                case VarRole::Theta:
                case VarRole::Zeta:
                    tier = 2;
                    break;
                default:
                    tier = 3;
                    break;
            }
            if (tier < branch_tier || (tier == branch_tier && dist > branch_score + 1e-12)) {
                branch_tier = tier;
                branch_score = dist;
                branch_var = j;
            }
        }
        if (branch_var < 0) {
            for (int j = 0; j < n; ++j)
                if (is_int_kind(ms.vars[j].kind)) x[j] = std::round(x[j]);
            double value = 0;
            for (int j = 0; j < n; ++j) value += cost[j] * x[j];
            if (!have_incumbent || value < incumbent) {
                have_incumbent = true;
                incumbent = value;
                best.assignment = x;
            }
            continue;
        }
        Node down{bound, next_id++, node.tight};
        down.tight.push_back(NodeBound{branch_var, true, std::floor(x[branch_var])});
        Node up{bound, next_id++, node.tight};
        up.tight.push_back(NodeBound{branch_var, false, std::ceil(x[branch_var])});
        // dive into the child on the rounded side; the sibling goes to the queue
        bool go_up = x[branch_var] - std::floor(x[branch_var]) >= 0.5;
        queue.push(go_up ? std::move(down) : std::move(up));
        node = go_up ? std::move(up) : std::move(down);
        plunging = true;
    }

    best.wall_time_seconds = elapsed();
    best.nodes = nodes;
    if (!have_incumbent) {
        best.status = hit_limit ? SolveStatus::Limit : SolveStatus::Infeasible;
        return best;
    }
    best.objective = ms.evaluate_objective(best.assignment);
    if (hit_limit) {
        best.status = SolveStatus::Limit;
        best.best_bound = global_bound == -kInf ? -kInf : global_bound;
    } else {
        best.status = SolveStatus::Optimal;
        best.best_bound = incumbent;
    }
    return best;
}

std::string format_number(double v) {
    if (std::abs(v - std::round(v)) < 1e-9 && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(std::llround(v)));
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::atomic<unsigned> temp_counter{0};

std::filesystem::path temp_path(const char* suffix) {
    auto dir = std::filesystem::temp_directory_path();
    unsigned id = temp_counter.fetch_add(1);
    std::ostringstream name;
    name << "cutplan_" << ::getpid() << "_" << id << suffix;
    return dir / name.str();
}

MilpSolution solve_external(const ModelSpec& ms, const SolverConfig& cfg) {
    if (cfg.command_template.empty())
        throw SolverError("external backend requires a command template");
    auto start = std::chrono::steady_clock::now();
    auto lp_path = temp_path(".lp");
    auto sol_path = temp_path(".sol");
    {
        std::ofstream out(lp_path);
        out << export_lp(ms);
    }
    std::string cmd = cfg.command_template;
    auto replace_all = [&](const std::string& key, const std::string& value) {
        size_t pos = 0;
        while ((pos = cmd.find(key, pos)) != std::string::npos) {
            cmd.replace(pos, key.size(), value);
            pos += value.size();
        }
    };
    replace_all("{lp}", lp_path.string());
    replace_all("{sol}", sol_path.string());
    int rc = std::system(cmd.c_str());
    if (rc != 0) {
        std::filesystem::remove(lp_path);
        throw SolverError("external solver command failed with status " + std::to_string(rc));
    }
    std::ifstream in(sol_path);
    if (!in) throw SolverError("external solver produced no solution file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    MilpSolution sol = import_solution(buffer.str(), ms);
    sol.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::filesystem::remove(lp_path);
    std::filesystem::remove(sol_path);
    return sol;
}

}  // namespace

MilpSolution solve(const ModelSpec& ms, const SolverConfig& cfg) {
    for (const LinearRow& row : ms.rows)
        for (const Term& term : row.terms)
            if (term.var < 0 || term.var >= ms.var_count())
                throw SolverError("row references an undeclared variable");
    if (cfg.backend == SolverBackend::External) return solve_external(ms, cfg);
    return solve_builtin(ms, cfg);
}

std::string export_lp(const ModelSpec& ms) {
    std::ostringstream out;
    out << "\\ generated by cutplan\n";
    out << "Minimize\n obj:";
    if (ms.objective_constant != 0) out << " + " << format_number(ms.objective_constant);
    for (const Term& term : ms.objective) {
        out << (term.coef < 0 ? " - " : " + ") << format_number(std::abs(term.coef)) << " "
            << ms.vars[term.var].name;
    }
    out << "\nSubject To\n";
    for (size_t ri = 0; ri < ms.rows.size(); ++ri) {
        const LinearRow& row = ms.rows[ri];
        out << " r" << ri << ":";
        if (row.terms.empty()) out << " 0 " << ms.vars[0].name;
        for (const Term& term : row.terms)
            out << (term.coef < 0 ? " - " : " + ") << format_number(std::abs(term.coef)) << " "
                << ms.vars[term.var].name;
        switch (row.sense) {
            case RowSense::Le: out << " <= "; break;
            case RowSense::Eq: out << " = "; break;
            case RowSense::Ge: out << " >= "; break;
        }
        out << format_number(row.rhs) << "\n";
    }
    out << "Bounds\n";
    for (const VariableDef& var : ms.vars) {
        if (var.kind == VarKind::Binary) continue;
        if (var.lb == var.ub) {
            out << " " << var.name << " = " << format_number(var.lb) << "\n";
        } else if (var.ub == kInf) {
            out << " " << var.name << " >= " << format_number(var.lb) << "\n";
        } else {
            out << " " << format_number(var.lb) << " <= " << var.name << " <= "
                << format_number(var.ub) << "\n";
        }
    }
    bool any_bin = false, any_int = false;
    for (const VariableDef& var : ms.vars) {
        any_bin |= var.kind == VarKind::Binary;
        any_int |= var.kind == VarKind::Integer;
    }
    if (any_bin) {
        out << "Binaries\n";
        for (const VariableDef& var : ms.vars)
            if (var.kind == VarKind::Binary) out << " " << var.name << "\n";
    }
    if (any_int) {
        out << "Generals\n";
        for (const VariableDef& var : ms.vars)
            if (var.kind == VarKind::Integer) out << " " << var.name << "\n";
    }
    out << "End\n";
    return out.str();
}

MilpSolution import_solution(const std::string& text, const ModelSpec& ms) {
    std::map<std::string, int> index;
    for (int j = 0; j < ms.var_count(); ++j) index[ms.vars[j].name] = j;

    MilpSolution sol;
    sol.status = SolveStatus::Feasible;
    sol.assignment.assign(ms.var_count(), 0.0);
    bool have_header_objective = false;
    double header_objective = 0;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "#") {
            std::string key;
            if (!(ls >> key)) continue;
            if (key == "objective") {
                ls >> header_objective;
                have_header_objective = true;
            } else if (key == "status") {
                std::string status;
                ls >> status;
                if (status == "optimal")
                    sol.status = SolveStatus::Optimal;
                else if (status == "infeasible")
                    sol.status = SolveStatus::Infeasible;
                else if (status == "unbounded")
                    sol.status = SolveStatus::Unbounded;
                else if (status == "limit")
                    sol.status = SolveStatus::Limit;
            }
            continue;
        }
        auto it = index.find(first);
        if (it == index.end())
            throw SolverError("solution line " + std::to_string(line_no) +
                              ": unknown variable '" + first + "'");
        double value = 0;
        if (!(ls >> value))
            throw SolverError("solution line " + std::to_string(line_no) + ": missing value");
        if (ms.vars[it->second].kind == VarKind::Binary) {
            double snapped = value < 0.5 ? 0.0 : 1.0;
            if (std::abs(value - snapped) > 1e-4)
                throw SolverError("solution line " + std::to_string(line_no) + ": binary '" +
                                  first + "' has non-binary value " + std::to_string(value));
            value = snapped;
        }
        sol.assignment[it->second] = value;
    }
    if (sol.status == SolveStatus::Infeasible) {
        sol.assignment.clear();
        return sol;
    }
    sol.objective = ms.evaluate_objective(sol.assignment);
    sol.best_bound = have_header_objective ? header_objective : sol.objective;
    return sol;
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::Limit: return "limit";
    }
    return "unknown";
}

}  // namespace cutplan
