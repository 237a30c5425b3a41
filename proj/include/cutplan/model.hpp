#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cutplan/genealogy.hpp"
#include "cutplan/instance.hpp"

namespace cutplan {

enum class VarKind { Binary, Integer, Continuous };
enum class RowSense { Le, Eq, Ge };

struct Term {
    int var = -1;
    double coef = 0;
};

struct LinearRow {
    std::vector<Term> terms;
    RowSense sense = RowSense::Le;
    double rhs = 0;
};

enum class VarRole {
    AssignV,
    UseU,
    Eta,
    PrecutT,
    PrecutR,
    Width,
    Height,
    PosX,
    PosY,
    OverlapPi,
    OverlapTau,
    Gamma,
    Theta,
    Omega,
    Zeta,
    Lambda,
    Other,
};

struct VarInfo {
    VarRole role = VarRole::Other;
    int s = -1;  // instant
    int i = -1;  // item / catalogue index
    int j = -1;  // object slot
    int l = -1;  // bit index
};

struct VariableDef {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lb = 0;
    double ub = 0;
};

// Solver-agnostic MILP: minimize objective subject to linear rows and bounds.
struct ModelSpec {
    std::vector<VariableDef> vars;
    std::vector<VarInfo> info;  // parallel to vars
    std::vector<LinearRow> rows;
    std::vector<Term> objective;
    double objective_constant = 0;

    // metadata
    std::int64_t scale_constant = 0;  // C (full model) or C_kappa (subproblems)
    std::int64_t w_hat = 0;           // big-M widths
    std::int64_t h_hat = 0;
    int bit_count = 0;                // L

    int add_var(std::string name, VarKind kind, double lb, double ub, VarInfo vi);
    void add_row(std::vector<Term> terms, RowSense sense, double rhs);

    int var_count() const { return static_cast<int>(vars.size()); }
    int row_count() const { return static_cast<int>(rows.size()); }
    int binary_count() const;
    int integer_count() const;
    int continuous_count() const;
    int find_var(VarRole role, int s, int i, int j, int l) const;  // -1 if absent
    double evaluate_objective(const std::vector<double>& assignment) const;
};

class ModelBuildError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

ModelSpec build_full_model(const Instance& inst);

struct SubproblemState {
    int instant = 0;  // kappa
    ObjectPool pool;
    std::vector<OrderedItem> orders;
    std::vector<CatalogueItem> catalogue;
    std::int64_t cumulative_cost = 0;  // C_kappa
};

SubproblemState make_subproblem_state(const Instance& inst, int kappa, const ObjectPool& pool);

ModelSpec build_myopic_subproblem(const SubproblemState& st);
// delta holds utilization estimates for the first-order leftovers of the
// purchasable objects at the state's instant: delta[2j] for the top leftover
// of purchasable j, delta[2j+1] for the right-hand-side one.
ModelSpec build_flook_subproblem(const SubproblemState& st, const std::vector<double>& delta);

std::int64_t amortized_cost(std::int64_t unit_cost, std::int64_t width, std::int64_t height,
                            bool used, double delta_top, double gamma_top, double delta_right,
                            double gamma_right);

// Extracts a PeriodDecision from a variable assignment of a subproblem model.
PeriodDecision decode_decision(const ModelSpec& ms, const std::vector<double>& assignment,
                               const ObjectPool& pool, int item_count);

std::string pretty_print(const ModelSpec& ms);

}  // namespace cutplan
