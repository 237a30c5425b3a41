#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cutplan/genealogy.hpp"
#include "cutplan/instance.hpp"
#include "cutplan/model.hpp"

namespace cutplan {

enum class ViolationKind {
    Overlap,
    OutOfCuttingArea,
    BadLeftoverGeometry,
    UnassignedItem,
    DoubleAssignment,
    ExpiredObjectUsed,
    ValueMismatch,
};

struct Violation {
    ViolationKind kind;
    int instant = -1;
    int index_a = -1;
    int index_b = -1;
    std::string detail;
};

const char* to_string(ViolationKind kind);

// Empty result iff the plan satisfies every constraint family within 1e-6.
std::vector<Violation> validate_plan(const Instance& inst, const Plan& plan);

// Hard caps on instance data; the exhaustive search is hopeless beyond desk scale.
struct OracleLimits {
    int max_periods = 3;
    int max_items = 6;        // per instant
    int max_objects = 6;      // purchasable per instant
    std::int64_t max_dim = 30;
};

class OracleLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SinglePeriodResult {
    bool feasible = false;
    PeriodDecision decision;
    double objective = 0;  // value of the single-period objective at the optimum
};

// Exhaustive optimum of the single-period problem over integer coordinates.
SinglePeriodResult exact_single_period(const SubproblemState& st, const OracleLimits& limits);

// Exhaustive optimum of the multi-period problem; nullopt when infeasible.
std::optional<Plan> exact_multi_period(const Instance& inst, const OracleLimits& limits);

}  // namespace cutplan
