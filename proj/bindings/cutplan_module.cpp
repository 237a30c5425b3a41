#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cutplan/harness.hpp"
#include "cutplan/matheuristic.hpp"
#include "cutplan/model.hpp"
#include "cutplan/oracle.hpp"
#include "cutplan/solver.hpp"

namespace py = pybind11;
using namespace cutplan;

namespace {

SolverConfig make_solver_config(const std::string& backend, const std::string& command,
                                double time_limit) {
    SolverConfig cfg;
    if (backend == "external") {
        cfg.backend = SolverBackend::External;
        cfg.command_template = command;
    } else if (backend != "builtin") {
        throw std::invalid_argument("backend must be 'builtin' or 'external'");
    }
    cfg.time_limit_seconds = time_limit;
    return cfg;
}

py::dict plan_summary(const Plan& plan) {
    py::dict d;
    d["cost"] = plan.purchased_cost;
    d["leftover_value"] = plan.final_leftover_value;
    d["objective"] = plan.objective;
    return d;
}

}  // namespace

PYBIND11_MODULE(_cutplan, m) {
    m.doc() = "multi-period two-dimensional cutting planner with usable leftovers";

    py::class_<PurchasableObject>(m, "PurchasableObject")
        .def(py::init<>())
        .def_readwrite("width", &PurchasableObject::width)
        .def_readwrite("height", &PurchasableObject::height)
        .def_readwrite("unit_cost", &PurchasableObject::unit_cost)
        .def("__repr__", [](const PurchasableObject& o) {
            std::ostringstream s;
            s << "PurchasableObject(" << o.width << "x" << o.height << ", c=" << o.unit_cost
              << ")";
            return s.str();
        });

    py::class_<OrderedItem>(m, "OrderedItem")
        .def(py::init<>())
        .def_readwrite("width", &OrderedItem::width)
        .def_readwrite("height", &OrderedItem::height);

    py::class_<CatalogueItem>(m, "CatalogueItem")
        .def(py::init<>())
        .def_readwrite("width", &CatalogueItem::width)
        .def_readwrite("height", &CatalogueItem::height);

    py::class_<Instance>(m, "Instance")
        .def(py::init<>())
        .def_readwrite("first_instant", &Instance::first_instant)
        .def_readwrite("last_instant", &Instance::last_instant)
        .def_readwrite("xi", &Instance::xi)
        .def_readwrite("purchasable", &Instance::purchasable)
        .def_readwrite("orders", &Instance::orders)
        .def_readwrite("catalogue", &Instance::catalogue)
        .def("periods", &Instance::periods)
        .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; })
        .def("__repr__", [](const Instance& inst) {
            std::ostringstream s;
            s << "Instance(p=" << inst.first_instant << ", P=" << inst.last_instant
              << ", xi=" << inst.xi << ")";
            return s.str();
        });

    py::class_<Plan>(m, "Plan")
        .def_readonly("purchased_cost", &Plan::purchased_cost)
        .def_readonly("final_leftover_value", &Plan::final_leftover_value)
        .def_readonly("objective", &Plan::objective)
        .def("summary", &plan_summary)
        .def("serialize", &serialize_plan);

    py::class_<Violation>(m, "Violation")
        .def_readonly("instant", &Violation::instant)
        .def_readonly("detail", &Violation::detail)
        .def_property_readonly("kind",
                               [](const Violation& v) { return std::string(to_string(v.kind)); })
        .def("__repr__", [](const Violation& v) {
            return std::string(to_string(v.kind)) + ": " + v.detail;
        });

    m.def("parse_instance", &parse_instance, py::arg("text"));
    m.def("serialize_instance", &serialize_instance, py::arg("instance"));
    m.def(
        "generate_instance",
        [](int periods, std::uint64_t seed, std::optional<int> xi) {
            GenConfig cfg;
            cfg.periods = periods;
            cfg.seed = seed;
            cfg.xi = xi;
            return generate_instance(cfg);
        },
        py::arg("periods") = 4, py::arg("seed") = 0, py::arg("xi") = std::nullopt);
    m.def(
        "validate_instance",
        [](const Instance& inst) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& issue : validate_instance(inst))
                out.push_back({issue.severity == Severity::Error ? "error" : "warning",
                               issue.message});
            return out;
        },
        py::arg("instance"));

    m.def(
        "run_myopic",
        [](const Instance& inst, const std::string& backend, const std::string& command,
           double time_limit) {
            RollResult res = run_myopic(inst, make_solver_config(backend, command, time_limit));
            if (!res.feasible)
                throw std::runtime_error("infeasible at instant " +
                                         std::to_string(res.failed_instant));
            return res.plan;
        },
        py::arg("instance"), py::arg("backend") = "builtin", py::arg("command") = "",
        py::arg("time_limit") = 0.0);

    m.def(
        "run_forward_looking",
        [](const Instance& inst, double delta_ini, double sigma, double eps,
           const std::string& backend, const std::string& command, double time_limit) {
            TrainingConfig tcfg;
            tcfg.delta_ini = delta_ini;
            tcfg.sigma = sigma;
            tcfg.eps = eps;
            TrainingResult res = run_forward_looking(
                inst, tcfg, make_solver_config(backend, command, time_limit));
            if (!res.feasible)
                throw std::runtime_error("infeasible at instant " +
                                         std::to_string(res.failed_instant));
            py::dict d;
            d["plan"] = res.best_plan;
            d["cycles"] = res.trace.cycles.size();
            d["best_cycle"] = res.best_cycle;
            d["trace_csv"] = res.trace.to_csv();
            return d;
        },
        py::arg("instance"), py::arg("delta_ini") = 0.9, py::arg("sigma") = 0.9,
        py::arg("eps") = 0.01, py::arg("backend") = "builtin", py::arg("command") = "",
        py::arg("time_limit") = 0.0);

    m.def(
        "exact_plan",
        [](const Instance& inst) {
            auto plan = exact_multi_period(inst, OracleLimits{});
            if (!plan) throw std::runtime_error("instance is infeasible");
            return *plan;
        },
        py::arg("instance"), "exhaustive optimum over integer coordinates (desk scale)");

    m.def(
        "solve_full_model",
        [](const Instance& inst, const std::string& backend, const std::string& command,
           double time_limit) {
            ModelSpec ms = build_full_model(inst);
            MilpSolution sol = solve(ms, make_solver_config(backend, command, time_limit));
            py::dict d;
            d["status"] = std::string(to_string(sol.status));
            d["objective"] = sol.objective;
            d["nodes"] = sol.nodes;
            d["binaries"] = ms.binary_count();
            d["continuous"] = ms.continuous_count();
            if (sol.status == SolveStatus::Optimal) {
                double scale = static_cast<double>(ms.scale_constant);
                auto cost = static_cast<std::int64_t>(std::ceil(sol.objective / scale - 1e-9));
                d["cost"] = cost;
                d["leftover_value"] = static_cast<double>(cost) * scale - sol.objective;
            }
            return d;
        },
        py::arg("instance"), py::arg("backend") = "builtin", py::arg("command") = "",
        py::arg("time_limit") = 0.0);

    m.def(
        "export_full_model_lp",
        [](const Instance& inst) { return export_lp(build_full_model(inst)); },
        py::arg("instance"));

    m.def("validate_plan", &validate_plan, py::arg("instance"), py::arg("plan"));
    m.def("parse_plan", &parse_plan, py::arg("text"), py::arg("instance"));
    m.def("gap_percent", &gap_percent, py::arg("objective_a"), py::arg("objective_b"));
    m.def(
        "classify",
        [](std::int64_t cost_a, double left_a, std::int64_t cost_b, double left_b) {
            return std::string(to_string(classify(cost_a, left_a, cost_b, left_b)));
        },
        py::arg("cost_a"), py::arg("leftovers_a"), py::arg("cost_b"), py::arg("leftovers_b"));
    m.def(
        "amortized_cost",
        [](std::int64_t unit_cost, std::int64_t width, std::int64_t height, bool used,
           double delta_top, double gamma_top, double delta_right, double gamma_right) {
            return amortized_cost(unit_cost, width, height, used, delta_top, gamma_top,
                                  delta_right, gamma_right);
        },
        py::arg("unit_cost"), py::arg("width"), py::arg("height"), py::arg("used"),
        py::arg("delta_top"), py::arg("gamma_top"), py::arg("delta_right"),
        py::arg("gamma_right"));
}
