#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cutplan/harness.hpp"
#include "cutplan/matheuristic.hpp"
#include "cutplan/oracle.hpp"
#include "cutplan/solver.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

cutplan::Instance load_instance(const std::string& path, int xi_override) {
    cutplan::Instance inst = cutplan::parse_instance(read_file(path));
    if (xi_override >= 0) {
        if (xi_override > inst.periods())
            throw std::runtime_error("--xi out of range for this instance");
        inst.xi = xi_override;
    }
    return inst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-period two-dimensional cutting planner with usable leftovers"};
    app.require_subcommand(1);

    // shared options
    std::string out_path, plan_out, backend = "builtin", solver_cmd;
    double delta_ini = 0.9, sigma = 0.9, eps = 0.01, time_limit = 0;
    int xi = -1;
    bool dump_genealogy = false;

    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--backend", backend, "builtin or external");
        cmd->add_option("--solver-cmd", solver_cmd,
                        "external solver command with {lp} and {sol} placeholders");
        cmd->add_option("--time-limit", time_limit, "solver time limit in seconds");
    };
    auto solver_config = [&]() {
        cutplan::SolverConfig scfg;
        if (backend == "external") {
            scfg.backend = cutplan::SolverBackend::External;
            scfg.command_template = solver_cmd;
        } else if (backend != "builtin") {
            throw std::runtime_error("unknown backend '" + backend + "'");
        }
        scfg.time_limit_seconds = time_limit;
        return scfg;
    };

    // generate
    auto* gen = app.add_subcommand("generate", "generate a random instance");
    cutplan::GenConfig gcfg;
    std::uint64_t seed = 0;
    int gen_xi = -1;
    gen->add_option("--periods", gcfg.periods, "number of periods");
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--xi", gen_xi, "leftover validity (default: periods)");
    gen->add_option("--min-objects", gcfg.object_count.lo);
    gen->add_option("--max-objects", gcfg.object_count.hi);
    gen->add_option("--min-object-dim", gcfg.object_dim.lo);
    gen->add_option("--max-object-dim", gcfg.object_dim.hi);
    gen->add_option("--min-items", gcfg.item_count.lo);
    gen->add_option("--max-items", gcfg.item_count.hi);
    gen->add_option("--min-item-dim", gcfg.item_dim.lo);
    gen->add_option("--max-item-dim", gcfg.item_dim.hi);
    gen->add_option("--out", out_path, "output file (default stdout)");

    // validate
    auto* validate = app.add_subcommand("validate", "validate an instance file");
    std::string validate_path;
    validate->add_option("file", validate_path)->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
    std::string solve_path, method = "myopic", trace_path;
    solve_cmd->add_option("file", solve_path)->required();
    solve_cmd->add_option("--method", method, "myopic | flook | exact | oracle");
    solve_cmd->add_option("--delta-ini", delta_ini, "initial utilization estimate");
    solve_cmd->add_option("--sigma", sigma, "update damping");
    solve_cmd->add_option("--eps", eps, "stopping tolerance");
    solve_cmd->add_option("--xi", xi, "override the instance xi");
    solve_cmd->add_option("--out", out_path, "write a CSV result row");
    solve_cmd->add_option("--plan-out", plan_out, "write the plan to a file");
    solve_cmd->add_option("--trace", trace_path, "write the training trace CSV (flook)");
    solve_cmd->add_flag("--dump-genealogy", dump_genealogy, "print the pool genealogy");
    add_solver_flags(solve_cmd);

    // export-lp
    auto* export_cmd = app.add_subcommand("export-lp", "write a model in LP format");
    std::string export_path, export_model = "full";
    int export_instant = -1;
    export_cmd->add_option("file", export_path)->required();
    export_cmd->add_option("--model", export_model, "full | myopic | flook");
    export_cmd->add_option("--instant", export_instant,
                           "subproblem instant (myopic/flook; default first)");
    export_cmd->add_option("--delta-ini", delta_ini, "delta for the flook subproblem");
    export_cmd->add_option("--xi", xi, "override the instance xi");
    export_cmd->add_option("--out", out_path, "output file (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "validate a plan against an instance");
    std::string verify_inst, verify_plan;
    verify->add_option("file", verify_inst)->required();
    verify->add_option("plan", verify_plan)->required();
    verify->add_option("--xi", xi, "override the instance xi");

    // compare
    auto* compare = app.add_subcommand("compare", "run methods over instances");
    std::vector<std::string> compare_files;
    std::string methods_arg = "myopic,flook";
    int workers = 1;
    compare->add_option("files", compare_files)->required();
    compare->add_option("--methods", methods_arg, "comma-separated method list");
    compare->add_option("--delta-ini", delta_ini);
    compare->add_option("--sigma", sigma);
    compare->add_option("--eps", eps);
    compare->add_option("--xi", xi, "override xi for all instances");
    compare->add_option("--workers", workers, "parallel instances");
    compare->add_option("--out", out_path, "CSV output path");
    add_solver_flags(compare);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "parameter grid for the training loop");
    std::string sweep_path;
    double grid_step = 0.05;
    sweep->add_option("file", sweep_path)->required();
    sweep->add_option("--grid-step", grid_step);
    sweep->add_option("--eps", eps);
    sweep->add_option("--xi", xi, "override the instance xi");
    sweep->add_option("--out", out_path, "CSV output path");
    add_solver_flags(sweep);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            gcfg.seed = seed;
            if (gen_xi >= 0) gcfg.xi = gen_xi;
            std::string text = cutplan::serialize_instance(cutplan::generate_instance(gcfg));
            if (out_path.empty())
                std::cout << text;
            else
                write_file(out_path, text);
        } else if (validate->parsed()) {
            cutplan::Instance inst = cutplan::parse_instance(read_file(validate_path));
            auto issues = cutplan::validate_instance(inst);
            for (const auto& issue : issues)
                std::cout << (issue.severity == cutplan::Severity::Error ? "error: "
                                                                         : "warning: ")
                          << issue.message << "\n";
            bool bad = std::any_of(issues.begin(), issues.end(), [](const auto& issue) {
                return issue.severity == cutplan::Severity::Error;
            });
            std::cout << (bad ? "invalid" : "ok") << "\n";
            return bad ? 1 : 0;
        } else if (solve_cmd->parsed()) {
            cutplan::Instance inst = load_instance(solve_path, xi);
            cutplan::SolverConfig scfg = solver_config();
            cutplan::TrainingConfig tcfg;
            tcfg.delta_ini = delta_ini;
            tcfg.sigma = sigma;
            tcfg.eps = eps;
            cutplan::ExperimentConfig ecfg{{method}, tcfg, scfg, 1};
            cutplan::Plan plan;
            bool have_plan = false;
            if (method == "myopic") {
                auto res = cutplan::run_myopic(inst, scfg);
                if (!res.feasible) {
                    std::cout << "infeasible at instant " << res.failed_instant << "\n";
                    return 1;
                }
                plan = res.plan;
                have_plan = true;
            } else if (method == "flook") {
                auto res = cutplan::run_forward_looking(inst, tcfg, scfg);
                if (!res.feasible) {
                    std::cout << "infeasible at instant " << res.failed_instant << "\n";
                    return 1;
                }
                plan = res.best_plan;
                have_plan = true;
                std::cout << "cycles " << res.trace.cycles.size() << " best-cycle "
                          << res.best_cycle << "\n";
                if (!trace_path.empty()) write_file(trace_path, res.trace.to_csv());
            } else if (method == "oracle") {
                auto res = cutplan::exact_multi_period(inst, cutplan::OracleLimits{});
                if (!res) {
                    std::cout << "infeasible\n";
                    return 1;
                }
                plan = *res;
                have_plan = true;
            } else if (method == "exact") {
                cutplan::ModelSpec ms = cutplan::build_full_model(inst);
                cutplan::MilpSolution sol = cutplan::solve(ms, scfg);
                std::cout << "status " << cutplan::to_string(sol.status) << " objective "
                          << static_cast<long long>(sol.objective) << " nodes " << sol.nodes
                          << "\n";
                if (sol.status != cutplan::SolveStatus::Optimal) return 1;
                double scale = static_cast<double>(ms.scale_constant);
                long long cost =
                    static_cast<long long>(std::ceil(sol.objective / scale - 1e-9));
                std::cout << "cost " << cost << " leftover-value "
                          << static_cast<long long>(cost * scale - sol.objective) << "\n";
                return 0;
            } else {
                throw std::runtime_error("unknown method '" + method + "'");
            }
            if (have_plan) {
                std::cout << "cost " << plan.purchased_cost << " leftover-value "
                          << plan.final_leftover_value << " objective " << plan.objective
                          << "\n";
                auto violations = cutplan::validate_plan(inst, plan);
                for (const auto& violation : violations)
                    std::cout << "violation: " << cutplan::to_string(violation.kind) << " "
                              << violation.detail << "\n";
                if (!plan_out.empty()) write_file(plan_out, cutplan::serialize_plan(plan));
                if (dump_genealogy) std::cout << cutplan::dump_genealogy(plan.pools);
                if (!out_path.empty()) {
                    auto report = cutplan::run_experiment({{solve_path, inst}}, ecfg);
                    write_file(out_path, report.csv);
                }
            }
        } else if (export_cmd->parsed()) {
            cutplan::Instance inst = load_instance(export_path, xi);
            cutplan::ModelSpec ms;
            if (export_model == "full") {
                ms = cutplan::build_full_model(inst);
            } else {
                int kappa = export_instant < 0 ? inst.first_instant : export_instant;
                auto pool = cutplan::initial_pool(inst);
                if (kappa != inst.first_instant)
                    throw std::runtime_error(
                        "subproblem export is only available at the first instant");
                auto st = cutplan::make_subproblem_state(inst, kappa, pool);
                if (export_model == "myopic") {
                    ms = cutplan::build_myopic_subproblem(st);
                } else if (export_model == "flook") {
                    std::vector<double> delta(2 * pool.purchasable_count, delta_ini);
                    ms = cutplan::build_flook_subproblem(st, delta);
                } else {
                    throw std::runtime_error("unknown model '" + export_model + "'");
                }
            }
            std::string lp = cutplan::export_lp(ms);
            if (out_path.empty())
                std::cout << lp;
            else
                write_file(out_path, lp);
        } else if (verify->parsed()) {
            cutplan::Instance inst = load_instance(verify_inst, xi);
            cutplan::Plan plan = cutplan::parse_plan(read_file(verify_plan), inst);
            auto violations = cutplan::validate_plan(inst, plan);
            for (const auto& violation : violations)
                std::cout << cutplan::to_string(violation.kind) << " instant "
                          << violation.instant << ": " << violation.detail << "\n";
            std::cout << (violations.empty() ? "ok" : "invalid") << "\n";
            return violations.empty() ? 0 : 1;
        } else if (compare->parsed()) {
            std::vector<std::pair<std::string, cutplan::Instance>> instances;
            for (const std::string& file : compare_files)
                instances.push_back({file, load_instance(file, xi)});
            cutplan::ExperimentConfig ecfg;
            ecfg.methods.clear();
            std::stringstream ms(methods_arg);
            std::string method_name;
            while (std::getline(ms, method_name, ','))
                if (!method_name.empty()) ecfg.methods.push_back(method_name);
            ecfg.training.delta_ini = delta_ini;
            ecfg.training.sigma = sigma;
            ecfg.training.eps = eps;
            ecfg.solver = solver_config();
            ecfg.workers = workers;
            auto report = cutplan::run_experiment(instances, ecfg);
            std::cout << report.table;
            if (!out_path.empty()) write_file(out_path, report.csv);
        } else if (sweep->parsed()) {
            cutplan::Instance inst = load_instance(sweep_path, xi);
            cutplan::TrainingConfig tcfg;
            tcfg.eps = eps;
            auto points = cutplan::run_sweep(inst, tcfg, solver_config(), grid_step);
            std::string csv = cutplan::sweep_to_csv(points);
            if (out_path.empty())
                std::cout << csv;
            else
                write_file(out_path, csv);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
