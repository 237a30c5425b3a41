#include <doctest.h>

#include <set>

#include "cutplan/model.hpp"
#include "cutplan/solver.hpp"
#include "fixtures.hpp"

using namespace cutplan;

TEST_CASE("amortized cost") {
    CHECK(amortized_cost(1, 21, 17, true, 1.0, 126, 1.0, 0) == 231);
    CHECK(amortized_cost(1, 19, 19, true, 1.0, 152, 1.0, 0) == 209);
    CHECK(amortized_cost(1, 24, 13, true, 1.0, 0, 1.0, 0) == 312);
    CHECK(amortized_cost(1, 19, 19, true, 102.0 / 152.0, 152, 1.0, 0) == 259);
    CHECK(amortized_cost(1, 21, 17, true, 314.0 / 357.0, 126, 0.0, 0) == 247);
    CHECK(amortized_cost(1, 24, 13, false, 0.5, 0, 0.5, 0) == 0);
}

TEST_CASE("full model metadata and plan arithmetic") {
    Instance inst = fixtures::toy_a();
    ModelSpec ms = build_full_model(inst);
    CHECK(ms.scale_constant == 348);
    CHECK(ms.w_hat == 10);
    CHECK(ms.h_hat == 8);
    CHECK(ms.bit_count == 4);  // floor(log2(10)) + 1

    Plan cheap = assemble_plan(inst, fixtures::toy_a_cheap_decisions());
    CHECK(cheap.purchased_cost == 80);
    CHECK(cheap.final_leftover_value == 9);
    CHECK(cheap.objective == 348 * 80 - 9);  // 27,831

    Plan greedy = assemble_plan(inst, fixtures::toy_a_greedy_decisions());
    CHECK(greedy.purchased_cost == 108);
    CHECK(greedy.final_leftover_value == 27);
    CHECK(greedy.objective == 348 * 108 - 27);  // 37,557
}

TEST_CASE("full model size diagnostic for the published instance") {
    Instance inst = fixtures::published_instance_1();
    REQUIRE(inst.xi == 1);
    ModelSpec ms = build_full_model(inst);
    // counting convention: binaries are v, u (all slots), eta, pi, tau,
    // theta, zeta; continuous are t, r, all slot widths/heights (purchasable
    // ones fixed through equal bounds), x, y, gamma, omega
    CHECK(ms.binary_count() == 369);
    CHECK(ms.continuous_count() == 150);
    CHECK(ms.w_hat == 95);
    CHECK(ms.h_hat == 100);
    CHECK(ms.bit_count == 7);
}

TEST_CASE("every referenced variable is declared and names are unique") {
    Instance inst = fixtures::toy_a();
    ModelSpec ms = build_full_model(inst);
    std::set<std::string> names;
    for (const auto& var : ms.vars) names.insert(var.name);
    CHECK(names.size() == static_cast<size_t>(ms.var_count()));
    for (const auto& row : ms.rows)
        for (const auto& term : row.terms) {
            CHECK(term.var >= 0);
            CHECK(term.var < ms.var_count());
        }
    for (const auto& term : ms.objective) CHECK(term.var < ms.var_count());
}

TEST_CASE("bit expansion reproduces every feasible width") {
    Instance inst = fixtures::toy_a();
    ModelSpec ms = build_full_model(inst);
    for (std::int64_t width = 0; width <= ms.w_hat; ++width) {
        std::int64_t rebuilt = 0;
        for (int l = 0; l < ms.bit_count; ++l)
            if (width & (std::int64_t{1} << l)) rebuilt += std::int64_t{1} << l;
        CHECK(rebuilt == width);
    }
    CHECK((std::int64_t{1} << ms.bit_count) > ms.w_hat);
}

TEST_CASE("myopic subproblem on the optimistic toy buys the cheapest object") {
    Instance inst = fixtures::toy_b();
    SubproblemState st = make_subproblem_state(inst, 0, initial_pool(inst));
    CHECK(st.cumulative_cost == 1030);
    ModelSpec ms = build_myopic_subproblem(st);
    MilpSolution sol = solve(ms, SolverConfig{});
    REQUIRE(sol.status == SolveStatus::Optimal);
    PeriodDecision dec = decode_decision(ms, sol.assignment, st.pool, 1);
    CHECK(dec.objects[2].used);  // the 24x13 object, cost 312
    CHECK(sol.objective == doctest::Approx(1030.0 * 312).epsilon(1e-9));
}

TEST_CASE("optimistic amortization prefers the larger object") {
    Instance inst = fixtures::toy_b();
    SubproblemState st = make_subproblem_state(inst, 0, initial_pool(inst));
    std::vector<double> delta(2 * 3, 1.0);
    ModelSpec ms = build_flook_subproblem(st, delta);
    MilpSolution sol = solve(ms, SolverConfig{});
    REQUIRE(sol.status == SolveStatus::Optimal);
    PeriodDecision dec = decode_decision(ms, sol.assignment, st.pool, 1);
    CHECK(dec.objects[1].used);  // 19x19: amortized cost 209 beats 231 and 312
    // C * (361 - 152) minus the tie-break value of the 19x8 leftover
    CHECK(sol.objective == doctest::Approx(1030.0 * 209 - 152).epsilon(1e-9));
}

TEST_CASE("zero estimates disable the amortization") {
    Instance inst = fixtures::toy_a();
    SubproblemState st = make_subproblem_state(inst, 0, initial_pool(inst));
    ModelSpec myopic = build_myopic_subproblem(st);
    ModelSpec flook = build_flook_subproblem(st, std::vector<double>(4, 0.0));
    MilpSolution a = solve(myopic, SolverConfig{});
    MilpSolution b = solve(flook, SolverConfig{});
    REQUIRE(a.status == SolveStatus::Optimal);
    REQUIRE(b.status == SolveStatus::Optimal);
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}

TEST_CASE("empty order set solves to zero on a fresh pool") {
    Instance inst = fixtures::toy_a();
    SubproblemState st = make_subproblem_state(inst, 0, initial_pool(inst));
    st.orders.clear();
    ModelSpec ms = build_myopic_subproblem(st);
    MilpSolution sol = solve(ms, SolverConfig{});
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(0.0));
}

TEST_CASE("builder rejects bad inputs") {
    Instance inst = fixtures::toy_a();
    SubproblemState st = make_subproblem_state(inst, 0, initial_pool(inst));
    CHECK_THROWS_AS(build_flook_subproblem(st, std::vector<double>(4, 1.5)), ModelBuildError);
    CHECK_THROWS_AS(build_flook_subproblem(st, std::vector<double>(3, 0.5)), ModelBuildError);

    Instance huge = inst;
    for (auto& objs : huge.purchasable)
        for (auto& obj : objs) obj.unit_cost = 2'000'000'000LL;
    CHECK_THROWS_AS(build_full_model(huge), ModelBuildError);
}

TEST_CASE("pretty printer uses the paper symbols") {
    Instance inst = fixtures::toy_a();
    SubproblemState st = make_subproblem_state(inst, 0, initial_pool(inst));
    std::string text = pretty_print(build_myopic_subproblem(st));
    CHECK(text.find("v[0,0,0]") != std::string::npos);
    CHECK(text.find("gamma[") != std::string::npos);
    CHECK(text.find("minimize") != std::string::npos);
}
