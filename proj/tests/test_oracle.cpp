#include <doctest.h>

#include "cutplan/oracle.hpp"
#include "fixtures.hpp"

using namespace cutplan;

TEST_CASE("validator accepts the hand-built toy plans") {
    Instance inst = fixtures::toy_a();
    Plan cheap = assemble_plan(inst, fixtures::toy_a_cheap_decisions());
    CHECK(validate_plan(inst, cheap).empty());
    CHECK(cheap.final_leftover_value == 9);

    Plan greedy = assemble_plan(inst, fixtures::toy_a_greedy_decisions());
    CHECK(validate_plan(inst, greedy).empty());
}

TEST_CASE("validator flags overlap") {
    Instance inst = fixtures::toy_a();
    auto decisions = fixtures::toy_a_cheap_decisions();
    decisions[0].items[1] = decisions[0].items[0];  // same position as the 3x4
    Plan plan = assemble_plan(inst, decisions);
    auto violations = validate_plan(inst, plan);
    REQUIRE_FALSE(violations.empty());
    bool overlap = false;
    for (const auto& violation : violations) overlap |= violation.kind == ViolationKind::Overlap;
    CHECK(overlap);
}

TEST_CASE("validator flags an item inside the top leftover strip") {
    Instance inst = fixtures::toy_a();
    auto decisions = fixtures::toy_a_cheap_decisions();
    decisions[0].items[1].y += 5;  // pushes the 3x1 into the top leftover
    Plan plan = assemble_plan(inst, decisions);
    auto violations = validate_plan(inst, plan);
    REQUIRE_FALSE(violations.empty());
    CHECK(violations[0].kind == ViolationKind::OutOfCuttingArea);
}

TEST_CASE("validator flags tampered totals and pools") {
    Instance inst = fixtures::toy_a();
    Plan plan = assemble_plan(inst, fixtures::toy_a_cheap_decisions());
    plan.final_leftover_value += 5;
    auto violations = validate_plan(inst, plan);
    REQUIRE_FALSE(violations.empty());
    CHECK(violations[0].kind == ViolationKind::ValueMismatch);

    Plan inflated = assemble_plan(inst, fixtures::toy_a_cheap_decisions());
    inflated.pools.back().objects[6].width += 1;  // inflate the surviving 3x3
    violations = validate_plan(inst, inflated);
    REQUIRE_FALSE(violations.empty());
    CHECK(violations[0].kind == ViolationKind::ValueMismatch);
}

TEST_CASE("validator flags unassigned items and bad objects") {
    Instance inst = fixtures::toy_a();
    auto decisions = fixtures::toy_a_cheap_decisions();
    decisions[0].items[1].object = -1;
    Plan plan;
    plan.first_instant = inst.first_instant;
    plan.periods = decisions;
    auto violations = validate_plan(inst, plan);
    bool unassigned = false;
    for (const auto& violation : violations)
        unassigned |= violation.kind == ViolationKind::UnassignedItem;
    CHECK(unassigned);

    decisions = fixtures::toy_a_cheap_decisions();
    decisions[1].items[0].object = 4;  // a zero-dimension slot at instant 1
    plan.periods = decisions;
    violations = validate_plan(inst, plan);
    bool expired = false;
    for (const auto& violation : violations)
        expired |= violation.kind == ViolationKind::ExpiredObjectUsed;
    CHECK(expired);
}

TEST_CASE("single-period oracle on a single-object state") {
    // assigning the 19x11 item to the 19x19 object leaves only a usable
    // 19x8 top leftover worth 152
    SubproblemState st;
    st.instant = 0;
    st.pool.instant = 0;
    st.pool.purchasable_count = 1;
    st.pool.objects.push_back(ObjectState{19, 19, 1, 3, Origin::Purchasable, -1, {}});
    st.orders = {OrderedItem{19, 11}};
    st.catalogue = {CatalogueItem{7, 4}, CatalogueItem{6, 5}};
    st.cumulative_cost = 361;

    SinglePeriodResult res = exact_single_period(st, OracleLimits{});
    REQUIRE(res.feasible);
    CHECK(res.objective == doctest::Approx(361.0 * 361 - 152));
    CHECK(res.decision.objects[0].used);
    CHECK(res.decision.objects[0].t == 8);
    CHECK(res.decision.objects[0].r == 0);
}

TEST_CASE("single-period oracle with an exact fit") {
    SubproblemState st;
    st.instant = 0;
    st.pool.instant = 0;
    st.pool.purchasable_count = 1;
    st.pool.objects.push_back(ObjectState{6, 4, 1, 1, Origin::Purchasable, -1, {}});
    st.orders = {OrderedItem{6, 4}};
    st.catalogue = {CatalogueItem{2, 2}};
    st.cumulative_cost = 24;

    SinglePeriodResult res = exact_single_period(st, OracleLimits{});
    REQUIRE(res.feasible);
    CHECK(res.objective == doctest::Approx(24.0 * 24));
    CHECK(res.decision.objects[0].t == 0);
    CHECK(res.decision.objects[0].r == 0);
}

TEST_CASE("single-period oracle respects its limits") {
    SubproblemState st;
    st.instant = 0;
    st.pool.instant = 0;
    st.pool.purchasable_count = 1;
    st.pool.objects.push_back(ObjectState{40, 40, 1, 1, Origin::Purchasable, -1, {}});
    st.orders = {OrderedItem{2, 2}};
    st.catalogue = {CatalogueItem{2, 2}};
    st.cumulative_cost = 1600;
    CHECK_THROWS_AS(exact_single_period(st, OracleLimits{}), OracleLimitError);
}

TEST_CASE("multi-period oracle finds the cheap toy plan") {
    Instance inst = fixtures::toy_a();
    auto plan = exact_multi_period(inst, OracleLimits{});
    REQUIRE(plan.has_value());
    CHECK(plan->purchased_cost == 80);
    CHECK(plan->final_leftover_value == 9);
    CHECK(validate_plan(inst, *plan).empty());
}

TEST_CASE("multi-period oracle on the optimistic toy") {
    Instance inst = fixtures::toy_b();
    auto plan = exact_multi_period(inst, OracleLimits{});
    REQUIRE(plan.has_value());
    CHECK(plan->purchased_cost == 477);
    CHECK(validate_plan(inst, *plan).empty());
}

TEST_CASE("xi zero decouples the periods") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        GenConfig cfg;
        cfg.periods = 2;
        cfg.xi = 0;
        cfg.object_count = {1, 2};
        cfg.item_count = {1, 2};
        cfg.object_dim = {6, 12};
        cfg.item_dim = {2, 5};
        cfg.seed = seed;
        Instance inst = generate_instance(cfg);
        auto plan = exact_multi_period(inst, OracleLimits{});
        REQUIRE(plan.has_value());

        std::int64_t per_period_total = 0;
        ObjectPool pool = initial_pool(inst);
        for (int s = 0; s < inst.periods(); ++s) {
            SubproblemState st = make_subproblem_state(inst, s, pool);
            SinglePeriodResult res = exact_single_period(st, OracleLimits{});
            REQUIRE(res.feasible);
            for (int j = 0; j < pool.purchasable_count; ++j)
                if (res.decision.objects[j].used)
                    per_period_total += pool.objects[j].unit_cost *
                                        static_cast<std::int64_t>(pool.objects[j].area());
            pool = spawn_pool(pool, res.decision, inst.purchasable_at(s + 1), inst.xi);
        }
        CHECK(plan->purchased_cost == per_period_total);
    }
}
