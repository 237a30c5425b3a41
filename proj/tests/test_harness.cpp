#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "cutplan/harness.hpp"
#include "fixtures.hpp"

using namespace cutplan;

TEST_CASE("gap percent reproduces the published table entries") {
    CHECK(format_gap(gap_percent(400703843, 314108050)) == "27.5688");
    CHECK(format_gap(gap_percent(182258424, 444536794)) == "-59.0004");
    CHECK(format_gap(gap_percent(12345, 12345)) == "0.0000");
    CHECK_THROWS(gap_percent(1, 0));
}

TEST_CASE("classification follows the lexicographic rule") {
    CHECK(classify(6715, 0, 6715, 0) == Outcome::Tie);
    CHECK(classify(11679, 2647, 9155, 0) == Outcome::Loss);
    CHECK(classify(5, 10, 5, 9) == Outcome::Win);
    CHECK(classify(4, 0, 5, 100) == Outcome::Win);
}

TEST_CASE("classification is antisymmetric") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::int64_t ca = static_cast<std::int64_t>(rng() % 5);
        std::int64_t cb = static_cast<std::int64_t>(rng() % 5);
        double la = static_cast<double>(rng() % 4);
        double lb = static_cast<double>(rng() % 4);
        Outcome ab = classify(ca, la, cb, lb);
        Outcome ba = classify(cb, lb, ca, la);
        if (ab == Outcome::Win) CHECK(ba == Outcome::Loss);
        if (ab == Outcome::Tie) CHECK(ba == Outcome::Tie);
        if (ab == Outcome::Loss) CHECK(ba == Outcome::Win);
        // the sign of the gap tracks the objective difference
        double fa = 1000.0 * ca - la + 10, fb = 1000.0 * cb - lb + 10;
        double gap = gap_percent(fa, fb);
        CHECK((gap > 0) == (fa > fb));
    }
}

TEST_CASE("win/tie/loss aggregation over labeled fixtures") {
    struct Row {
        std::int64_t ca;
        double la;
        std::int64_t cb;
        double lb;
        Outcome want;
    };
    std::vector<Row> rows = {
        {10, 0, 12, 0, Outcome::Win},  {12, 0, 10, 0, Outcome::Loss},
        {10, 5, 10, 5, Outcome::Tie},  {10, 6, 10, 5, Outcome::Win},
        {10, 4, 10, 5, Outcome::Loss}, {7, 0, 7, 0, Outcome::Tie},
        {3, 9, 3, 9, Outcome::Tie},    {5, 0, 9, 9, Outcome::Win},
        {9, 9, 5, 0, Outcome::Loss},   {1, 1, 1, 0, Outcome::Win},
    };
    int wins = 0, ties = 0, losses = 0;
    for (const Row& row : rows) {
        Outcome got = classify(row.ca, row.la, row.cb, row.lb);
        CHECK(got == row.want);
        wins += got == Outcome::Win;
        ties += got == Outcome::Tie;
        losses += got == Outcome::Loss;
    }
    CHECK(wins == 4);
    CHECK(ties == 3);
    CHECK(losses == 3);
}

TEST_CASE("experiment report on the toy corpus") {
    std::vector<std::pair<std::string, Instance>> instances{
        {"toy_a", fixtures::toy_a()},
        {"toy_b", fixtures::toy_b()},
    };
    ExperimentConfig cfg;
    cfg.training.delta_ini = 1.0;
    auto report = run_experiment(instances, cfg);
    REQUIRE(report.results.size() == 2);
    const auto& a = report.results[0];
    const auto& b = report.results[1];
    CHECK(a.methods[0].cost == 108);   // myopic on toy_a
    CHECK(b.methods[0].cost == 592);   // myopic on toy_b
    CHECK(b.methods[1].cost == 477);   // forward-looking on toy_b
    CHECK(report.csv.find("toy_a") != std::string::npos);
    CHECK(report.csv.find("592") != std::string::npos);
    CHECK(report.table.find("block summary") != std::string::npos);

    // csv numbers round-trip
    std::istringstream in(report.csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "instance,periods,xi,method,feasible,objective,cost,leftover_value,seconds");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 8);
    }
    CHECK(rows == 4);
}

TEST_CASE("empty experiment") {
    auto report = run_experiment({}, ExperimentConfig{});
    CHECK(report.results.empty());
    CHECK(report.csv.find("instance,") == 0);
}
