#include <doctest.h>

#include "cutplan/instance.hpp"
#include "fixtures.hpp"

using namespace cutplan;

TEST_CASE("parse toy instance") {
    Instance inst = fixtures::toy_a();
    CHECK(inst.first_instant == 0);
    CHECK(inst.last_instant == 3);
    CHECK(inst.xi == 3);
    CHECK(inst.purchasable_counts() == std::vector<int>{2, 2, 2});
    CHECK(inst.orders_at(0).size() == 2);
    CHECK(inst.orders_at(1).size() == 4);
    CHECK(inst.orders_at(2).size() == 3);
    CHECK(inst.catalogue.size() == 1);
    CHECK(inst.catalogue[0] == CatalogueItem{3, 1});
    CHECK(inst.purchasable_at(0)[0] == PurchasableObject{10, 8, 1});
    CHECK(inst.cumulative_object_cost(2) == 348);
}

TEST_CASE("serialize then parse is the identity") {
    for (const char* text : {fixtures::kToyA, fixtures::kToyB}) {
        Instance inst = parse_instance(text);
        std::string canon = serialize_instance(inst);
        CHECK(parse_instance(canon) == inst);
        CHECK(serialize_instance(parse_instance(canon)) == canon);
    }
}

TEST_CASE("serializer emits catalogue and empty periods") {
    Instance inst = fixtures::toy_b();
    std::string text = serialize_instance(inst);
    CHECK(text.find("CAT 7 4\nCAT 6 5") != std::string::npos);

    inst.orders[1].clear();
    std::string with_empty = serialize_instance(inst);
    CHECK(with_empty.find("PERIOD 1 M 1 N 0") != std::string::npos);
    CHECK(parse_instance(with_empty) == inst);
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(parse_instance("Q 3"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_instance("P 4 XI 1 D 1\nCAT 3 1\nPERIOD 0 M 0 N 0\nPERIOD 1 M 0 N 0\n"
                       "PERIOD 2 M 0 N 0\n"),
        doctest::Contains("period count mismatch"), ParseError);
    CHECK_THROWS_WITH_AS(parse_instance("P 2 XI 3 D 1\nCAT 3 1\nPERIOD 0 M 0 N 0\n"
                                        "PERIOD 1 M 0 N 0\n"),
                         doctest::Contains("xi out of range"), ParseError);
    CHECK_THROWS_AS(parse_instance("P 1 XI 0 D 1\nCAT 3 1\nPERIOD 0 M 1 N 0\nOBJ 0 5 1\n"),
                    ParseError);
    // trailing content is rejected
    std::string text = std::string(fixtures::kToyA) + "OBJ 1 1 1\n";
    CHECK_THROWS_AS(parse_instance(text), ParseError);
}

TEST_CASE("comments and nonzero first instant") {
    Instance inst = parse_instance(
        "# a comment\nP 4 XI 1 D 1\nCAT 2 2\nPERIOD 2 M 1 N 1 # inline\nOBJ 9 9 1\n"
        "ITEM 2 2\nPERIOD 3 M 0 N 0\n");
    CHECK(inst.first_instant == 2);
    CHECK(inst.periods() == 2);
}

TEST_CASE("generator is deterministic and respects its ranges") {
    GenConfig cfg;
    cfg.seed = 1;
    Instance a = generate_instance(cfg);
    Instance b = generate_instance(cfg);
    CHECK(a == b);
    CHECK(parse_instance(serialize_instance(a)) == a);

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        GenConfig c;
        c.seed = seed;
        c.periods = 2;
        Instance inst = generate_instance(c);
        for (const auto& objs : inst.purchasable)
            for (const auto& obj : objs) {
                CHECK(obj.width >= 30);
                CHECK(obj.width <= 100);
                CHECK(obj.height >= 30);
                CHECK(obj.height <= 100);
            }
        for (const auto& items : inst.orders)
            for (const auto& item : items) {
                CHECK(item.width >= 5);
                CHECK(item.width <= 20);
                CHECK(item.height >= 5);
                CHECK(item.height <= 20);
            }
        auto issues = validate_instance(inst);
        for (const auto& issue : issues) CHECK(issue.severity != Severity::Error);
        CHECK(issues.empty());
    }
}

TEST_CASE("degenerate generator ranges") {
    GenConfig cfg;
    cfg.object_dim = {50, 50};
    cfg.item_dim = {10, 10};
    cfg.seed = 7;
    Instance inst = generate_instance(cfg);
    for (const auto& objs : inst.purchasable)
        for (const auto& obj : objs) {
            CHECK(obj.width == 50);
            CHECK(obj.height == 50);
        }
    for (const auto& items : inst.orders)
        for (const auto& item : items) CHECK(item.width == 10);
}

TEST_CASE("validate_instance reports warnings and errors as values") {
    CHECK(validate_instance(fixtures::toy_a()).empty());

    Instance inst;
    inst.first_instant = 0;
    inst.last_instant = 1;
    inst.xi = 0;
    inst.purchasable = {{PurchasableObject{26, 21, 1}}};
    inst.orders = {{OrderedItem{30, 30}}};
    inst.catalogue = {CatalogueItem{1, 1}};
    auto issues = validate_instance(inst);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].severity == Severity::Warning);
    CHECK(issues[0].message.find("cannot fit any object") != std::string::npos);

    inst.xi = 2;  // P - p + 1
    issues = validate_instance(inst);
    bool has_range_error = false;
    for (const auto& issue : issues)
        if (issue.severity == Severity::Error &&
            issue.message.find("xi out of range") != std::string::npos)
            has_range_error = true;
    CHECK(has_range_error);
}
