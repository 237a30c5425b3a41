#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "cutplan/genealogy.hpp"
#include "cutplan/instance.hpp"

namespace fixtures {

// Two purchasable objects (10x8, 6x6) per instant over three periods, unit
// costs one, catalogue {3x1}.
inline const char* kToyA = R"(P 3 XI 3 D 1
CAT 3 1
PERIOD 0 M 2 N 2
OBJ 10 8 1
OBJ 6 6 1
ITEM 3 4
ITEM 3 1
PERIOD 1 M 2 N 4
OBJ 10 8 1
OBJ 6 6 1
ITEM 4 2
ITEM 3 4
ITEM 3 1
ITEM 3 1
PERIOD 2 M 2 N 3
OBJ 10 8 1
OBJ 6 6 1
ITEM 4 2
ITEM 4 2
ITEM 3 4
)";

// Three objects at the first instant (21x17, 19x19, 24x13), then 10x16 and
// 10x12; catalogue {7x4, 6x5}.
inline const char* kToyB = R"(P 3 XI 3 D 2
CAT 7 4
CAT 6 5
PERIOD 0 M 3 N 1
OBJ 21 17 1
OBJ 19 19 1
OBJ 24 13 1
ITEM 19 11
PERIOD 1 M 1 N 3
OBJ 10 16 1
ITEM 7 6
ITEM 7 5
ITEM 7 4
PERIOD 2 M 1 N 2
OBJ 10 12 1
ITEM 6 5
ITEM 6 5
)";

inline cutplan::Instance toy_a() { return cutplan::parse_instance(kToyA); }
inline cutplan::Instance toy_b() { return cutplan::parse_instance(kToyB); }

struct Use {
    int slot;
    bool vertical_first;
    double t;
    double r;
};

struct Put {
    int object;
    double x;
    double y;
};

inline cutplan::PeriodDecision decision(int pool_size, const std::vector<Use>& uses,
                                        const std::vector<Put>& items) {
    cutplan::PeriodDecision dec;
    dec.objects.resize(pool_size);
    for (const Use& use : uses)
        dec.objects[use.slot] = cutplan::ObjectUse{true, use.vertical_first, use.t, use.r};
    for (const Put& put : items)
        dec.items.push_back(cutplan::ItemPlacement{put.object, put.x, put.y});
    return dec;
}

// The minimum-cost solution of toy_a: buy the 10x8 object once, total cost 80,
// one 3x3 leftover at the horizon.
inline std::vector<cutplan::PeriodDecision> toy_a_cheap_decisions() {
    using cutplan::PeriodDecision;
    std::vector<PeriodDecision> decs;
    decs.push_back(decision(2, {{0, true, 3, 7}}, {{0, 1.5, 3.0}, {0, 1.5, 0.5}}));
    decs.push_back(decision(6, {{3, false, 4, 0}},
                            {{3, 5.0, 1.0}, {3, 1.5, 2.0}, {3, 4.5, 2.5}, {3, 4.5, 3.5}}));
    decs.push_back(decision(14, {{8, false, 0, 0}},
                            {{8, 2.0, 1.0}, {8, 2.0, 3.0}, {8, 5.5, 2.0}}));
    return decs;
}

// The greedy per-period solution of toy_a: buy the 6x6 object every period,
// total cost 108, final leftovers worth 27.
inline std::vector<cutplan::PeriodDecision> toy_a_greedy_decisions() {
    using cutplan::PeriodDecision;
    std::vector<PeriodDecision> decs;
    decs.push_back(decision(2, {{1, true, 1, 3}}, {{1, 1.5, 3.0}, {1, 1.5, 0.5}}));
    decs.push_back(decision(6, {{1, false, 4, 2}, {5, false, 1, 0}, {4, false, 0, 0}},
                            {{1, 2.0, 1.0}, {5, 1.5, 2.0}, {5, 1.5, 4.5}, {4, 1.5, 0.5}}));
    decs.push_back(decision(14, {{4, false, 0, 2}, {1, false, 2, 3}},
                            {{4, 2.0, 1.0}, {4, 2.0, 3.0}, {1, 1.5, 2.0}}));
    return decs;
}

// Published four-period instance 1 (costs default to one; the catalogue lists
// the two underlined shapes).
inline cutplan::Instance published_instance_1() {
    return cutplan::parse_instance(R"(P 4 XI 1 D 2
CAT 6 5
CAT 5 6
PERIOD 0 M 2 N 4
OBJ 77 100 1
OBJ 67 77 1
ITEM 6 5
ITEM 6 5
ITEM 9 6
ITEM 9 6
PERIOD 1 M 2 N 6
OBJ 81 36 1
OBJ 95 33 1
ITEM 8 11
ITEM 15 6
ITEM 15 6
ITEM 18 14
ITEM 18 14
ITEM 18 14
PERIOD 2 M 2 N 10
OBJ 54 74 1
OBJ 78 100 1
ITEM 6 8
ITEM 6 8
ITEM 6 8
ITEM 7 9
ITEM 7 9
ITEM 7 9
ITEM 17 13
ITEM 17 13
ITEM 13 8
ITEM 13 8
PERIOD 3 M 1 N 7
OBJ 53 68 1
ITEM 10 5
ITEM 10 5
ITEM 10 5
ITEM 5 6
ITEM 18 15
ITEM 16 14
ITEM 16 14
)");
}

}  // namespace fixtures
