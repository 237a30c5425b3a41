#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cutplan/instance.hpp"

namespace cutplan {

// Coordinates of an object in the pool chain: (instant, slot index).
struct PoolKey {
    int instant = 0;
    int slot = 0;
    auto operator<=>(const PoolKey&) const = default;
};

enum class Origin { Purchasable, TopLeftover, RightLeftover };

struct ObjectState {
    double width = 0;   // realized dims; integral for integer decisions
    double height = 0;
    std::int64_t unit_cost = 1;
    int expiration = 0;  // e; objects with e > 0 generate leftovers
    Origin origin = Origin::Purchasable;
    int parent_slot = -1;               // slot at the previous instant, leftovers only
    std::optional<PoolKey> ancestor;    // first-order ancestor; self for first-order leftovers

    double area() const { return width * height; }
    // zero-dim slots are kept for index arithmetic but cannot host items
    bool positive() const { return width > 1e-9 && height > 1e-9; }
};

struct ObjectPool {
    int instant = 0;
    int purchasable_count = 0;  // m_s; purchasable objects occupy the first slots
    std::vector<ObjectState> objects;

    int size() const { return static_cast<int>(objects.size()); }
};

// m̂_s (generator counts) for s = p-1..P-1 and m̄_s (pool sizes) for s = p..P.
struct ObjectCounts {
    int first_instant = 0;
    std::vector<std::int64_t> generators;  // indexed s = p-1..P-1
    std::vector<std::int64_t> totals;      // indexed s = p..P

    std::int64_t generators_at(int s) const { return generators.at(s - first_instant + 1); }
    std::int64_t totals_at(int s) const { return totals.at(s - first_instant); }
};

ObjectCounts object_counts(const std::vector<int>& m, int p, int P, int xi);

// Slots with e > 0, ascending. Their children occupy consecutive slot pairs
// at the next instant, after the purchasable slots.
std::vector<int> leftover_generator_indices(const ObjectPool& pool);

struct ObjectUse {
    bool used = false;
    bool vertical_first = false;  // order of the two guillotine pre-cuts
    double t = 0;                 // height of the top leftover
    double r = 0;                 // width of the right-hand-side leftover
};

struct ItemPlacement {
    int object = -1;  // pool slot
    double x = 0;     // item center
    double y = 0;
};

struct PeriodDecision {
    std::vector<ObjectUse> objects;    // one per pool slot
    std::vector<ItemPlacement> items;  // one per ordered item
};

ObjectPool initial_pool(const Instance& inst);
ObjectPool spawn_pool(const ObjectPool& pool, const PeriodDecision& dec,
                      const std::vector<PurchasableObject>& next_purchasables, int xi);

struct UsageEntry {
    std::int64_t used_area = 0;  // a
    double realized_area = 0;    // A, the gamma value of the first-order leftover
};

// Used-area accounting for first-order leftovers over one rolling pass.
class UsageTracker {
  public:
    void begin_first_order(PoolKey key);
    void set_realized_area(PoolKey key, double area);
    void add_used_area(PoolKey key, std::int64_t area);
    bool contains(PoolKey key) const { return entries_.count(key) > 0; }
    const std::map<PoolKey, UsageEntry>& entries() const { return entries_; }

  private:
    std::map<PoolKey, UsageEntry> entries_;
};

void record_item_usage(UsageTracker& tracker, const ObjectPool& pool, const OrderedItem& item,
                       int object_index);
// f = a/A for keys with A > 0; keys with A = 0 carry no information and are omitted.
std::map<PoolKey, double> utilization_fractions(const UsageTracker& tracker);

bool fits_catalogue(double width, double height, const std::vector<CatalogueItem>& catalogue);
// area times unit cost if some catalogue item fits (no rotation), else 0
double leftover_value(const ObjectState& obj, const std::vector<CatalogueItem>& catalogue);
// total value of the non-purchasable slots of a pool
double pool_leftover_value(const ObjectPool& pool, const std::vector<CatalogueItem>& catalogue);

// Per-period decisions with realized pools and plan totals.
struct Plan {
    int first_instant = 0;
    std::vector<PeriodDecision> periods;
    std::vector<ObjectPool> pools;  // pools at p..P
    std::int64_t purchased_cost = 0;
    double final_leftover_value = 0;
    double objective = 0;  // scale constant times cost, minus final leftover value

    bool better_than(const Plan& other) const;  // lexicographic: cost, then -value
};

// Spawns pools from the decisions and fills in the totals.
Plan assemble_plan(const Instance& inst, const std::vector<PeriodDecision>& decisions);

std::string serialize_plan(const Plan& plan);
// Rebuilds the plan against the instance (pool sizes come from the spawn chain).
Plan parse_plan(const std::string& text, const Instance& inst);

std::string dump_genealogy(const std::vector<ObjectPool>& pools);

}  // namespace cutplan
