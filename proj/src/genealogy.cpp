#include "cutplan/genealogy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cutplan {

ObjectCounts object_counts(const std::vector<int>& m, int p, int P, int xi) {
    int periods = P - p;
    if (periods < 1) throw std::invalid_argument("last instant must exceed the first");
    if (static_cast<int>(m.size()) != periods)
        throw std::invalid_argument("expected one purchasable count per period");
    if (xi < 0 || xi > periods) throw std::invalid_argument("xi out of range");

    ObjectCounts counts;
    counts.first_instant = p;
    counts.generators.assign(periods + 1, 0);  // s = p-1..P-1
    counts.totals.assign(periods + 1, 0);      // s = p..P
    for (int s = p; s <= P - 1; ++s) {
        std::int64_t total = 0;
        int top = std::min(s - p, xi - 1);  // empty sum when xi = 0
        for (int l = 0; l <= top; ++l) total += (std::int64_t{1} << l) * m[s - l - p];
        counts.generators[s - p + 1] = total;
    }
    for (int s = p; s <= P; ++s) {
        std::int64_t ms = (s < P) ? m[s - p] : 0;
        counts.totals[s - p] = ms + 2 * counts.generators[s - p];
    }
    return counts;
}

std::vector<int> leftover_generator_indices(const ObjectPool& pool) {
    std::vector<int> out;
    for (int j = 0; j < pool.size(); ++j)
        if (pool.objects[j].expiration > 0) out.push_back(j);
    return out;
}

ObjectPool initial_pool(const Instance& inst) {
    ObjectPool pool;
    pool.instant = inst.first_instant;
    const auto& objs = inst.purchasable_at(inst.first_instant);
    pool.purchasable_count = static_cast<int>(objs.size());
    for (const auto& obj : objs) {
        ObjectState st;
        st.width = static_cast<double>(obj.width);
        st.height = static_cast<double>(obj.height);
        st.unit_cost = obj.unit_cost;
        st.expiration = inst.xi;
        st.origin = Origin::Purchasable;
        pool.objects.push_back(st);
    }
    return pool;
}

ObjectPool spawn_pool(const ObjectPool& pool, const PeriodDecision& dec,
                      const std::vector<PurchasableObject>& next_purchasables, int xi) {
    if (dec.objects.size() != static_cast<size_t>(pool.size()))
        throw std::invalid_argument("decision covers " + std::to_string(dec.objects.size()) +
                                    " objects, pool has " + std::to_string(pool.size()));
    ObjectPool next;
    next.instant = pool.instant + 1;
    next.purchasable_count = static_cast<int>(next_purchasables.size());
    for (const auto& obj : next_purchasables) {
        ObjectState st;
        st.width = static_cast<double>(obj.width);
        st.height = static_cast<double>(obj.height);
        st.unit_cost = obj.unit_cost;
        st.expiration = xi;
        st.origin = Origin::Purchasable;
        next.objects.push_back(st);
    }

    for (int j : leftover_generator_indices(pool)) {
        const ObjectState& parent = pool.objects[j];
        const ObjectUse& use = dec.objects[j];
        bool purch = j < pool.purchasable_count;

        ObjectState top, right;
        top.origin = Origin::TopLeftover;
        right.origin = Origin::RightLeftover;
        top.parent_slot = right.parent_slot = j;
        top.unit_cost = right.unit_cost = parent.unit_cost;
        top.expiration = right.expiration = parent.expiration - 1;

        if (use.used) {
            if (use.t < -1e-6 || use.t > parent.height + 1e-6 || use.r < -1e-6 ||
                use.r > parent.width + 1e-6)
                throw std::invalid_argument("pre-cut outside the object at slot " +
                                            std::to_string(j));
            top.width = use.vertical_first ? parent.width - use.r : parent.width;
            top.height = use.t;
            right.width = use.r;
            right.height = use.vertical_first ? parent.height : parent.height - use.t;
        } else if (purch) {
            // not purchased: both leftovers have null dimensions
            top.width = top.height = 0;
            right.width = right.height = 0;
        } else {
            // an unused leftover passes to the next instant as its own top leftover
            top.width = parent.width;
            top.height = parent.height;
            right.width = right.height = 0;
        }

        PoolKey top_key{next.instant, static_cast<int>(next.objects.size())};
        PoolKey right_key{next.instant, top_key.slot + 1};
        if (purch) {
            top.ancestor = top_key;
            right.ancestor = right_key;
        } else {
            top.ancestor = parent.ancestor;
            right.ancestor = parent.ancestor;
        }
        next.objects.push_back(top);
        next.objects.push_back(right);
    }
    return next;
}

void UsageTracker::begin_first_order(PoolKey key) { entries_[key] = UsageEntry{}; }

void UsageTracker::set_realized_area(PoolKey key, double area) {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw std::logic_error("unknown first-order key");
    it->second.realized_area = area;
}

void UsageTracker::add_used_area(PoolKey key, std::int64_t area) {
    auto it = entries_.find(key);
    if (it == entries_.end())
        throw std::logic_error("ancestor key missing: pool and tracker out of sync");
    it->second.used_area += area;
}

void record_item_usage(UsageTracker& tracker, const ObjectPool& pool, const OrderedItem& item,
                       int object_index) {
    if (object_index < 0 || object_index >= pool.size())
        throw std::out_of_range("object index outside pool");
    if (object_index < pool.purchasable_count) return;  // only leftover usage is tracked
    const ObjectState& obj = pool.objects[object_index];
    if (!obj.ancestor)
        throw std::logic_error("leftover without first-order ancestor");
    tracker.add_used_area(*obj.ancestor, item.area());
}

std::map<PoolKey, double> utilization_fractions(const UsageTracker& tracker) {
    std::map<PoolKey, double> fractions;
    for (const auto& [key, entry] : tracker.entries())
        if (entry.realized_area > 0)
            fractions[key] = static_cast<double>(entry.used_area) / entry.realized_area;
    return fractions;
}

bool fits_catalogue(double width, double height, const std::vector<CatalogueItem>& catalogue) {
    for (const auto& ci : catalogue)
        if (static_cast<double>(ci.width) <= width + 1e-9 &&
            static_cast<double>(ci.height) <= height + 1e-9)
            return true;
    return false;
}

double leftover_value(const ObjectState& obj, const std::vector<CatalogueItem>& catalogue) {
    if (!obj.positive()) return 0;
    if (!fits_catalogue(obj.width, obj.height, catalogue)) return 0;
    return obj.area() * static_cast<double>(obj.unit_cost);
}

double pool_leftover_value(const ObjectPool& pool, const std::vector<CatalogueItem>& catalogue) {
    double total = 0;
    for (int j = pool.purchasable_count; j < pool.size(); ++j)
        total += leftover_value(pool.objects[j], catalogue);
    return total;
}

bool Plan::better_than(const Plan& other) const {
    if (purchased_cost != other.purchased_cost) return purchased_cost < other.purchased_cost;
    return final_leftover_value > other.final_leftover_value + 1e-9;
}

Plan assemble_plan(const Instance& inst, const std::vector<PeriodDecision>& decisions) {
    if (decisions.size() != static_cast<size_t>(inst.periods()))
        throw std::invalid_argument("expected one decision per period");
    Plan plan;
    plan.first_instant = inst.first_instant;
    plan.periods = decisions;
    ObjectPool pool = initial_pool(inst);
    for (int s = inst.first_instant; s < inst.last_instant; ++s) {
        plan.pools.push_back(pool);
        const PeriodDecision& dec = decisions[s - inst.first_instant];
        for (int j = 0; j < pool.purchasable_count; ++j)
            if (j < static_cast<int>(dec.objects.size()) && dec.objects[j].used) {
                const ObjectState& obj = pool.objects[j];
                plan.purchased_cost +=
                    obj.unit_cost * static_cast<std::int64_t>(std::llround(obj.area()));
            }
        pool = spawn_pool(pool, dec, inst.purchasable_at(s + 1), inst.xi);
    }
    plan.pools.push_back(pool);
    plan.final_leftover_value = pool_leftover_value(pool, inst.catalogue);
    plan.objective = static_cast<double>(inst.cumulative_object_cost(inst.last_instant - 1)) *
                         static_cast<double>(plan.purchased_cost) -
                     plan.final_leftover_value;
    return plan;
}

std::string serialize_plan(const Plan& plan) {
    std::ostringstream out;
    out.precision(17);
    int P = plan.first_instant + static_cast<int>(plan.periods.size());
    out << "PLAN " << plan.first_instant << " " << P << "\n";
    for (size_t k = 0; k < plan.periods.size(); ++k) {
        const PeriodDecision& dec = plan.periods[k];
        out << "PERIOD " << plan.first_instant + static_cast<int>(k) << "\n";
        for (size_t j = 0; j < dec.objects.size(); ++j) {
            const ObjectUse& use = dec.objects[j];
            if (!use.used) continue;
            out << "USE " << j << " " << (use.vertical_first ? 1 : 0) << " " << use.t << " "
                << use.r << "\n";
        }
        for (size_t i = 0; i < dec.items.size(); ++i) {
            const ItemPlacement& placement = dec.items[i];
            out << "ITEM " << i << " " << placement.object << " " << placement.x << " "
                << placement.y << "\n";
        }
    }
    out << "TOTALS " << plan.purchased_cost << " " << plan.final_leftover_value << " "
        << plan.objective << "\n";
    return out.str();
}

Plan parse_plan(const std::string& text, const Instance& inst) {
    std::istringstream in(text);
    std::string keyword;
    int p = 0, P = 0;
    if (!(in >> keyword >> p >> P) || keyword != "PLAN")
        throw std::invalid_argument("plan file must start with a PLAN header");
    if (p != inst.first_instant || P != inst.last_instant)
        throw std::invalid_argument("plan horizon does not match the instance");

    std::vector<PeriodDecision> decisions;
    ObjectPool pool = initial_pool(inst);
    PeriodDecision current;
    int current_s = inst.first_instant - 1;
    auto close_period = [&]() {
        if (current_s < inst.first_instant) return;
        decisions.push_back(current);
        pool = spawn_pool(pool, current, inst.purchasable_at(current_s + 1), inst.xi);
    };
    while (in >> keyword) {
        if (keyword == "PERIOD") {
            close_period();
            int s = 0;
            in >> s;
            if (s != current_s + 1 && !(current_s < inst.first_instant && s == inst.first_instant))
                throw std::invalid_argument("plan periods out of order");
            current_s = s;
            current = PeriodDecision{};
            current.objects.resize(pool.size());
            current.items.resize(inst.orders_at(s).size());
        } else if (keyword == "USE") {
            size_t j;
            int eta;
            double t, r;
            if (!(in >> j >> eta >> t >> r) || j >= current.objects.size())
                throw std::invalid_argument("bad USE line");
            current.objects[j] = ObjectUse{true, eta != 0, t, r};
        } else if (keyword == "ITEM") {
            size_t i;
            int j;
            double x, y;
            if (!(in >> i >> j >> x >> y) || i >= current.items.size())
                throw std::invalid_argument("bad ITEM line");
            current.items[i] = ItemPlacement{j, x, y};
        } else if (keyword == "TOTALS") {
            double a, b, c;
            in >> a >> b >> c;  // informative only; totals are recomputed
        } else {
            throw std::invalid_argument("unknown plan keyword '" + keyword + "'");
        }
    }
    close_period();
    return assemble_plan(inst, decisions);
}

std::string dump_genealogy(const std::vector<ObjectPool>& pools) {
    std::ostringstream out;
    for (const auto& pool : pools) {
        out << "instant " << pool.instant << " (" << pool.size() << " slots, "
            << pool.purchasable_count << " purchasable)\n";
        for (int j = 0; j < pool.size(); ++j) {
            const ObjectState& obj = pool.objects[j];
            out << "  [" << j << "] " << obj.width << "x" << obj.height << " c=" << obj.unit_cost
                << " e=" << obj.expiration;
            switch (obj.origin) {
                case Origin::Purchasable:
                    out << " purchasable";
                    break;
                case Origin::TopLeftover:
                    out << " top-of[" << obj.parent_slot << "]";
                    break;
                case Origin::RightLeftover:
                    out << " right-of[" << obj.parent_slot << "]";
                    break;
            }
            if (obj.ancestor)
                out << " ancestor=(" << obj.ancestor->instant << "," << obj.ancestor->slot << ")";
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace cutplan
