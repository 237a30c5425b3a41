#include "cutplan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>

namespace cutplan {

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Overlap: return "overlap";
        case ViolationKind::OutOfCuttingArea: return "out_of_cutting_area";
        case ViolationKind::BadLeftoverGeometry: return "bad_leftover_geometry";
        case ViolationKind::UnassignedItem: return "unassigned_item";
        case ViolationKind::DoubleAssignment: return "double_assignment";
        case ViolationKind::ExpiredObjectUsed: return "expired_object_used";
        case ViolationKind::ValueMismatch: return "value_mismatch";
    }
    return "unknown";
}

namespace {

constexpr double kTol = 1e-6;

}  // namespace

std::vector<Violation> validate_plan(const Instance& inst, const Plan& plan) {
    std::vector<Violation> out;
    auto add = [&](ViolationKind kind, int instant, int a, int b, std::string detail) {
        out.push_back(Violation{kind, instant, a, b, std::move(detail)});
    };

    if (plan.periods.size() != static_cast<size_t>(inst.periods())) {
        add(ViolationKind::ValueMismatch, -1, -1, -1, "plan period count mismatch");
        return out;
    }

    std::int64_t cost = 0;
    ObjectPool pool = initial_pool(inst);
    std::vector<ObjectPool> pools{pool};
    for (int s = inst.first_instant; s < inst.last_instant; ++s) {
        const PeriodDecision& dec = plan.periods[s - inst.first_instant];
        const auto& items = inst.orders_at(s);
        if (dec.objects.size() != static_cast<size_t>(pool.size()) ||
            dec.items.size() != items.size()) {
            add(ViolationKind::ValueMismatch, s, -1, -1, "decision shape mismatch");
            return out;
        }

        std::vector<int> items_on(pool.size(), 0);
        for (size_t i = 0; i < items.size(); ++i) {
            const ItemPlacement& placement = dec.items[i];
            if (placement.object < 0) {
                add(ViolationKind::UnassignedItem, s, static_cast<int>(i), -1,
                    "item has no object");
                continue;
            }
            if (placement.object >= pool.size()) {
                add(ViolationKind::ExpiredObjectUsed, s, static_cast<int>(i), placement.object,
                    "assigned object does not exist at this instant");
                continue;
            }
            if (!pool.objects[placement.object].positive()) {
                add(ViolationKind::ExpiredObjectUsed, s, static_cast<int>(i), placement.object,
                    "assigned object has null dimensions");
                continue;
            }
            items_on[placement.object]++;
        }
        for (int j = 0; j < pool.size(); ++j) {
            bool used = dec.objects[j].used;
            if (used && items_on[j] == 0)
                add(ViolationKind::DoubleAssignment, s, -1, j,
                    "object marked used but no item is assigned to it");
            if (!used && items_on[j] > 0)
                add(ViolationKind::DoubleAssignment, s, -1, j,
                    "items assigned to an object not marked used");
        }

        for (int j = 0; j < pool.size(); ++j) {
            const ObjectUse& use = dec.objects[j];
            if (!use.used) continue;
            const ObjectState& obj = pool.objects[j];
            if (use.t < -kTol || use.t > obj.height + kTol || use.r < -kTol ||
                use.r > obj.width + kTol)
                add(ViolationKind::BadLeftoverGeometry, s, -1, j,
                    "pre-cut outside the object");
        }

        for (size_t i = 0; i < items.size(); ++i) {
            const ItemPlacement& placement = dec.items[i];
            if (placement.object < 0 || placement.object >= pool.size()) continue;
            const ObjectState& obj = pool.objects[placement.object];
            if (!obj.positive()) continue;
            const ObjectUse& use = dec.objects[placement.object];
            double w = static_cast<double>(items[i].width);
            double h = static_cast<double>(items[i].height);
            double cut_w = obj.width - use.r;
            double cut_h = obj.height - use.t;
            if (placement.x - w / 2 < -kTol || placement.x + w / 2 > cut_w + kTol ||
                placement.y - h / 2 < -kTol || placement.y + h / 2 > cut_h + kTol)
                add(ViolationKind::OutOfCuttingArea, s, static_cast<int>(i), placement.object,
                    "item outside the cutting area");
        }
        for (size_t i = 0; i < items.size(); ++i)
            for (size_t i2 = i + 1; i2 < items.size(); ++i2) {
                const ItemPlacement& a = dec.items[i];
                const ItemPlacement& b = dec.items[i2];
                if (a.object < 0 || a.object != b.object) continue;
                double need_x =
                    static_cast<double>(items[i].width + items[i2].width) / 2.0;
                double need_y =
                    static_cast<double>(items[i].height + items[i2].height) / 2.0;
                if (std::abs(a.x - b.x) < need_x - kTol &&
                    std::abs(a.y - b.y) < need_y - kTol)
                    add(ViolationKind::Overlap, s, static_cast<int>(i), static_cast<int>(i2),
                        "items overlap");
            }

        for (int j = 0; j < pool.purchasable_count; ++j)
            if (dec.objects[j].used)
                cost += pool.objects[j].unit_cost *
                        static_cast<std::int64_t>(std::llround(pool.objects[j].area()));
        if (!out.empty()) {
            // geometry is already broken; pool evolution may not be well defined
            return out;
        }
        pool = spawn_pool(pool, dec, inst.purchasable_at(s + 1), inst.xi);
        pools.push_back(pool);
    }

    // independent recomputation of pools, totals and leftover values
    if (plan.pools.size() == pools.size()) {
        for (size_t k = 0; k < pools.size(); ++k) {
            if (plan.pools[k].size() != pools[k].size()) {
                add(ViolationKind::ValueMismatch, pools[k].instant, -1, -1,
                    "stored pool layout diverges from the decisions");
                break;
            }
            for (int j = 0; j < pools[k].size(); ++j) {
                const ObjectState& got = plan.pools[k].objects[j];
                const ObjectState& want = pools[k].objects[j];
                if (std::abs(got.width - want.width) > kTol ||
                    std::abs(got.height - want.height) > kTol) {
                    add(ViolationKind::ValueMismatch, pools[k].instant, -1, j,
                        "stored leftover dimensions diverge from the decisions");
                }
            }
        }
    } else if (!plan.pools.empty()) {
        add(ViolationKind::ValueMismatch, -1, -1, -1, "stored pool chain length mismatch");
    }

    double value = pool_leftover_value(pools.back(), inst.catalogue);
    if (cost != plan.purchased_cost)
        add(ViolationKind::ValueMismatch, -1, -1, -1,
            "purchased cost " + std::to_string(plan.purchased_cost) + " recomputes to " +
                std::to_string(cost));
    if (std::abs(value - plan.final_leftover_value) > 1e-6 * (1 + std::abs(value)))
        add(ViolationKind::ValueMismatch, -1, -1, -1,
            "final leftover value " + std::to_string(plan.final_leftover_value) +
                " recomputes to " + std::to_string(value));
    double objective = static_cast<double>(inst.cumulative_object_cost(inst.last_instant - 1)) *
                           static_cast<double>(cost) -
                       value;
    if (std::abs(objective - plan.objective) > 1e-6 * (1 + std::abs(objective)))
        add(ViolationKind::ValueMismatch, -1, -1, -1, "objective recomputation mismatch");
    return out;
}

namespace {

using Dims = std::pair<std::int64_t, std::int64_t>;

struct PackKey {
    std::vector<Dims> items;  // sorted
    std::int64_t w, h;
    bool operator<(const PackKey& other) const {
        if (w != other.w) return w < other.w;
        if (h != other.h) return h < other.h;
        return items < other.items;
    }
};

struct Placement {
    std::vector<Dims> at;  // bottom-left corner per item, caller order
};

// Exhaustive packing over normal-pattern coordinates (subset sums of the item
// dimensions), which preserve packability for integer data.
class Packer {
  public:
    std::optional<Placement> pack(const std::vector<Dims>& items, std::int64_t w,
                                  std::int64_t h) {
        if (items.empty()) return Placement{};
        std::int64_t area = 0;
        for (const Dims& d : items) {
            if (d.first > w || d.second > h) return std::nullopt;
            area += d.first * d.second;
        }
        if (area > w * h) return std::nullopt;

        std::vector<int> order(items.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            std::int64_t aa = items[a].first * items[a].second;
            std::int64_t bb = items[b].first * items[b].second;
            if (aa != bb) return aa > bb;
            return items[a] < items[b];
        });
        std::vector<Dims> sorted;
        for (int idx : order) sorted.push_back(items[idx]);

        PackKey key{sorted, w, h};
        auto it = cache_.find(key);
        std::optional<Placement> sorted_placement;
        if (it != cache_.end()) {
            sorted_placement = it->second;
        } else {
            std::set<std::int64_t> xs{0}, ys{0};
            for (const Dims& d : items) {
                for (std::int64_t v : std::vector<std::int64_t>(xs.begin(), xs.end()))
                    if (v + d.first < w) xs.insert(v + d.first);
                for (std::int64_t v : std::vector<std::int64_t>(ys.begin(), ys.end()))
                    if (v + d.second < h) ys.insert(v + d.second);
            }
            xs_.assign(xs.begin(), xs.end());
            ys_.assign(ys.begin(), ys.end());
            state_.assign(sorted.size(), {0, 0});
            nodes_ = 0;
            if (dfs(sorted, 0, w, h))
                sorted_placement = Placement{state_};
            cache_[key] = sorted_placement;
        }
        if (!sorted_placement) return std::nullopt;
        Placement res;
        res.at.resize(items.size());
        for (size_t k = 0; k < order.size(); ++k) res.at[order[k]] = sorted_placement->at[k];
        return res;
    }

  private:
    bool dfs(const std::vector<Dims>& items, size_t depth, std::int64_t w, std::int64_t h) {
        if (depth == items.size()) return true;
        if (++nodes_ > 4'000'000)
            throw OracleLimitError("packing search exceeded its node budget");
        const Dims& d = items[depth];
        for (std::int64_t x : xs_) {
            if (x + d.first > w) break;
            for (std::int64_t y : ys_) {
                if (y + d.second > h) break;
                bool clash = false;
                for (size_t k = 0; k < depth; ++k) {
                    if (x < state_[k].first + items[k].first &&
                        state_[k].first < x + d.first &&
                        y < state_[k].second + items[k].second &&
                        state_[k].second < y + d.second) {
                        clash = true;
                        break;
                    }
                }
                if (clash) continue;
                state_[depth] = {x, y};
                if (dfs(items, depth + 1, w, h)) return true;
            }
        }
        return false;
    }

    std::map<PackKey, std::optional<Placement>> cache_;
    std::vector<std::int64_t> xs_, ys_;
    std::vector<Dims> state_;
    long long nodes_ = 0;
};

// A candidate cutting pattern for one object and one item set: the pre-cuts,
// the witness placement, and the resulting child dimensions.
struct PatternOption {
    bool vertical_first = false;
    std::int64_t t = 0, r = 0;
    Dims top, right;
    Placement placement;
};

struct ObjectInfo {
    std::int64_t width = 0, height = 0;
    std::int64_t unit_cost = 1;
};

// Enumerates the undominated integer pre-cut choices: for the vertical-first
// order only the tallest packing per cutting width matters, and symmetrically
// for the horizontal-first order.
std::vector<PatternOption> pattern_options(Packer& packer, const ObjectInfo& obj,
                                           const std::vector<Dims>& items) {
    std::vector<PatternOption> options;
    std::int64_t W = obj.width, H = obj.height;
    std::int64_t min_w = 0, min_h = 0;
    for (const Dims& d : items) {
        min_w = std::max(min_w, d.first);
        min_h = std::max(min_h, d.second);
    }
    // minimal packing height per cutting width (non-increasing staircase)
    std::int64_t bmin = H + 1;
    for (std::int64_t a = min_w; a <= W; ++a) {
        if (bmin > H) {
            if (!packer.pack(items, a, H)) continue;
            bmin = H;
        }
        while (bmin > min_h && packer.pack(items, a, bmin - 1)) --bmin;
        auto exact = packer.pack(items, a, bmin);
        if (!exact) continue;
        PatternOption v;
        v.vertical_first = true;
        v.r = W - a;
        v.t = H - bmin;
        v.top = {a, H - bmin};
        v.right = {W - a, H};
        v.placement = *exact;
        options.push_back(v);
        PatternOption h = v;
        h.vertical_first = false;
        h.top = {W, H - bmin};
        h.right = {W - a, bmin};
        options.push_back(h);
    }
    // minimal packing width per cutting height, for the symmetric corners
    std::int64_t amin = W + 1;
    for (std::int64_t b = min_h; b <= H; ++b) {
        if (amin > W) {
            if (!packer.pack(items, W, b)) continue;
            amin = W;
        }
        while (amin > min_w && packer.pack(items, amin - 1, b)) --amin;
        auto exact = packer.pack(items, amin, b);
        if (!exact) continue;
        PatternOption h;
        h.vertical_first = false;
        h.r = W - amin;
        h.t = H - b;
        h.top = {W, H - b};
        h.right = {W - amin, b};
        h.placement = *exact;
        options.push_back(h);
        PatternOption v = h;
        v.vertical_first = true;
        v.top = {amin, H - b};
        v.right = {W - amin, H};
        options.push_back(v);
    }
    std::sort(options.begin(), options.end(), [](const PatternOption& a, const PatternOption& b) {
        return std::tie(a.top, a.right, a.vertical_first, a.t, a.r) <
               std::tie(b.top, b.right, b.vertical_first, b.t, b.r);
    });
    options.erase(std::unique(options.begin(), options.end(),
                              [](const PatternOption& a, const PatternOption& b) {
                                  return a.top == b.top && a.right == b.right;
                              }),
                  options.end());
    return options;
}

double child_value(const Dims& dims, std::int64_t unit_cost,
                   const std::vector<CatalogueItem>& catalogue) {
    if (dims.first < 1 || dims.second < 1) return 0;
    if (!fits_catalogue(static_cast<double>(dims.first), static_cast<double>(dims.second),
                        catalogue))
        return 0;
    return static_cast<double>(unit_cost) * static_cast<double>(dims.first) *
           static_cast<double>(dims.second);
}

void check_limits_instance(const Instance& inst, const OracleLimits& limits) {
    if (inst.periods() > limits.max_periods)
        throw OracleLimitError("instance exceeds the oracle period cap");
    for (int s = inst.first_instant; s < inst.last_instant; ++s) {
        if (static_cast<int>(inst.orders_at(s).size()) > limits.max_items)
            throw OracleLimitError("instance exceeds the oracle item cap");
        if (static_cast<int>(inst.purchasable_at(s).size()) > limits.max_objects)
            throw OracleLimitError("instance exceeds the oracle object cap");
        for (const auto& obj : inst.purchasable_at(s))
            if (obj.width > limits.max_dim || obj.height > limits.max_dim)
                throw OracleLimitError("instance exceeds the oracle dimension cap");
        for (const auto& item : inst.orders_at(s))
            if (item.width > limits.max_dim || item.height > limits.max_dim)
                throw OracleLimitError("instance exceeds the oracle dimension cap");
    }
}

std::int64_t int_dim(double v) { return static_cast<std::int64_t>(std::llround(v)); }

// A leftover that fits no later item and no catalogue item can never host
// anything nor carry value; its exact dimensions are irrelevant.
class DeadCheck {
  public:
    explicit DeadCheck(const Instance& inst) : inst_(&inst) {}
    DeadCheck() = default;

    bool dead(int born, double w, double h) const {
        if (w < 1 - 1e-9 || h < 1 - 1e-9) return true;
        if (fits_catalogue(w, h, inst_->catalogue)) return false;
        for (int s = std::max(born, inst_->first_instant); s < inst_->last_instant; ++s)
            for (const auto& item : inst_->orders_at(s))
                if (item.width <= w + 1e-9 && item.height <= h + 1e-9) return false;
        return true;
    }

    Dims canonical(int born, const Dims& d) const {
        return dead(born, static_cast<double>(d.first), static_cast<double>(d.second))
                   ? Dims{0, 0}
                   : d;
    }

  private:
    const Instance* inst_ = nullptr;
};

// Enumerates the decisions of one period over a realized pool.
class PeriodEnumerator {
  public:
    PeriodEnumerator(Packer& packer, const ObjectPool& pool,
                     const std::vector<OrderedItem>& items, const OracleLimits& limits)
        : packer_(packer), pool_(pool), items_(items) {
        if (static_cast<int>(items.size()) > limits.max_items)
            throw OracleLimitError("period exceeds the oracle item cap");
        for (int j = 0; j < pool.size(); ++j)
            if (pool.objects[j].positive()) live_.push_back(j);
        if (static_cast<int>(live_.size()) > 6 * limits.max_objects)
            throw OracleLimitError("pool exceeds the oracle live-object cap");
    }

    // all assignments item -> live slot (fit-checked, identical items in
    // non-decreasing slot order), sorted by purchase cost
    std::vector<std::vector<int>> assignments() {
        std::vector<std::vector<int>> result;
        std::vector<int> current(items_.size(), -1);
        std::vector<int> positions(items_.size(), 0);
        enumerate(0, current, positions, result);
        std::stable_sort(result.begin(), result.end(),
                         [&](const std::vector<int>& a, const std::vector<int>& b) {
                             return purchase_cost(a) < purchase_cost(b);
                         });
        return result;
    }

    std::int64_t purchase_cost(const std::vector<int>& assign) const {
        std::int64_t cost = 0;
        std::vector<char> used(pool_.size(), 0);
        for (int j : assign)
            if (j >= 0 && j < pool_.purchasable_count && !used[j]) {
                used[j] = 1;
                cost += pool_.objects[j].unit_cost * int_dim(pool_.objects[j].area());
            }
        return cost;
    }

    // per-slot pattern options for the items assigned to it (memoized)
    const std::vector<PatternOption>& options_for(int slot, const std::vector<int>& assign) {
        std::uint64_t mask = 0;
        for (size_t i = 0; i < assign.size(); ++i)
            if (assign[i] == slot) mask |= std::uint64_t{1} << i;
        auto key = std::make_pair(slot, mask);
        auto it = option_memo_.find(key);
        if (it != option_memo_.end()) return it->second;
        std::vector<Dims> dims;
        for (size_t i = 0; i < assign.size(); ++i)
            if (assign[i] == slot) dims.push_back({items_[i].width, items_[i].height});
        ObjectInfo obj{int_dim(pool_.objects[slot].width), int_dim(pool_.objects[slot].height),
                       pool_.objects[slot].unit_cost};
        return option_memo_.emplace(key, pattern_options(packer_, obj, dims)).first->second;
    }

    PeriodDecision base_decision(const std::vector<int>& assign) const {
        PeriodDecision dec;
        dec.objects.resize(pool_.size());
        dec.items.resize(items_.size());
        for (size_t i = 0; i < assign.size(); ++i) dec.items[i].object = assign[i];
        return dec;
    }

    void apply_option(PeriodDecision& dec, int slot, const std::vector<int>& assign,
                      const PatternOption& option) const {
        ObjectUse& use = dec.objects[slot];
        use.used = true;
        use.vertical_first = option.vertical_first;
        use.t = static_cast<double>(option.t);
        use.r = static_cast<double>(option.r);
        int k = 0;
        for (size_t i = 0; i < assign.size(); ++i) {
            if (assign[i] != slot) continue;
            dec.items[i].x = static_cast<double>(option.placement.at[k].first) +
                             static_cast<double>(items_[i].width) / 2.0;
            dec.items[i].y = static_cast<double>(option.placement.at[k].second) +
                             static_cast<double>(items_[i].height) / 2.0;
            ++k;
        }
    }

    const std::vector<int>& live() const { return live_; }
    const ObjectPool& pool() const { return pool_; }

  private:
    void enumerate(size_t i, std::vector<int>& current, std::vector<int>& positions,
                   std::vector<std::vector<int>>& out) {
        if (i == items_.size()) {
            out.push_back(current);
            return;
        }
        // identical items are interchangeable; force non-decreasing slots
        int start = 0;
        if (i > 0 && items_[i] == items_[i - 1]) start = positions[i - 1];
        for (int pos = start; pos < static_cast<int>(live_.size()); ++pos) {
            int j = live_[pos];
            if (items_[i].width > pool_.objects[j].width + 1e-9 ||
                items_[i].height > pool_.objects[j].height + 1e-9)
                continue;
            current[i] = j;
            positions[i] = pos;
            enumerate(i + 1, current, positions, out);
        }
        current[i] = -1;
        if (out.size() > 2'000'000) throw OracleLimitError("assignment enumeration exploded");
    }

    Packer& packer_;
    const ObjectPool& pool_;
    const std::vector<OrderedItem>& items_;
    std::vector<int> live_;
    std::map<std::pair<int, std::uint64_t>, std::vector<PatternOption>> option_memo_;
};

}  // namespace

SinglePeriodResult exact_single_period(const SubproblemState& st, const OracleLimits& limits) {
    for (const ObjectState& obj : st.pool.objects) {
        if (obj.width > static_cast<double>(limits.max_dim) + 1e-9 ||
            obj.height > static_cast<double>(limits.max_dim) + 1e-9)
            throw OracleLimitError("pool exceeds the oracle dimension cap");
        if (std::abs(obj.width - std::round(obj.width)) > 1e-9 ||
            std::abs(obj.height - std::round(obj.height)) > 1e-9)
            throw OracleLimitError("the oracle requires integral pool dimensions");
    }
    Packer packer;
    PeriodEnumerator period(packer, st.pool, st.orders, limits);

    SinglePeriodResult best;
    double C = static_cast<double>(st.cumulative_cost);
    for (const std::vector<int>& assign : period.assignments()) {
        PeriodDecision dec = period.base_decision(assign);
        double objective = C * static_cast<double>(period.purchase_cost(assign));
        bool ok = true;
        std::set<int> used(assign.begin(), assign.end());
        for (int slot : used) {
            if (slot < 0) continue;
            const auto& options = period.options_for(slot, assign);
            if (options.empty()) {
                ok = false;
                break;
            }
            // this period's children are the end of the subproblem horizon:
            // only their value matters, so the best-value pattern is enough
            const PatternOption* pick = nullptr;
            double pick_value = -1;
            for (const PatternOption& option : options) {
                double value =
                    child_value(option.top, st.pool.objects[slot].unit_cost, st.catalogue) +
                    child_value(option.right, st.pool.objects[slot].unit_cost, st.catalogue);
                if (value > pick_value + 1e-9) {
                    pick_value = value;
                    pick = &option;
                }
            }
            period.apply_option(dec, slot, assign, *pick);
            objective -= pick_value;
        }
        if (!ok) continue;
        // unused leftovers with remaining validity survive as their own top
        // leftover and keep their value at the subproblem horizon
        for (int j = st.pool.purchasable_count; j < st.pool.size(); ++j) {
            if (used.count(j)) continue;
            const ObjectState& obj = st.pool.objects[j];
            if (obj.expiration > 0) objective -= leftover_value(obj, st.catalogue);
        }
        if (!best.feasible || objective < best.objective - 1e-9) {
            best.feasible = true;
            best.objective = objective;
            best.decision = dec;
        }
    }
    return best;
}

namespace {

struct SeenBucket {
    std::map<std::vector<std::int64_t>, std::int64_t> exact;  // signature -> min cost
    std::vector<std::pair<std::vector<std::int64_t>, std::int64_t>> pareto;
};

struct SearchState {
    const Instance* inst = nullptr;
    OracleLimits limits;
    Packer packer;
    DeadCheck dead;
    std::optional<Plan> best;
    std::vector<SeenBucket> seen;

    // canonical pool signature: dead leftovers collapse to zero
    std::vector<std::int64_t> signature(const ObjectPool& pool) const {
        std::vector<std::int64_t> sig;
        sig.reserve(2 * pool.objects.size());
        for (const ObjectState& obj : pool.objects) {
            Dims c = dead.canonical(pool.instant,
                                    Dims{int_dim(obj.width), int_dim(obj.height)});
            sig.push_back(c.first);
            sig.push_back(c.second);
        }
        return sig;
    }

    bool dominated(int instant, const std::vector<std::int64_t>& sig, std::int64_t cost) {
        SeenBucket& bucket = seen[instant - inst->first_instant];
        auto [it, inserted] = bucket.exact.try_emplace(sig, cost);
        if (!inserted) {
            if (it->second <= cost) return true;
            it->second = cost;
        }
        for (const auto& [d, c] : bucket.pareto) {
            if (c > cost || d.size() != sig.size()) continue;
            bool ge = true;
            for (size_t k = 0; k < sig.size(); ++k)
                if (d[k] < sig[k]) {
                    ge = false;
                    break;
                }
            if (ge && !(d == sig)) return true;
        }
        if (bucket.pareto.size() < 20000) bucket.pareto.push_back({sig, cost});
        return false;
    }
};

void search(SearchState& state, const ObjectPool& pool, std::int64_t cost,
            std::vector<PeriodDecision>& decisions) {
    const Instance& inst = *state.inst;
    int s = pool.instant;
    if (state.best && cost > state.best->purchased_cost) return;
    if (s == inst.last_instant) {
        Plan plan = assemble_plan(inst, decisions);
        if (!state.best || plan.better_than(*state.best)) state.best = plan;
        return;
    }
    if (state.dominated(s, state.signature(pool), cost)) return;
    bool final_period = s == inst.last_instant - 1;

    PeriodEnumerator period(state.packer, pool, inst.orders_at(s), state.limits);
    for (const std::vector<int>& assign : period.assignments()) {
        std::int64_t added = period.purchase_cost(assign);
        if (state.best && cost + added > state.best->purchased_cost) break;  // sorted by cost
        std::vector<int> slots;
        for (int j : assign)
            if (j >= 0 && std::find(slots.begin(), slots.end(), j) == slots.end())
                slots.push_back(j);
        std::sort(slots.begin(), slots.end());

        // per-slot options, reduced to the undominated canonical child pairs;
        // on the final period only the best-value pattern can matter
        std::vector<std::vector<const PatternOption*>> options(slots.size());
        bool ok = true;
        for (size_t k = 0; k < slots.size() && ok; ++k) {
            const auto& all = period.options_for(slots[k], assign);
            if (all.empty()) {
                ok = false;
                break;
            }
            if (final_period) {
                const PatternOption* pick = nullptr;
                double pick_value = -1;
                std::int64_t c = pool.objects[slots[k]].unit_cost;
                for (const PatternOption& option : all) {
                    double value = child_value(option.top, c, inst.catalogue) +
                                   child_value(option.right, c, inst.catalogue);
                    if (value > pick_value + 1e-9) {
                        pick_value = value;
                        pick = &option;
                    }
                }
                options[k].push_back(pick);
                continue;
            }
            std::vector<std::array<std::int64_t, 4>> kept;
            for (const PatternOption& option : all) {
                Dims top = state.dead.canonical(s + 1, option.top);
                Dims right = state.dead.canonical(s + 1, option.right);
                std::array<std::int64_t, 4> tuple{top.first, top.second, right.first,
                                                  right.second};
                bool dominated_tuple = false;
                for (const auto& other : kept) {
                    bool ge = true;
                    for (int q = 0; q < 4; ++q)
                        if (other[q] < tuple[q]) {
                            ge = false;
                            break;
                        }
                    if (ge) {
                        dominated_tuple = true;
                        break;
                    }
                }
                if (dominated_tuple) continue;
                kept.push_back(tuple);
                options[k].push_back(&option);
            }
        }
        if (!ok) continue;

        std::vector<size_t> pick(slots.size(), 0);
        while (true) {
            PeriodDecision dec = period.base_decision(assign);
            for (size_t k = 0; k < slots.size(); ++k)
                period.apply_option(dec, slots[k], assign, *options[k][pick[k]]);
            decisions.push_back(dec);
            ObjectPool next = spawn_pool(pool, dec, inst.purchasable_at(s + 1), inst.xi);
            search(state, next, cost + added, decisions);
            decisions.pop_back();

            size_t k = 0;
            while (k < pick.size() && ++pick[k] == options[k].size()) {
                pick[k] = 0;
                ++k;
            }
            if (k == pick.size()) break;
        }
    }
}

}  // namespace

std::optional<Plan> exact_multi_period(const Instance& inst, const OracleLimits& limits) {
    check_limits_instance(inst, limits);
    SearchState state;
    state.inst = &inst;
    state.limits = limits;
    state.dead = DeadCheck(inst);
    state.seen.resize(inst.periods());
    std::vector<PeriodDecision> decisions;
    search(state, initial_pool(inst), 0, decisions);
    return state.best;
}

}  // namespace cutplan
