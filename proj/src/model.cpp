#include "cutplan/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cutplan {

int ModelSpec::add_var(std::string name, VarKind kind, double lb, double ub, VarInfo vi) {
    vars.push_back(VariableDef{std::move(name), kind, lb, ub});
    info.push_back(vi);
    return static_cast<int>(vars.size()) - 1;
}

void ModelSpec::add_row(std::vector<Term> terms, RowSense sense, double rhs) {
    rows.push_back(LinearRow{std::move(terms), sense, rhs});
}

int ModelSpec::binary_count() const {
    return static_cast<int>(
        std::count_if(vars.begin(), vars.end(),
                      [](const VariableDef& v) { return v.kind == VarKind::Binary; }));
}

int ModelSpec::integer_count() const {
    return static_cast<int>(
        std::count_if(vars.begin(), vars.end(),
                      [](const VariableDef& v) { return v.kind == VarKind::Integer; }));
}

int ModelSpec::continuous_count() const {
    return static_cast<int>(
        std::count_if(vars.begin(), vars.end(),
                      [](const VariableDef& v) { return v.kind == VarKind::Continuous; }));
}

int ModelSpec::find_var(VarRole role, int s, int i, int j, int l) const {
    for (int k = 0; k < var_count(); ++k) {
        const VarInfo& vi = info[k];
        if (vi.role == role && vi.s == s && vi.i == i && vi.j == j && vi.l == l) return k;
    }
    return -1;
}

double ModelSpec::evaluate_objective(const std::vector<double>& assignment) const {
    double total = objective_constant;
    for (const Term& term : objective) total += term.coef * assignment.at(term.var);
    return total;
}

namespace {

std::string idx_name(const char* base, std::initializer_list<int> idx) {
    std::string name = base;
    for (int v : idx) {
        name += '_';
        name += std::to_string(v);
    }
    return name;
}

// A variable reference or a fixed value; constants are folded into row rhs.
struct VC {
    int var = -1;
    double value = 0;

    static VC of_var(int v) { return VC{v, 0}; }
    static VC of_const(double c) { return VC{-1, c}; }
};

class RowBuilder {
  public:
    explicit RowBuilder(ModelSpec& ms) : ms_(ms) {}

    RowBuilder& add(int var, double coef) {
        if (coef != 0) terms_.push_back({var, coef});
        return *this;
    }
    RowBuilder& add(const VC& vc, double coef) {
        if (vc.var >= 0)
            add(vc.var, coef);
        else
            shift_ -= coef * vc.value;
        return *this;
    }
    void le(double rhs) { ms_.add_row(std::move(terms_), RowSense::Le, rhs + shift_); }
    void ge(double rhs) { ms_.add_row(std::move(terms_), RowSense::Ge, rhs + shift_); }
    void eq(double rhs) { ms_.add_row(std::move(terms_), RowSense::Eq, rhs + shift_); }

  private:
    ModelSpec& ms_;
    std::vector<Term> terms_;
    double shift_ = 0;
};

// Links the dimensions of the two leftovers of a generator to its pre-cut
// variables. `survives` distinguishes leftover generators (an unused leftover
// passes to the next instant as its own top leftover) from purchasable ones
// (leftovers of an unpurchased object have null dimensions).
void emit_leftover_links(ModelSpec& ms, bool survives, VC wp, VC hp, int u, int eta, int t, int r,
                         int w1, int h1, int w2, int h2, double W, double H) {
    if (survives) {
        RowBuilder(ms).add(h1, 1).add(hp, -1).add(u, H).ge(0);
        RowBuilder(ms).add(h1, 1).add(hp, -1).add(u, -H).le(0);
    } else {
        RowBuilder(ms).add(h1, 1).add(u, -H).le(0);
    }
    RowBuilder(ms).add(h1, 1).add(t, -1).add(u, -H).ge(-H);
    RowBuilder(ms).add(h1, 1).add(t, -1).add(u, H).le(H);
    if (survives) {
        RowBuilder(ms).add(w1, 1).add(wp, -1).add(u, W).ge(0);
        RowBuilder(ms).add(w1, 1).add(wp, -1).add(u, -W).le(0);
    } else {
        RowBuilder(ms).add(w1, 1).add(u, -W).le(0);
    }
    RowBuilder(ms).add(w1, 1).add(wp, -1).add(r, 1).add(eta, -W).add(u, -W).ge(-2 * W);
    RowBuilder(ms).add(w1, 1).add(wp, -1).add(r, 1).add(eta, W).add(u, W).le(2 * W);
    RowBuilder(ms).add(w1, 1).add(wp, -1).add(eta, W).add(u, -W).ge(-W);
    RowBuilder(ms).add(w1, 1).add(wp, -1).add(eta, -W).add(u, W).le(W);
    RowBuilder(ms).add(w2, 1).add(u, -W).le(0);
    RowBuilder(ms).add(w2, 1).add(r, -1).add(u, -W).ge(-W);
    RowBuilder(ms).add(w2, 1).add(r, -1).add(u, W).le(W);
    RowBuilder(ms).add(h2, 1).add(u, -H).le(0);
    RowBuilder(ms).add(h2, 1).add(hp, -1).add(eta, -H).add(u, -H).ge(-2 * H);
    RowBuilder(ms).add(h2, 1).add(hp, -1).add(eta, H).add(u, H).le(2 * H);
    RowBuilder(ms).add(h2, 1).add(hp, -1).add(t, 1).add(eta, H).add(u, -H).ge(-H);
    RowBuilder(ms).add(h2, 1).add(hp, -1).add(t, 1).add(eta, -H).add(u, H).le(H);
}

// Value machinery for one horizon-end leftover slot: gamma equals the area
// when some catalogue item fits, zero otherwise; the product of the variable
// dimensions is linearized through a bit expansion of the width.
int emit_value_block(ModelSpec& ms, int instant, int slot, int w_var, int h_var,
                     const std::vector<CatalogueItem>& catalogue, double W, double H, int L) {
    int gamma = ms.add_var(idx_name("gamma", {slot}), VarKind::Continuous, 0, W * H,
                           VarInfo{VarRole::Gamma, instant, -1, slot, -1});
    std::vector<int> thetas(L), omegas(L);
    for (int l = 0; l < L; ++l) {
        thetas[l] = ms.add_var(idx_name("theta", {slot, l}), VarKind::Binary, 0, 1,
                               VarInfo{VarRole::Theta, instant, -1, slot, l});
        omegas[l] = ms.add_var(idx_name("omega", {slot, l}), VarKind::Continuous, 0, H,
                               VarInfo{VarRole::Omega, instant, -1, slot, l});
    }
    std::vector<int> zetas(catalogue.size());
    for (size_t i = 0; i < catalogue.size(); ++i)
        zetas[i] = ms.add_var(idx_name("zeta", {slot, static_cast<int>(i)}), VarKind::Binary, 0, 1,
                              VarInfo{VarRole::Zeta, instant, static_cast<int>(i), slot, -1});

    for (int l = 0; l < L; ++l) {
        RowBuilder(ms).add(omegas[l], 1).add(h_var, -1).le(0);
        RowBuilder(ms).add(omegas[l], 1).add(h_var, -1).add(thetas[l], -H).ge(-H);
        RowBuilder(ms).add(omegas[l], 1).add(thetas[l], -H).le(0);
    }
    for (size_t i = 0; i < catalogue.size(); ++i) {
        RowBuilder(ms).add(zetas[i], W).add(w_var, -1).le(W - catalogue[i].width);
        RowBuilder(ms).add(zetas[i], H).add(h_var, -1).le(H - catalogue[i].height);
    }
    {
        RowBuilder rb(ms);
        rb.add(gamma, 1);
        for (int l = 0; l < L; ++l) rb.add(omegas[l], -static_cast<double>(1LL << l));
        rb.le(0);
    }
    // area caps; redundant at integer points but they tighten the relaxation
    RowBuilder(ms).add(gamma, 1).add(w_var, -H).le(0);
    RowBuilder(ms).add(gamma, 1).add(h_var, -W).le(0);
    {
        RowBuilder rb(ms);
        rb.add(gamma, 1);
        for (int z : zetas) rb.add(z, -W * H);
        rb.le(0);
    }
    {
        RowBuilder rb(ms);
        rb.add(w_var, 1);
        for (int l = 0; l < L; ++l) rb.add(thetas[l], -static_cast<double>(1LL << l));
        rb.eq(0);
    }
    return gamma;
}

int bit_count_for(std::int64_t w_hat) {
    int L = 1;
    while ((std::int64_t{1} << L) <= w_hat) ++L;
    return L;  // floor(log2(w_hat)) + 1
}

void check_objective_headroom(std::int64_t scale, std::int64_t max_cost_term) {
    double magnitude = static_cast<double>(scale) * static_cast<double>(max_cost_term);
    if (magnitude > 9.0e15)
        throw ModelBuildError("objective magnitude " + std::to_string(magnitude) +
                              " exceeds the 64-bit headroom");
}

// Sound upper bound on the final leftover value attainable in a (sub)model;
// the scale constant must strictly dominate it for the lexicographic
// composition to work.
void check_dominance(std::int64_t scale, double attainable) {
    if (!(static_cast<double>(scale) > attainable))
        throw ModelBuildError("scale constant " + std::to_string(scale) +
                              " does not dominate attainable leftover value " +
                              std::to_string(attainable));
}

}  // namespace

// Variable convention (also the size-diagnostic counting convention): binaries
// are v (all items x all slots), u (all slots, including leftover slots), eta,
// pi, tau, theta, zeta; continuous are t, r, the widths/heights of every slot
// at every instant (purchasable ones fixed through equal bounds), item centers
// x/y, gamma and omega.
ModelSpec build_full_model(const Instance& inst) {
    int p = inst.first_instant;
    int P = inst.last_instant;
    if (P - p < 1) throw ModelBuildError("instance has no periods");

    std::int64_t w_hat = 0, h_hat = 0;
    for (int s = p; s < P; ++s)
        for (const auto& obj : inst.purchasable_at(s)) {
            w_hat = std::max(w_hat, obj.width);
            h_hat = std::max(h_hat, obj.height);
        }
    if (w_hat == 0) throw ModelBuildError("instance has no purchasable objects");
    double W = static_cast<double>(w_hat), H = static_cast<double>(h_hat);
    int L = bit_count_for(w_hat);

    ModelSpec ms;
    ms.scale_constant = inst.cumulative_object_cost(P - 1);
    ms.w_hat = w_hat;
    ms.h_hat = h_hat;
    ms.bit_count = L;
    check_objective_headroom(ms.scale_constant, ms.scale_constant);

    // static slot layout: expiration and lineage are fully determined by the
    // purchasable counts and xi
    struct Slot {
        bool purchasable;
        int expiration;
        std::int64_t unit_cost;
        std::int64_t fixed_w = 0, fixed_h = 0;
    };
    std::vector<std::vector<Slot>> layout(P - p + 1);
    for (int s = p; s <= P; ++s) {
        for (const auto& obj : inst.purchasable_at(s))
            layout[s - p].push_back(Slot{true, inst.xi, obj.unit_cost, obj.width, obj.height});
        if (s > p)
            for (const Slot& parent : layout[s - p - 1])
                if (parent.expiration > 0) {
                    layout[s - p].push_back(
                        Slot{false, parent.expiration - 1, parent.unit_cost});
                    layout[s - p].push_back(
                        Slot{false, parent.expiration - 1, parent.unit_cost});
                }
    }

    // variables
    std::vector<std::vector<int>> u(P - p), eta(P - p), t(P - p), r(P - p);
    std::vector<std::vector<int>> wv(P - p + 1), hv(P - p + 1);
    std::vector<std::vector<std::vector<int>>> v(P - p);  // [s][i][j]
    std::vector<std::vector<int>> xv(P - p), yv(P - p);
    // pi/tau indexed by (i, i') flattened
    std::vector<std::vector<std::vector<int>>> pi(P - p), tau(P - p);

    for (int s = p; s <= P; ++s) {
        int sp = s - p;
        const auto& slots = layout[sp];
        for (int j = 0; j < static_cast<int>(slots.size()); ++j) {
            double lw = slots[j].purchasable ? static_cast<double>(slots[j].fixed_w) : 0;
            double uw = slots[j].purchasable ? static_cast<double>(slots[j].fixed_w) : W;
            double lh = slots[j].purchasable ? static_cast<double>(slots[j].fixed_h) : 0;
            double uh = slots[j].purchasable ? static_cast<double>(slots[j].fixed_h) : H;
            wv[sp].push_back(ms.add_var(idx_name("W", {s, j}), VarKind::Continuous, lw, uw,
                                        VarInfo{VarRole::Width, s, -1, j, -1}));
            hv[sp].push_back(ms.add_var(idx_name("H", {s, j}), VarKind::Continuous, lh, uh,
                                        VarInfo{VarRole::Height, s, -1, j, -1}));
        }
        if (s == P) break;
        int n = static_cast<int>(inst.orders_at(s).size());
        int slots_n = static_cast<int>(slots.size());
        for (int j = 0; j < slots_n; ++j) {
            u[sp].push_back(ms.add_var(idx_name("u", {s, j}), VarKind::Binary, 0, 1,
                                       VarInfo{VarRole::UseU, s, -1, j, -1}));
            eta[sp].push_back(ms.add_var(idx_name("eta", {s, j}), VarKind::Binary, 0, 1,
                                         VarInfo{VarRole::Eta, s, -1, j, -1}));
            t[sp].push_back(ms.add_var(idx_name("t", {s, j}), VarKind::Continuous, 0, H,
                                       VarInfo{VarRole::PrecutT, s, -1, j, -1}));
            r[sp].push_back(ms.add_var(idx_name("r", {s, j}), VarKind::Continuous, 0, W,
                                       VarInfo{VarRole::PrecutR, s, -1, j, -1}));
        }
        v[sp].resize(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < slots_n; ++j)
                v[sp][i].push_back(ms.add_var(idx_name("v", {s, i, j}), VarKind::Binary, 0, 1,
                                              VarInfo{VarRole::AssignV, s, i, j, -1}));
        for (int i = 0; i < n; ++i) {
            const OrderedItem& item = inst.orders_at(s)[i];
            double hw = item.width / 2.0, hh = item.height / 2.0;
            xv[sp].push_back(ms.add_var(idx_name("x", {s, i}), VarKind::Continuous, hw, W - hw,
                                        VarInfo{VarRole::PosX, s, i, -1, -1}));
            yv[sp].push_back(ms.add_var(idx_name("y", {s, i}), VarKind::Continuous, hh, H - hh,
                                        VarInfo{VarRole::PosY, s, i, -1, -1}));
        }
        pi[sp].assign(n, {});
        tau[sp].assign(n, {});
        for (int i = 0; i < n; ++i)
            for (int i2 = i + 1; i2 < n; ++i2) {
                pi[sp][i].push_back(ms.add_var(idx_name("pi", {s, i, i2}), VarKind::Binary, 0, 1,
                                               VarInfo{VarRole::OverlapPi, s, i, i2, -1}));
                tau[sp][i].push_back(ms.add_var(idx_name("tau", {s, i, i2}), VarKind::Binary, 0,
                                                1, VarInfo{VarRole::OverlapTau, s, i, i2, -1}));
            }
    }

    // rows per period
    for (int s = p; s < P; ++s) {
        int sp = s - p;
        const auto& slots = layout[sp];
        const auto& items = inst.orders_at(s);
        int n = static_cast<int>(items.size());
        int slots_n = static_cast<int>(slots.size());

        for (int i = 0; i < n; ++i) {
            RowBuilder rb(ms);
            for (int j = 0; j < slots_n; ++j) rb.add(v[sp][i][j], 1);
            rb.eq(1);
        }
        for (int j = 0; j < slots_n; ++j) {
            for (int i = 0; i < n; ++i)
                RowBuilder(ms).add(v[sp][i][j], 1).add(u[sp][j], -1).le(0);
            RowBuilder rb(ms);
            rb.add(u[sp][j], 1);
            for (int i = 0; i < n; ++i) rb.add(v[sp][i][j], -1);
            rb.le(0);
        }
        for (int j = 0; j < slots_n; ++j) {
            RowBuilder(ms).add(t[sp][j], 1).add(hv[sp][j], -1).le(0);
            RowBuilder(ms).add(r[sp][j], 1).add(wv[sp][j], -1).le(0);
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < slots_n; ++j) {
                RowBuilder(ms)
                    .add(xv[sp][i], 1)
                    .add(r[sp][j], 1)
                    .add(wv[sp][j], -1)
                    .add(v[sp][i][j], W)
                    .le(W - items[i].width / 2.0);
                RowBuilder(ms)
                    .add(yv[sp][i], 1)
                    .add(t[sp][j], 1)
                    .add(hv[sp][j], -1)
                    .add(v[sp][i][j], H)
                    .le(H - items[i].height / 2.0);
            }
        for (int j = 0; j < slots_n; ++j)
            for (int i = 0; i < n; ++i)
                for (int i2 = i + 1; i2 < n; ++i2) {
                    int pij = pi[sp][i][i2 - i - 1], tauij = tau[sp][i][i2 - i - 1];
                    double wsum = (items[i].width + items[i2].width) / 2.0;
                    double hsum = (items[i].height + items[i2].height) / 2.0;
                    RowBuilder(ms)
                        .add(xv[sp][i], 1)
                        .add(xv[sp][i2], -1)
                        .add(v[sp][i][j], -W)
                        .add(v[sp][i2][j], -W)
                        .add(pij, W)
                        .add(tauij, W)
                        .ge(wsum - 2 * W);
                    RowBuilder(ms)
                        .add(xv[sp][i2], 1)
                        .add(xv[sp][i], -1)
                        .add(v[sp][i][j], -W)
                        .add(v[sp][i2][j], -W)
                        .add(pij, W)
                        .add(tauij, -W)
                        .ge(wsum - 3 * W);
                    RowBuilder(ms)
                        .add(yv[sp][i], 1)
                        .add(yv[sp][i2], -1)
                        .add(v[sp][i][j], -H)
                        .add(v[sp][i2][j], -H)
                        .add(pij, -H)
                        .add(tauij, H)
                        .ge(hsum - 3 * H);
                    RowBuilder(ms)
                        .add(yv[sp][i2], 1)
                        .add(yv[sp][i], -1)
                        .add(v[sp][i][j], -H)
                        .add(v[sp][i2][j], -H)
                        .add(pij, -H)
                        .add(tauij, -H)
                        .ge(hsum - 4 * H);
                }

        // leftover links; generator order is the paper's: ascending slot index
        int m_next = static_cast<int>(inst.purchasable_at(s + 1).size());
        int k = 0;
        for (int j = 0; j < slots_n; ++j) {
            if (slots[j].expiration <= 0) continue;
            int l1 = m_next + 2 * k, l2 = l1 + 1;
            emit_leftover_links(ms, !slots[j].purchasable, VC::of_var(wv[sp][j]),
                                VC::of_var(hv[sp][j]), u[sp][j], eta[sp][j], t[sp][j], r[sp][j],
                                wv[sp + 1][l1], hv[sp + 1][l1], wv[sp + 1][l2], hv[sp + 1][l2], W,
                                H);
            ++k;
        }
    }

    // horizon-end leftover values
    std::vector<int> gammas;
    const auto& final_slots = layout[P - p];
    for (int j = 0; j < static_cast<int>(final_slots.size()); ++j)
        gammas.push_back(emit_value_block(ms, P, j, wv[P - p][j], hv[P - p][j], inst.catalogue, W,
                                          H, L));
    {
        // area budget at the last period: each generator's two final leftovers
        // and the items cut from it share the object's area
        int sp = P - 1 - p;
        const auto& slots = layout[sp];
        const auto& items = inst.orders_at(P - 1);
        int k = 0;
        for (int j = 0; j < static_cast<int>(slots.size()); ++j) {
            if (slots[j].expiration <= 0) continue;
            int l1 = 2 * k, l2 = 2 * k + 1;
            if (slots[j].purchasable) {
                RowBuilder rb(ms);
                rb.add(gammas[l1], 1).add(gammas[l2], 1);
                for (int i = 0; i < static_cast<int>(items.size()); ++i)
                    rb.add(v[sp][i][j], static_cast<double>(items[i].area()));
                rb.le(static_cast<double>(slots[j].fixed_w * slots[j].fixed_h));
            } else {
                RowBuilder rb(ms);
                rb.add(gammas[l1], 1).add(gammas[l2], 1);
                for (int i = 0; i < static_cast<int>(items.size()); ++i)
                    rb.add(v[sp][i][j], static_cast<double>(items[i].area()));
                rb.add(hv[sp][j], -W);
                rb.le(0);
            }
            ++k;
        }
    }

    // objective: purchased cost scaled by C, minus the final leftover value
    double attainable = 0;
    for (int s = p; s < P; ++s) {
        int sp = s - p;
        const auto& objs = inst.purchasable_at(s);
        for (int j = 0; j < static_cast<int>(objs.size()); ++j) {
            std::int64_t cost = objs[j].cost();
            ms.objective.push_back(
                {u[sp][j], static_cast<double>(ms.scale_constant) * static_cast<double>(cost)});
            std::int64_t min_item = std::numeric_limits<std::int64_t>::max();
            for (const auto& item : inst.orders_at(s))
                if (item.width <= objs[j].width && item.height <= objs[j].height)
                    min_item = std::min(min_item, item.area());
            if (min_item != std::numeric_limits<std::int64_t>::max())
                attainable += static_cast<double>(objs[j].unit_cost) *
                              static_cast<double>(objs[j].area() - min_item);
        }
    }
    for (int j = 0; j < static_cast<int>(final_slots.size()); ++j)
        ms.objective.push_back({gammas[j], -static_cast<double>(final_slots[j].unit_cost)});
    check_dominance(ms.scale_constant, attainable);
    return ms;
}

SubproblemState make_subproblem_state(const Instance& inst, int kappa, const ObjectPool& pool) {
    SubproblemState st;
    st.instant = kappa;
    st.pool = pool;
    st.orders = inst.orders_at(kappa);
    st.catalogue = inst.catalogue;
    st.cumulative_cost = inst.cumulative_object_cost(kappa);
    return st;
}

namespace {

ModelSpec build_subproblem(const SubproblemState& st, const std::vector<double>* delta) {
    const ObjectPool& pool = st.pool;
    int kappa = st.instant;
    int m = pool.purchasable_count;

    std::int64_t w_hat = 1, h_hat = 1;
    for (const ObjectState& obj : pool.objects) {
        w_hat = std::max(w_hat, static_cast<std::int64_t>(std::ceil(obj.width)));
        h_hat = std::max(h_hat, static_cast<std::int64_t>(std::ceil(obj.height)));
    }
    double W = static_cast<double>(w_hat), H = static_cast<double>(h_hat);
    int L = bit_count_for(w_hat);

    ModelSpec ms;
    ms.scale_constant = st.cumulative_cost;
    ms.w_hat = w_hat;
    ms.h_hat = h_hat;
    ms.bit_count = L;
    check_objective_headroom(ms.scale_constant, ms.scale_constant);
    if (delta) {
        if (static_cast<int>(delta->size()) != 2 * m)
            throw ModelBuildError("expected one delta per first-order leftover (2 m_kappa)");
        for (double d : *delta)
            if (!(d >= 0.0 && d <= 1.0)) throw ModelBuildError("delta outside [0, 1]");
    }

    int n = static_cast<int>(st.orders.size());
    int slots_n = pool.size();

    std::vector<int> uv(slots_n, -1), etav(slots_n, -1), tv(slots_n, -1), rv(slots_n, -1);
    std::vector<std::vector<int>> vv(n, std::vector<int>(slots_n, -1));
    std::vector<int> xvv(n, -1), yvv(n, -1);

    auto targetable = [&](int j) { return pool.objects[j].positive(); };

    for (int j = 0; j < slots_n; ++j) {
        if (!targetable(j)) continue;
        uv[j] = ms.add_var(idx_name("u", {kappa, j}), VarKind::Binary, 0, 1,
                           VarInfo{VarRole::UseU, kappa, -1, j, -1});
        etav[j] = ms.add_var(idx_name("eta", {kappa, j}), VarKind::Binary, 0, 1,
                             VarInfo{VarRole::Eta, kappa, -1, j, -1});
        tv[j] = ms.add_var(idx_name("t", {kappa, j}), VarKind::Continuous, 0,
                           pool.objects[j].height, VarInfo{VarRole::PrecutT, kappa, -1, j, -1});
        rv[j] = ms.add_var(idx_name("r", {kappa, j}), VarKind::Continuous, 0,
                           pool.objects[j].width, VarInfo{VarRole::PrecutR, kappa, -1, j, -1});
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < slots_n; ++j) {
            if (!targetable(j)) continue;
            if (st.orders[i].width > pool.objects[j].width + 1e-9 ||
                st.orders[i].height > pool.objects[j].height + 1e-9)
                continue;  // cannot fit even with null pre-cuts
            vv[i][j] = ms.add_var(idx_name("v", {kappa, i, j}), VarKind::Binary, 0, 1,
                                  VarInfo{VarRole::AssignV, kappa, i, j, -1});
        }
    for (int i = 0; i < n; ++i) {
        double hw = st.orders[i].width / 2.0, hh = st.orders[i].height / 2.0;
        xvv[i] = ms.add_var(idx_name("x", {kappa, i}), VarKind::Continuous, hw, W - hw,
                            VarInfo{VarRole::PosX, kappa, i, -1, -1});
        yvv[i] = ms.add_var(idx_name("y", {kappa, i}), VarKind::Continuous, hh, H - hh,
                            VarInfo{VarRole::PosY, kappa, i, -1, -1});
    }
    std::vector<std::vector<int>> piv(n), tauv(n);
    for (int i = 0; i < n; ++i)
        for (int i2 = i + 1; i2 < n; ++i2) {
            piv[i].push_back(ms.add_var(idx_name("pi", {kappa, i, i2}), VarKind::Binary, 0, 1,
                                        VarInfo{VarRole::OverlapPi, kappa, i, i2, -1}));
            tauv[i].push_back(ms.add_var(idx_name("tau", {kappa, i, i2}), VarKind::Binary, 0, 1,
                                         VarInfo{VarRole::OverlapTau, kappa, i, i2, -1}));
        }

    for (int i = 0; i < n; ++i) {
        RowBuilder rb(ms);
        bool any = false;
        for (int j = 0; j < slots_n; ++j)
            if (vv[i][j] >= 0) {
                rb.add(vv[i][j], 1);
                any = true;
            }
        rb.eq(1);  // infeasible row when the item fits nothing
        (void)any;
    }
    for (int j = 0; j < slots_n; ++j) {
        if (uv[j] < 0) continue;
        RowBuilder rb(ms);
        rb.add(uv[j], 1);
        for (int i = 0; i < n; ++i)
            if (vv[i][j] >= 0) {
                RowBuilder(ms).add(vv[i][j], 1).add(uv[j], -1).le(0);
                rb.add(vv[i][j], -1);
            }
        rb.le(0);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < slots_n; ++j) {
            if (vv[i][j] < 0) continue;
            const ObjectState& obj = pool.objects[j];
            RowBuilder(ms)
                .add(xvv[i], 1)
                .add(rv[j], 1)
                .add(vv[i][j], W)
                .le(W - st.orders[i].width / 2.0 + obj.width);
            RowBuilder(ms)
                .add(yvv[i], 1)
                .add(tv[j], 1)
                .add(vv[i][j], H)
                .le(H - st.orders[i].height / 2.0 + obj.height);
        }
    for (int j = 0; j < slots_n; ++j) {
        if (uv[j] < 0) continue;
        for (int i = 0; i < n; ++i)
            for (int i2 = i + 1; i2 < n; ++i2) {
                if (vv[i][j] < 0 || vv[i2][j] < 0) continue;
                int pij = piv[i][i2 - i - 1], tauij = tauv[i][i2 - i - 1];
                double wsum = (st.orders[i].width + st.orders[i2].width) / 2.0;
                double hsum = (st.orders[i].height + st.orders[i2].height) / 2.0;
                RowBuilder(ms)
                    .add(xvv[i], 1)
                    .add(xvv[i2], -1)
                    .add(vv[i][j], -W)
                    .add(vv[i2][j], -W)
                    .add(pij, W)
                    .add(tauij, W)
                    .ge(wsum - 2 * W);
                RowBuilder(ms)
                    .add(xvv[i2], 1)
                    .add(xvv[i], -1)
                    .add(vv[i][j], -W)
                    .add(vv[i2][j], -W)
                    .add(pij, W)
                    .add(tauij, -W)
                    .ge(wsum - 3 * W);
                RowBuilder(ms)
                    .add(yvv[i], 1)
                    .add(yvv[i2], -1)
                    .add(vv[i][j], -H)
                    .add(vv[i2][j], -H)
                    .add(pij, -H)
                    .add(tauij, H)
                    .ge(hsum - 3 * H);
                RowBuilder(ms)
                    .add(yvv[i2], 1)
                    .add(yvv[i], -1)
                    .add(vv[i][j], -H)
                    .add(vv[i2][j], -H)
                    .add(pij, -H)
                    .add(tauij, -H)
                    .ge(hsum - 4 * H);
            }
    }

    // children at kappa+1 and their values; the subproblem treats kappa+1 as
    // the end of the horizon, so every child slot carries a gamma
    std::vector<int> generators = leftover_generator_indices(pool);
    std::vector<int> gamma_of_slot(slots_n * 2 + 2, -1);
    std::vector<std::int64_t> child_cost;
    std::vector<int> child_gamma;
    double attainable = 0;
    for (int j = 0; j < slots_n; ++j) {
        const ObjectState& obj = pool.objects[j];
        if (!obj.positive() || obj.expiration <= 0) continue;
        if (j < m) {
            // a purchased object loses at least its smallest cuttable item
            double min_item = -1;
            for (const OrderedItem& item : st.orders)
                if (item.width <= obj.width + 1e-9 && item.height <= obj.height + 1e-9)
                    if (min_item < 0 || static_cast<double>(item.area()) < min_item)
                        min_item = static_cast<double>(item.area());
            if (min_item >= 0)
                attainable += static_cast<double>(obj.unit_cost) * (obj.area() - min_item);
        } else {
            attainable += static_cast<double>(obj.unit_cost) * obj.area();  // may survive whole
        }
    }
    int k = 0;
    for (int j : generators) {
        const ObjectState& parent = pool.objects[j];
        int l1 = 2 * k, l2 = 2 * k + 1;
        if (targetable(j)) {
            int w1 = ms.add_var(idx_name("W", {kappa + 1, l1}), VarKind::Continuous, 0, W,
                                VarInfo{VarRole::Width, kappa + 1, -1, l1, -1});
            int h1 = ms.add_var(idx_name("H", {kappa + 1, l1}), VarKind::Continuous, 0, H,
                                VarInfo{VarRole::Height, kappa + 1, -1, l1, -1});
            int w2 = ms.add_var(idx_name("W", {kappa + 1, l2}), VarKind::Continuous, 0, W,
                                VarInfo{VarRole::Width, kappa + 1, -1, l2, -1});
            int h2 = ms.add_var(idx_name("H", {kappa + 1, l2}), VarKind::Continuous, 0, H,
                                VarInfo{VarRole::Height, kappa + 1, -1, l2, -1});
            emit_leftover_links(ms, j >= m, VC::of_const(parent.width),
                                VC::of_const(parent.height), uv[j], etav[j], tv[j], rv[j], w1, h1,
                                w2, h2, W, H);
            int g1 = emit_value_block(ms, kappa + 1, l1, w1, h1, st.catalogue, W, H, L);
            int g2 = emit_value_block(ms, kappa + 1, l2, w2, h2, st.catalogue, W, H, L);
            // the two leftovers and the items cut from the object share its area
            {
                RowBuilder rb(ms);
                rb.add(g1, 1).add(g2, 1);
                for (int i = 0; i < n; ++i)
                    if (vv[i][j] >= 0)
                        rb.add(vv[i][j], static_cast<double>(st.orders[i].area()));
                rb.le(parent.area());
            }
            gamma_of_slot[l1] = g1;
            gamma_of_slot[l2] = g2;
            child_gamma.push_back(g1);
            child_cost.push_back(parent.unit_cost);
            child_gamma.push_back(g2);
            child_cost.push_back(parent.unit_cost);
        }
        ++k;
    }

    // objective (amortized when delta is present)
    std::vector<int> lambdas;
    for (int j = 0; j < m; ++j) {
        const ObjectState& obj = pool.objects[j];
        std::int64_t cost =
            obj.unit_cost * static_cast<std::int64_t>(std::llround(obj.area()));
        ms.objective.push_back(
            {uv[j], static_cast<double>(ms.scale_constant) * static_cast<double>(cost)});
        if (delta) {
            int g1 = gamma_of_slot.size() > static_cast<size_t>(2 * j) ? gamma_of_slot[2 * j] : -1;
            int g2 = g1 >= 0 ? gamma_of_slot[2 * j + 1] : -1;
            double bound_hint = static_cast<double>(obj.unit_cost) * 2.0 * W * H;
            int lam = ms.add_var(idx_name("lambda", {j}), VarKind::Integer, 0,
                                 std::ceil(bound_hint) + 1,
                                 VarInfo{VarRole::Lambda, kappa, -1, j, -1});
            lambdas.push_back(lam);
            RowBuilder rb(ms);
            rb.add(lam, 1);
            double c = static_cast<double>(obj.unit_cost);
            if (g1 >= 0) rb.add(g1, -c * (*delta)[2 * j]);
            if (g2 >= 0) rb.add(g2, -c * (*delta)[2 * j + 1]);
            rb.le(1e-6);  // guard for exact-integer bounds under binary floating point
            // the credit can never exceed the object cost; implied by the
            // leftover geometry but invisible to the relaxation
            RowBuilder(ms).add(lam, 1).add(uv[j], -static_cast<double>(cost)).le(0);
            ms.objective.push_back({lam, -static_cast<double>(ms.scale_constant)});
        }
    }
    for (size_t q = 0; q < child_gamma.size(); ++q)
        ms.objective.push_back({child_gamma[q], -static_cast<double>(child_cost[q])});

    if (!child_gamma.empty()) check_dominance(ms.scale_constant, attainable);
    return ms;
}

}  // namespace

ModelSpec build_myopic_subproblem(const SubproblemState& st) {
    return build_subproblem(st, nullptr);
}

ModelSpec build_flook_subproblem(const SubproblemState& st, const std::vector<double>& delta) {
    return build_subproblem(st, &delta);
}

std::int64_t amortized_cost(std::int64_t unit_cost, std::int64_t width, std::int64_t height,
                            bool used, double delta_top, double gamma_top, double delta_right,
                            double gamma_right) {
    std::int64_t cost_term = used ? unit_cost * width * height : 0;
    double credit = static_cast<double>(unit_cost) *
                    (delta_top * gamma_top + delta_right * gamma_right);
    return cost_term - static_cast<std::int64_t>(std::floor(credit + 1e-9));
}

PeriodDecision decode_decision(const ModelSpec& ms, const std::vector<double>& assignment,
                               const ObjectPool& pool, int item_count) {
    auto value = [&](int var) { return var >= 0 ? assignment.at(var) : 0.0; };
    auto as_bool = [&](int var) { return value(var) > 0.5; };
    auto snap = [](double x) {
        double rounded = std::round(x);
        if (std::abs(x - rounded) < 1e-6) return rounded;
        double half = std::round(2 * x) / 2;
        if (std::abs(x - half) < 1e-6) return half;
        return x;
    };

    PeriodDecision dec;
    dec.objects.resize(pool.size());
    int kappa = pool.instant;
    for (int j = 0; j < pool.size(); ++j) {
        int uj = ms.find_var(VarRole::UseU, kappa, -1, j, -1);
        if (uj < 0 || !as_bool(uj)) continue;
        ObjectUse& use = dec.objects[j];
        use.used = true;
        use.vertical_first = as_bool(ms.find_var(VarRole::Eta, kappa, -1, j, -1));
        use.t = snap(value(ms.find_var(VarRole::PrecutT, kappa, -1, j, -1)));
        use.r = snap(value(ms.find_var(VarRole::PrecutR, kappa, -1, j, -1)));
    }
    dec.items.resize(item_count);
    for (int i = 0; i < item_count; ++i) {
        ItemPlacement& placement = dec.items[i];
        for (int j = 0; j < pool.size(); ++j) {
            int vij = ms.find_var(VarRole::AssignV, kappa, i, j, -1);
            if (vij >= 0 && as_bool(vij)) {
                placement.object = j;
                break;
            }
        }
        placement.x = snap(value(ms.find_var(VarRole::PosX, kappa, i, -1, -1)));
        placement.y = snap(value(ms.find_var(VarRole::PosY, kappa, i, -1, -1)));
    }
    return dec;
}

std::string pretty_print(const ModelSpec& ms) {
    std::ostringstream out;
    auto sym = [&](int var) {
        const VarInfo& vi = ms.info[var];
        std::string base = ms.vars[var].name.substr(0, ms.vars[var].name.find('_'));
        std::string idx;
        auto append = [&](int v) {
            if (v < 0) return;
            if (!idx.empty()) idx += ',';
            idx += std::to_string(v);
        };
        append(vi.s);
        append(vi.i);
        append(vi.j);
        append(vi.l);
        return base + "[" + idx + "]";
    };
    out << "minimize\n ";
    if (ms.objective_constant != 0) out << " " << ms.objective_constant;
    for (const Term& term : ms.objective)
        out << (term.coef >= 0 ? " + " : " - ") << std::abs(term.coef) << " " << sym(term.var);
    out << "\nsubject to\n";
    for (size_t row_index = 0; row_index < ms.rows.size(); ++row_index) {
        const LinearRow& row = ms.rows[row_index];
        out << " r" << row_index << ":";
        for (const Term& term : row.terms)
            out << (term.coef >= 0 ? " + " : " - ") << std::abs(term.coef) << " "
                << sym(term.var);
        switch (row.sense) {
            case RowSense::Le: out << " <= "; break;
            case RowSense::Eq: out << " = "; break;
            case RowSense::Ge: out << " >= "; break;
        }
        out << row.rhs << "\n";
    }
    out << "bounds\n";
    for (int k = 0; k < ms.var_count(); ++k)
        out << " " << ms.vars[k].lb << " <= " << sym(k) << " <= " << ms.vars[k].ub
            << (ms.vars[k].kind == VarKind::Binary
                    ? " binary"
                    : (ms.vars[k].kind == VarKind::Integer ? " integer" : ""))
            << "\n";
    return out.str();
}

}  // namespace cutplan
