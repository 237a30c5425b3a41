#include "cutplan/instance.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace cutplan {

const std::vector<PurchasableObject>& Instance::purchasable_at(int s) const {
    static const std::vector<PurchasableObject> empty;
    if (s == last_instant) return empty;
    return purchasable.at(s - first_instant);
}

const std::vector<OrderedItem>& Instance::orders_at(int s) const {
    static const std::vector<OrderedItem> empty;
    if (s == last_instant) return empty;
    return orders.at(s - first_instant);
}

std::vector<int> Instance::purchasable_counts() const {
    std::vector<int> m;
    m.reserve(purchasable.size());
    for (const auto& objs : purchasable) m.push_back(static_cast<int>(objs.size()));
    return m;
}

std::int64_t Instance::cumulative_object_cost(int kappa) const {
    std::int64_t total = 0;
    for (int s = first_instant; s <= kappa && s < last_instant; ++s)
        for (const auto& obj : purchasable_at(s)) total += obj.cost();
    return total;
}

namespace {

struct Line {
    int number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        Line line{number, {}};
        std::string tok;
        while (ls >> tok) line.tokens.push_back(tok);
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

std::int64_t parse_int(const Line& line, size_t pos, const std::string& field) {
    if (pos >= line.tokens.size())
        throw ParseError(line.number, field, "missing value");
    const std::string& tok = line.tokens[pos];
    try {
        size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line.number, field, "not an integer: '" + tok + "'");
    }
}

void expect_keyword(const Line& line, size_t pos, const std::string& kw) {
    if (pos >= line.tokens.size() || line.tokens[pos] != kw)
        throw ParseError(line.number, kw, "expected keyword '" + kw + "'");
}

std::int64_t positive_dim(const Line& line, size_t pos, const std::string& field) {
    std::int64_t v = parse_int(line, pos, field);
    if (v < 1) throw ParseError(line.number, field, "must be a positive integer");
    return v;
}

}  // namespace

Instance parse_instance(const std::string& text) {
    auto lines = tokenize(text);
    size_t at = 0;
    auto next = [&]() -> const Line& {
        if (at >= lines.size()) {
            int last = lines.empty() ? 0 : lines.back().number;
            throw ParseError(last, "file", "unexpected end of file");
        }
        return lines[at++];
    };

    const Line& header = next();
    expect_keyword(header, 0, "P");
    std::int64_t P = parse_int(header, 1, "P");
    expect_keyword(header, 2, "XI");
    std::int64_t xi = parse_int(header, 3, "XI");
    expect_keyword(header, 4, "D");
    std::int64_t d = parse_int(header, 5, "D");
    if (header.tokens.size() != 6)
        throw ParseError(header.number, "header", "trailing tokens in header");
    if (d < 1) throw ParseError(header.number, "D", "catalogue must have at least one item");

    Instance inst;
    inst.last_instant = static_cast<int>(P);
    for (std::int64_t k = 0; k < d; ++k) {
        const Line& line = next();
        expect_keyword(line, 0, "CAT");
        CatalogueItem ci;
        ci.width = positive_dim(line, 1, "CAT width");
        ci.height = positive_dim(line, 2, "CAT height");
        if (line.tokens.size() != 3) throw ParseError(line.number, "CAT", "trailing tokens");
        inst.catalogue.push_back(ci);
    }

    bool first_period = true;
    int expected_s = 0;
    while (at < lines.size()) {
        const Line& ph = next();
        expect_keyword(ph, 0, "PERIOD");
        std::int64_t s = parse_int(ph, 1, "PERIOD");
        if (first_period) {
            inst.first_instant = static_cast<int>(s);
            expected_s = static_cast<int>(s);
            first_period = false;
        }
        if (s != expected_s)
            throw ParseError(ph.number, "PERIOD",
                             "expected instant " + std::to_string(expected_s) + ", got " +
                                 std::to_string(s));
        expect_keyword(ph, 2, "M");
        std::int64_t m = parse_int(ph, 3, "M");
        expect_keyword(ph, 4, "N");
        std::int64_t n = parse_int(ph, 5, "N");
        if (ph.tokens.size() != 6) throw ParseError(ph.number, "PERIOD", "trailing tokens");
        if (m < 0 || n < 0) throw ParseError(ph.number, "PERIOD", "negative count");

        std::vector<PurchasableObject> objs;
        for (std::int64_t k = 0; k < m; ++k) {
            const Line& line = next();
            expect_keyword(line, 0, "OBJ");
            PurchasableObject obj;
            obj.width = positive_dim(line, 1, "OBJ width");
            obj.height = positive_dim(line, 2, "OBJ height");
            obj.unit_cost = positive_dim(line, 3, "OBJ cost");
            if (line.tokens.size() != 4) throw ParseError(line.number, "OBJ", "trailing tokens");
            objs.push_back(obj);
        }
        std::vector<OrderedItem> items;
        for (std::int64_t k = 0; k < n; ++k) {
            const Line& line = next();
            expect_keyword(line, 0, "ITEM");
            OrderedItem item;
            item.width = positive_dim(line, 1, "ITEM width");
            item.height = positive_dim(line, 2, "ITEM height");
            if (line.tokens.size() != 3) throw ParseError(line.number, "ITEM", "trailing tokens");
            items.push_back(item);
        }
        inst.purchasable.push_back(std::move(objs));
        inst.orders.push_back(std::move(items));
        ++expected_s;
    }

    int periods = static_cast<int>(inst.purchasable.size());
    if (periods == 0)
        throw ParseError(lines.empty() ? 0 : lines.back().number, "PERIOD", "no period blocks");
    if (inst.first_instant + periods != inst.last_instant)
        throw ParseError(lines.back().number, "PERIOD",
                         "period count mismatch: header declares " +
                             std::to_string(inst.last_instant - inst.first_instant) +
                             " periods, file has " + std::to_string(periods));
    if (xi < 0 || xi > periods)
        throw ParseError(header.number, "XI",
                         "xi out of range [0, " + std::to_string(periods) + "]");
    inst.xi = static_cast<int>(xi);
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << "P " << inst.last_instant << " XI " << inst.xi << " D " << inst.catalogue.size()
        << "\n";
    for (const auto& ci : inst.catalogue) out << "CAT " << ci.width << " " << ci.height << "\n";
    for (int s = inst.first_instant; s < inst.last_instant; ++s) {
        const auto& objs = inst.purchasable_at(s);
        const auto& items = inst.orders_at(s);
        out << "PERIOD " << s << " M " << objs.size() << " N " << items.size() << "\n";
        for (const auto& obj : objs)
            out << "OBJ " << obj.width << " " << obj.height << " " << obj.unit_cost << "\n";
        for (const auto& item : items)
            out << "ITEM " << item.width << " " << item.height << "\n";
    }
    return out.str();
}

namespace {

// Bounded draw; stdlib distributions are implementation-defined, and equal
// seeds must reproduce equal instances everywhere.
std::int64_t draw(std::mt19937_64& rng, const IntRange& range) {
    if (range.lo > range.hi) throw std::invalid_argument("empty generator range");
    std::uint64_t span = static_cast<std::uint64_t>(range.hi - range.lo) + 1;
    return range.lo + static_cast<std::int64_t>(rng() % span);
}

}  // namespace

Instance generate_instance(const GenConfig& cfg) {
    if (cfg.periods < 1) throw std::invalid_argument("periods must be >= 1");
    std::mt19937_64 rng(cfg.seed);
    Instance inst;
    inst.first_instant = 0;
    inst.last_instant = cfg.periods;
    inst.xi = cfg.xi.value_or(cfg.periods);
    if (inst.xi < 0 || inst.xi > cfg.periods) throw std::invalid_argument("xi out of range");

    for (int s = 0; s < cfg.periods; ++s) {
        std::vector<PurchasableObject> objs;
        int m = static_cast<int>(draw(rng, cfg.object_count));
        for (int k = 0; k < m; ++k) {
            PurchasableObject obj;
            obj.width = draw(rng, cfg.object_dim);
            obj.height = draw(rng, cfg.object_dim);
            obj.unit_cost = draw(rng, cfg.unit_cost);
            objs.push_back(obj);
        }
        std::vector<OrderedItem> items;
        int n = static_cast<int>(draw(rng, cfg.item_count));
        for (int k = 0; k < n; ++k) {
            OrderedItem item;
            bool fits = false;
            for (int attempt = 0; attempt < 1000 && !fits; ++attempt) {
                item.width = draw(rng, cfg.item_dim);
                item.height = draw(rng, cfg.item_dim);
                for (const auto& obj : objs)
                    if (item.width <= obj.width && item.height <= obj.height) {
                        fits = true;
                        break;
                    }
            }
            if (!fits)
                throw std::runtime_error(
                    "generator could not draw an item fitting any same-instant object");
            items.push_back(item);
        }
        inst.purchasable.push_back(std::move(objs));
        inst.orders.push_back(std::move(items));
    }

    // catalogue: the smallest distinct item shapes seen across the horizon
    std::set<std::pair<std::int64_t, std::int64_t>> shapes;
    for (const auto& items : inst.orders)
        for (const auto& item : items) shapes.insert({item.width, item.height});
    std::vector<std::pair<std::int64_t, std::int64_t>> sorted(shapes.begin(), shapes.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        auto area_a = a.first * a.second, area_b = b.first * b.second;
        if (area_a != area_b) return area_a < area_b;
        return a < b;
    });
    std::int64_t want = draw(rng, cfg.catalogue_size);
    std::int64_t take = std::min<std::int64_t>(want, static_cast<std::int64_t>(sorted.size()));
    if (take < 1 && !sorted.empty()) take = 1;
    for (std::int64_t k = 0; k < take; ++k)
        inst.catalogue.push_back({sorted[k].first, sorted[k].second});
    if (inst.catalogue.empty()) inst.catalogue.push_back({1, 1});
    return inst;
}

std::vector<ValidationIssue> validate_instance(const Instance& inst) {
    std::vector<ValidationIssue> issues;
    auto error = [&](std::string msg) {
        issues.push_back({Severity::Error, std::move(msg)});
    };
    auto warning = [&](std::string msg) {
        issues.push_back({Severity::Warning, std::move(msg)});
    };

    int periods = inst.periods();
    if (periods < 1) error("last instant must exceed the first");
    if (inst.xi < 0 || inst.xi > periods) error("xi out of range");
    if (inst.purchasable.size() != static_cast<size_t>(std::max(periods, 0)))
        error("purchasable period count mismatch");
    if (inst.orders.size() != static_cast<size_t>(std::max(periods, 0)))
        error("orders period count mismatch");
    if (inst.catalogue.empty()) error("catalogue is empty");

    for (const auto& ci : inst.catalogue)
        if (ci.width < 1 || ci.height < 1) error("catalogue item with non-positive dimension");
    for (size_t k = 0; k < inst.purchasable.size(); ++k)
        for (const auto& obj : inst.purchasable[k])
            if (obj.width < 1 || obj.height < 1 || obj.unit_cost < 1)
                error("object with non-positive dimension or cost at instant " +
                      std::to_string(inst.first_instant + static_cast<int>(k)));
    for (size_t k = 0; k < inst.orders.size(); ++k)
        for (const auto& item : inst.orders[k])
            if (item.width < 1 || item.height < 1)
                error("item with non-positive dimension at instant " +
                      std::to_string(inst.first_instant + static_cast<int>(k)));
    if (!issues.empty() &&
        std::any_of(issues.begin(), issues.end(),
                    [](const ValidationIssue& v) { return v.severity == Severity::Error; }))
        return issues;

    // An item can only ever be cut from an object purchased at its own instant
    // or from a still-valid leftover chain rooted no more than xi instants back.
    for (int s = inst.first_instant; s < inst.last_instant; ++s) {
        const auto& items = inst.orders_at(s);
        for (size_t i = 0; i < items.size(); ++i) {
            bool can_fit = false;
            int lo = std::max(inst.first_instant, s - inst.xi);
            for (int sp = lo; sp <= s && !can_fit; ++sp)
                for (const auto& obj : inst.purchasable_at(sp))
                    if (items[i].width <= obj.width && items[i].height <= obj.height) {
                        can_fit = true;
                        break;
                    }
            if (!can_fit)
                warning("item " + std::to_string(i + 1) + " at instant " + std::to_string(s) +
                        " cannot fit any object");
        }
    }
    return issues;
}

}  // namespace cutplan
