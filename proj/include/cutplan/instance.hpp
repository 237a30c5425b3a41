#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cutplan {

struct PurchasableObject {
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::int64_t unit_cost = 1;  // cost per unit of area

    std::int64_t area() const { return width * height; }
    std::int64_t cost() const { return unit_cost * area(); }
    bool operator==(const PurchasableObject&) const = default;
};

struct OrderedItem {
    std::int64_t width = 0;
    std::int64_t height = 0;

    std::int64_t area() const { return width * height; }
    bool operator==(const OrderedItem&) const = default;
};

struct CatalogueItem {
    std::int64_t width = 0;
    std::int64_t height = 0;
    bool operator==(const CatalogueItem&) const = default;
};

// Problem data over instants first_instant..last_instant. Purchasable objects
// and ordered items exist for s in [first_instant, last_instant); the last
// instant carries leftovers only.
struct Instance {
    int first_instant = 0;  // p
    int last_instant = 0;   // P
    int xi = 0;             // leftover validity, in [0, P-p]
    std::vector<std::vector<PurchasableObject>> purchasable;  // one list per instant p..P-1
    std::vector<std::vector<OrderedItem>> orders;             // one list per instant p..P-1
    std::vector<CatalogueItem> catalogue;

    int periods() const { return last_instant - first_instant; }
    const std::vector<PurchasableObject>& purchasable_at(int s) const;
    const std::vector<OrderedItem>& orders_at(int s) const;
    std::vector<int> purchasable_counts() const;  // m_s for s = p..P-1
    // total cost of all purchasable objects from instant p through kappa (C_kappa)
    std::int64_t cumulative_object_cost(int kappa) const;
    bool operator==(const Instance&) const = default;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(int line, std::string field, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", " + field + ": " + message),
          line_(line),
          field_(std::move(field)) {}
    int line() const { return line_; }
    const std::string& field() const { return field_; }

  private:
    int line_;
    std::string field_;
};

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    bool operator==(const IntRange&) const = default;
};

// Ranges default to the spans of the published instance set.
struct GenConfig {
    int periods = 4;
    std::optional<int> xi;  // defaults to periods (leftovers never expire)
    IntRange object_count{1, 5};
    IntRange object_dim{30, 100};
    IntRange item_count{2, 15};
    IntRange item_dim{5, 20};
    IntRange catalogue_size{1, 5};
    IntRange unit_cost{1, 1};
    std::uint64_t seed = 0;
};

enum class Severity { Warning, Error };

struct ValidationIssue {
    Severity severity = Severity::Warning;
    std::string message;
};

Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);
Instance generate_instance(const GenConfig& cfg);
std::vector<ValidationIssue> validate_instance(const Instance& inst);

}  // namespace cutplan
