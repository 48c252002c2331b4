#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fairdiv/bundle.hpp"
#include "fairdiv/rat.hpp"

namespace fairdiv {

enum class ValuationClass { Additive, Submodular, Xos, Subadditive, Monotone };

// Normalized monotone set function over m items, in one of four
// representations. Immutable after construction; copies are cheap.
class Valuation {
public:
    enum class Kind { Additive, Xos, Table, Truncated };

    static Valuation additive(std::vector<Rat> values);
    static Valuation xos(int m, std::vector<std::vector<Rat>> clauses);
    // `values` indexed by bundle mask, all 2^m entries present. Monotonicity
    // and normalization are checked exhaustively at load time.
    static Valuation table(int m, std::vector<Rat> values);
    static Valuation truncated(Valuation base, Rat cap);

    Kind kind() const { return d_->kind; }
    int item_count() const { return d_->m; }

    Rat operator()(Bundle s) const { return eval(s); }
    Rat eval(Bundle s) const;

    // Representation accessors; valid only for the matching kind.
    const std::vector<Rat>& additive_values() const { return d_->values; }
    const std::vector<std::vector<Rat>>& clauses() const { return d_->clauses; }
    const std::vector<Rat>& table_values() const { return d_->values; }
    const Valuation base() const { return Valuation(d_->base); }
    const Rat& cap() const { return d_->cap; }

    // v'(S) = factor * v(S); representation-preserving.
    Valuation scaled(const Rat& factor) const;

    bool operator==(const Valuation& o) const { return d_ == o.d_; }

private:
    struct Data {
        Kind kind;
        int m = 0;
        std::vector<Rat> values;                // Additive: per item; Table: per mask
        std::vector<std::vector<Rat>> clauses;  // Xos
        std::shared_ptr<const Data> base;       // Truncated
        Rat cap;                                // Truncated
    };

    explicit Valuation(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

    std::shared_ptr<const Data> d_;
};

// Exact class membership by definition-level testing. Structural shortcuts
// apply where the representation guarantees the class (e.g. an Additive
// representation is additive); otherwise the check is exhaustive and throws
// TooLarge beyond desk scale. XOS membership of a Table is decided by the
// fractional-cover LP characterization (m <= 6).
bool class_check(const Valuation& v, ValuationClass cls);

// Exact argmax of v(S) - sum of prices over S; ties broken by the
// lexicographically smallest bundle. The empty set is always available, so
// the result never has negative profit.
Bundle demand_query(const Valuation& v, const std::vector<Rat>& prices);

// demand_query applied to min(v, cap).
Bundle truncated_demand_query(const Valuation& v, const std::vector<Rat>& prices, const Rat& cap);

// Smallest non-empty S within `available` with v(S) >= threshold; ties prefer
// higher value, then lexicographically smaller bundles. Exact for every
// representation; exponential representations use clause structure instead of
// subset enumeration. Returns nullopt when no such bundle exists.
std::optional<Bundle> smallest_acceptable(const Valuation& v, Bundle available,
                                          const Rat& threshold);

// Largest v({e}) over e in `available` (0 if empty), with the witness item.
std::pair<Rat, int> best_single_item(const Valuation& v, Bundle available);

// An additive function a on the items of B with a(B) = v(B) and
// a(S) <= v(S) for every S subset of B. Exists exactly when v restricted to B
// is fractionally subadditive; throws Error otherwise. For clause-represented
// valuations this is the maximizing clause; for tables it is computed by LP.
std::vector<Rat> additive_supporting(const Valuation& v, Bundle b);

// v restricted to the items of `keep`, reindexed to 0..|keep|-1 in ascending
// item order; representation-preserving.
Valuation restrict_to(const Valuation& v, Bundle keep);

}  // namespace fairdiv
