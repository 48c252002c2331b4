#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fairdiv/bundle.hpp"
#include "fairdiv/rat.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

// Weighted bundle collection realizing a fractional rho-partition:
// nonnegative weights summing to 1, and every item covered by incident
// weight exactly rho.
struct FractionalPartition {
    struct Part {
        Bundle bundle;
        Rat weight;
    };
    std::vector<Part> parts;
    Rat rho;

    Rat total_weight() const {
        Rat sum;
        for (const auto& p : parts) sum += p.weight;
        return sum;
    }

    Rat coverage(int item) const {
        Rat sum;
        for (const auto& p : parts) {
            if (p.bundle.contains(item)) sum += p.weight;
        }
        return sum;
    }
};

struct PartitionCheck {
    bool valid = false;
    Rat min_value;              // min of v over the support (weight > 0)
    std::string first_violation;  // empty when valid
};

// Validates the weight constraints exactly (sum of weights 1, per-item
// coverage rho, weights nonnegative) over the m items of v, and reports the
// minimum value of v over the support.
PartitionCheck check_fractional_partition(const FractionalPartition& fp, const Valuation& v);

}  // namespace fairdiv
