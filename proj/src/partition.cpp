#include "fairdiv/partition.hpp"

namespace fairdiv {

PartitionCheck check_fractional_partition(const FractionalPartition& fp, const Valuation& v) {
    PartitionCheck out;
    for (const auto& p : fp.parts) {
        if (p.weight.is_negative()) {
            out.first_violation = "negative weight on bundle " + p.bundle.to_string();
            return out;
        }
    }
    Rat total = fp.total_weight();
    if (!(total == Rat(1))) {
        out.first_violation = "weights sum to " + total.str() + ", expected 1/1";
        return out;
    }
    for (int e = 0; e < v.item_count(); ++e) {
        Rat cov = fp.coverage(e);
        if (!(cov == fp.rho)) {
            out.first_violation = "item " + std::to_string(e) + " covered by weight " +
                                  cov.str() + ", expected " + fp.rho.str();
            return out;
        }
    }
    out.valid = true;
    bool first = true;
    for (const auto& p : fp.parts) {
        if (p.weight.is_zero()) continue;
        Rat value = v.eval(p.bundle);
        if (first || value < out.min_value) {
            out.min_value = std::move(value);
            first = false;
        }
    }
    return out;
}

}  // namespace fairdiv
