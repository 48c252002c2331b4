#pragma once

#include <optional>
#include <vector>

#include "fairdiv/partition.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

struct MmsResult {
    Rat value;
    std::vector<Bundle> partition;  // exactly n pairwise-disjoint bundles covering everything
};

// Exact maximin share over all n-partitions (m <= 12, n <= 5). Witness ties
// are broken by choosing the lexicographically smallest part for the lowest
// remaining item at every level.
MmsResult mms(const Valuation& v, int n);

struct ShareValue {
    Rat value;
    FractionalPartition partition;
};

// Exact anyprice share at entitlement b via threshold search: the candidates
// are the distinct positive values of v, feasibility of each threshold is an
// exact LP over the bundles meeting it, and the share is the largest feasible
// candidate (0 if none, witnessed by the {all items, empty} partition).
ShareValue aps(const Valuation& v, const Rat& b);

// Exact maximum expectation share at entitlement b: maximize the expected
// bundle value over fractional b-partitions; the empty bundle is allowed in
// the support.
ShareValue mes(const Valuation& v, const Rat& b);

// Anyprice share at entitlement 1/n computed through the configuration LP
// with n capped copies: the largest candidate cap C for which the LP attains
// value n*C. Agrees exactly with aps(v, 1/n).
Rat aps_via_clp(const Valuation& v, int n);

// Partition of the items into n bundles, each of value at least T/(6n) where
// T is the configuration-LP value with n copies of v. Items worth at least
// T/(3n) are allocated outright (recursing with fewer agents); the rest is
// covered by an exact welfare-maximizing split into n bundles from which
// chunks of value in [T/(6n), T/(3n)) are cut greedily. Throws
// GuaranteeViolated if any output bundle falls short - surfaced, never
// silently accepted.
std::vector<Bundle> approx_mms_partition_subadditive(const Valuation& v, int n);

struct ShareReport {
    std::optional<Rat> mms_value;  // defined only at entitlement 1/n
    std::vector<Bundle> mms_partition;
    Rat aps_value;
    Rat mes_value;
    FractionalPartition aps_partition;
    FractionalPartition mes_partition;
    // Class facts established for the relation caps (nullopt = not decidable
    // at this size).
    std::optional<bool> subadditive;
    std::optional<bool> xos;
};

// Computes all three shares at entitlement 1/n and asserts the relations:
// MES >= APS >= MMS always, APS <= 5*MMS for subadditive valuations, and
// APS <= (17/4)*MMS for XOS valuations. Violations throw RelationViolated.
ShareReport share_relations(const Valuation& v, int n);

}  // namespace fairdiv
