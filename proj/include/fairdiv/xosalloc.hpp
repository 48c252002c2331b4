#pragma once

#include <array>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/partition.hpp"

namespace fairdiv {

// Exact welfare maximizer over complete allocations (n^m enumeration, capped
// at 10^7). Ties resolve to the lexicographically smallest per-item owner
// vector. `valuations` substitutes for the instance valuations (e.g. capped
// copies).
Allocation welfare_max(const Instance& instance, const std::vector<Valuation>& valuations);

struct ApsAllocationResult {
    Allocation allocation;
    std::vector<Rat> aps;     // per-agent anyprice share at her entitlement
    std::vector<Rat> values;  // realized values under the original valuations
};

// Welfare maximizer under capped normalized valuations
// min(b_i, (b_i/APS_i) * v_i). Every agent ends with value at least
// (1 - b + b_i) * APS_i, where b is the entitlement total (which may be
// below 1); the bound is asserted exactly and a failure throws BoundViolated.
ApsAllocationResult apsxos_allocate(const Instance& instance);

// Disjoint cover (B1, B2) of b with v(B1) >= threshold and v(B2) >= threshold.
// Items enter B1 in descending single-item value until the threshold is
// reached; the complement's bound follows from subadditivity. Throws
// Unsplittable when the hypothesis (enough total value, no oversized items)
// fails. A nonpositive threshold returns the canonical nontrivial split.
std::pair<Bundle, Bundle> split_min_value(Bundle b, const Valuation& v, const Rat& threshold);

// For an additive valuation on b (item_values, rescaled internally so
// v(b) = 1) in which every pair of items is worth less than 1/4: three
// subsets of b minus {e}, each of value at least 1/2, with every item in at
// most two of them. Built from a spread-minimizing 3-partition.
std::array<Bundle, 3> three_set_partition(Bundle b, const std::vector<Rat>& item_values, int e);

struct ReplacementStep {
    enum class Kind { SingleItem, MultiItems };
    int agent;
    Kind kind;
    Bundle old_bundle;
    Bundle new_bundle;
    Rat welfare_before;
    Rat welfare_after;
};

struct OneSixthResult {
    Allocation allocation;
    std::vector<ReplacementStep> steps;
    std::vector<Rat> aps;
    std::vector<Rat> values;
};

// Iterative replacement procedure: start from the capped-welfare maximizer;
// while some agent falls below a sixth of her (normalized) share, she takes
// the minimum-damage bundle from her rebuilt fractional partition (large
// items become singleton bundles, the rest split in two). Steps are capped
// at ceil((1/b_min)^2) + 10 by default; exceeding the cap throws
// StepBudgetExhausted rather than looping silently.
OneSixthResult allocate_one_sixth(const Instance& instance, int max_steps = -1);

struct Step1Removal {
    int agent;
    Bundle set;
};

struct Equal417Result {
    Allocation allocation;
    std::vector<Step1Removal> step1;     // in execution order
    std::vector<int> remaining_agents;   // agents served in the second stage
    Bundle remaining_items;              // items available to the second stage
    std::vector<Rat> aps;                // per-agent share at 1/n
    std::vector<FractionalPartition> normalized_partitions;  // value >= 1 per part
    std::vector<Rat> values;             // realized values under the originals
    Rat rho;
};

// Equal-entitlement allocation: repeatedly hand out the globally smallest
// acceptable set (normalized value >= rho) while it has at most four items;
// the residue is allocated with halved entitlements through
// apsxos_allocate. At the default rho = 4/17 every agent receives at least
// rho times her share (asserted; BoundViolated otherwise). A custom rho
// exercises the second stage at desk scale and skips the 4/17-specific
// assertions.
Equal417Result allocate_equal_417(const Instance& instance, const Rat& rho = Rat(4, 17));

// Rebuilds, for every second-stage agent, the reweighted fractional
// partition prescribed by the removal trace (five cases keyed by how many
// items left each bundle and through which set sizes), verifies the weight
// and coverage bounds, and normalizes it into an exact fractional
// 1/(2*n5)-partition of the remaining items with min value >= 8/17. Throws
// LemmaViolated with details on any failure.
bool lemma817_check(const Instance& instance, const Equal417Result& result);

}  // namespace fairdiv
