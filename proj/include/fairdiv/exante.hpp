#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/partition.hpp"

namespace fairdiv {

// Fractional assignment of bundles to agents: sum_S x[i][S] = 1 per agent,
// each item covered exactly once, x >= 0.
struct CLPSolution {
    struct Entry {
        int agent;
        Bundle bundle;
        Rat weight;
    };
    std::vector<Entry> entries;  // support only (weight > 0)
    Rat objective;

    Rat agent_contribution(int agent, const Valuation& v) const {
        Rat sum;
        for (const auto& e : entries) {
            if (e.agent == agent) sum += e.weight * v.eval(e.bundle);
        }
        return sum;
    }
};

// Welfare-maximizing configuration LP over all bundles within `available`
// (defaults to every item). Valuations may be overridden (e.g. capped copies)
// without rebuilding the instance. Feasibility of the returned solution is
// re-verified by substitution before returning.
CLPSolution clp_solve(const Instance& instance,
                      const std::vector<Valuation>* valuations_override = nullptr,
                      std::optional<Bundle> available = std::nullopt);

// Feasible configuration-LP point assembled from the agents' fractional MES
// partitions. Requires entitlements summing to exactly 1. Its objective is
// the sum of the agents' MES values.
CLPSolution clp_from_mes_partitions(const Instance& instance);

struct RandomizedAllocation {
    struct Outcome {
        Allocation allocation;
        Rat probability;
    };
    std::vector<Outcome> support;  // probabilities sum to exactly 1
};

enum class ShareKind { Mes, Mms };

struct ExAnteResult {
    RandomizedAllocation lottery;
    Rat ratio;                    // best r with E[value_i] >= r * share_i for all i
    std::vector<Rat> shares;      // per-agent share values used
    std::vector<Rat> expected;    // per-agent expected values under the lottery
};

// Exact optimum of the ratio LP over the full deterministic-allocation
// simplex. Agents whose share is 0 impose no constraint.
ExAnteResult exante_opt(const Instance& instance, ShareKind share);

// Negative vector instances: items are the vectors {1..n}^n; agent i's
// maximin partition is by the i-th coordinate. The subadditive variant is a
// table (n = 2 only); the XOS variant uses one fiber-indicator clause per
// coordinate value (n = 2 or 3). The construction's maximin value (2, or
// n^(n-1)) is verified before returning.
enum class VectorClass { Subadditive, Xos };
Instance gen_vector_instance(int n, VectorClass cls);

struct RoundingReport {
    struct PerAgent {
        Rat lp_contribution;
        Rat empirical_mean;   // exact average of realized values over trials
        Rat ratio;            // empirical_mean / lp_contribution (0 if the latter is 0)
    };
    std::vector<PerAgent> agents;
    int trials = 0;
};

// Monte-Carlo rounding of a configuration-LP point: each agent draws a
// tentative bundle from her row distribution, contested items go to a
// uniformly random priority order. Reports measured ratios; the constants
// from the cited roundings are targets for reporting, not guarantees of
// this scheme.
RoundingReport round_solution(const Instance& instance, const CLPSolution& x,
                              std::uint64_t seed, int trials);

}  // namespace fairdiv
