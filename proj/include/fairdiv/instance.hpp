#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fairdiv/bundle.hpp"
#include "fairdiv/rat.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

struct Agent {
    Valuation valuation;
    Rat entitlement;
};

// An allocation instance: m items and agents with positive entitlements.
// Entitlements sum to at most 1 (exactly 1 for game play; strictly smaller
// totals are legal inputs for allocation algorithms that permit them).
class Instance {
public:
    Instance(int m, std::vector<Agent> agents);

    int item_count() const { return m_; }
    int agent_count() const { return static_cast<int>(agents_.size()); }
    const Agent& agent(int i) const { return agents_.at(i); }
    const std::vector<Agent>& agents() const { return agents_; }
    Bundle all_items() const { return Bundle::full(m_); }

    Rat entitlement_total() const;
    bool equal_entitlements() const;

private:
    int m_;
    std::vector<Agent> agents_;
};

// One bundle per agent; bundles pairwise disjoint, leftover items permitted.
struct Allocation {
    std::vector<Bundle> bundles;

    bool disjoint() const {
        std::uint64_t seen = 0;
        for (const auto& b : bundles) {
            if (seen & b.mask()) return false;
            seen |= b.mask();
        }
        return true;
    }
};

// --- JSON instance format ---------------------------------------------------
//
// {"m": int, "agents": [{"entitlement": "p/q", "valuation": V}]}
// V = {"type":"additive","values":["p/q",...]}
//   | {"type":"xos","clauses":[["p/q",...],...]}
//   | {"type":"table","values":{"<bitmask-decimal>":"p/q", ...}}  (all 2^m keys)

Instance parse_instance(const std::string& json_text);
Instance load_instance(const std::string& path);  // "-" reads stdin
std::string instance_to_json(const Instance& instance);

}  // namespace fairdiv
