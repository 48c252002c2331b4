#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/instance.hpp"
#include "fairdiv/rat.hpp"

namespace fairdiv {

enum class GameMode { Plain, Extended };

struct GameState {
    Bundle remaining;
    std::vector<Rat> budgets;
    std::vector<Bundle> holdings;
    std::vector<Rat> price_log;  // price paid per item, 0 while unsold
    std::vector<bool> active;    // agent still holds her full budget
    int round = 0;
};

struct RoundRecord {
    int round;
    std::vector<Rat> bids;
    int winner;
    Bundle selection;
    Rat payment;
};

struct Transcript {
    std::vector<RoundRecord> rounds;
    Allocation final_allocation;
    std::vector<Rat> final_values;
};

// One round record per line, then a final summary record.
std::string transcript_to_jsonl(const Transcript& t);

struct StrategyContext {
    const Instance& instance;
    int agent;
    GameMode mode;
    const GameState& state;
    const std::vector<RoundRecord>& history;
};

// Behavior contract: bids never exceed the remaining budget; selections are
// non-empty subsets of the remaining items affordable at the winning price
// (exactly one item in the plain game). An empty selection is legal only at
// price zero and declines the round, ending the game.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual void reset(std::uint64_t seed) { (void)seed; }
    virtual Rat bid(const StrategyContext& ctx) = 0;
    virtual Bundle select(const StrategyContext& ctx, const Rat& price) = 0;
    virtual std::string name() const = 0;
};

using StrategyPtr = std::shared_ptr<Strategy>;

// Chooses the winner among the highest bidders. Default: lowest agent index.
using TieRule = std::function<int(const std::vector<int>& tied)>;
TieRule lowest_index_tie();

// Runs the bidding game to completion: rounds end when no items remain, or
// when every bid is zero and the tie-rule winner declines to take items.
// Budgets are conserved exactly; violations of the behavior contract throw
// IllegalBid / IllegalSelection naming the offending agent.
Transcript run_game(const Instance& instance, const std::vector<StrategyPtr>& strategies,
                    GameMode mode, const TieRule& tie, std::uint64_t seed);

// While holding her full budget, computes the smallest acceptable bundle
// among the remaining items (value >= rho; ties prefer higher value, then
// lexicographic), bids entitlement / |bundle|, and on winning takes exactly
// that bundle, spending the entire budget. rho defaults to
// APS(v, b) / choose_k(m, b). Throws StrategyFailed when no acceptable
// bundle exists while still active.
StrategyPtr one_shot_strategy(std::optional<Rat> rho = std::nullopt);

// Bids the full remaining budget and takes the single most valuable item.
StrategyPtr greedy_strategy();

// Seeded random bids (sixteenths of the budget) and random affordable
// selections; deterministic per seed.
StrategyPtr random_strategy(std::uint64_t seed);

// --- adversarial construction ----------------------------------------------

// Instance family where no protagonist strategy extracts more than
// 1 + 3k/q + eps/2 against the scripted opponents. Items form `bundles`
// groups; within each group one item of value 1, q of value 1/q, ... up to
// q^(k-1) of value q^(1-k). Every agent holds the same XOS valuation (one
// additive clause per group). Opponent group P1 bids half the best remaining
// item value; P2 bids q times the best item value remaining in any group
// where the protagonist already holds value >= eps/2. Group entitlement
// totals match the construction (P1 gets 1/2); member counts are desk-scale.
struct NegativeInstance {
    Instance instance;            // agent 0 is the protagonist
    std::vector<StrategyPtr> adversaries;  // strategies for agents 1..n-1
    int bundles;                  // number of item groups
    std::vector<int> item_group;  // group index per item
    std::vector<Rat> item_value;  // per-item value (additive within a group)
    Rat value_bound;              // 1 + 3k/q + eps/2
    Rat protagonist_aps;          // k: the groups witness it, the max value caps it
};

NegativeInstance gen_negative_instance(int k, int q, const Rat& eps);

struct AdversarySearchResult {
    Rat worst_value;
    bool strategy_failed = false;  // the protagonist strategy failed somewhere
    long nodes = 0;
};

// Exact minimax value of the protagonist's final bundle against a single
// adversary holding the combined opponent budget, with adversarial
// tie-breaking. The adversary either concedes the round or wins at exactly
// the protagonist's bid and picks any affordable selection; higher winning
// bids are dominated (same outcome, more spend) and are not branched.
// Rounds where the protagonist bids zero are terminal: holdings are final
// since values are monotone. Sizes are tiny (m <= 5).
AdversarySearchResult adversary_search(const Instance& instance, int protagonist,
                                       const StrategyPtr& strategy, GameMode mode,
                                       long node_limit = 50'000'000);

}  // namespace fairdiv
