#include "fairdiv/bidding.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "fairdiv/errors.hpp"
#include "fairdiv/ladder.hpp"
#include "fairdiv/shares.hpp"

namespace fairdiv {

std::string transcript_to_jsonl(const Transcript& t) {
    std::ostringstream out;
    for (const auto& r : t.rounds) {
        out << "{\"round\":" << r.round << ",\"bids\":[";
        for (std::size_t i = 0; i < r.bids.size(); ++i) {
            if (i) out << ",";
            out << "\"" << r.bids[i].str() << "\"";
        }
        out << "],\"winner\":" << r.winner << ",\"selection\":\"" << r.selection.to_string()
            << "\",\"payment\":\"" << r.payment.str() << "\"}\n";
    }
    out << "{\"final\":{\"bundles\":[";
    for (std::size_t i = 0; i < t.final_allocation.bundles.size(); ++i) {
        if (i) out << ",";
        out << "\"" << t.final_allocation.bundles[i].to_string() << "\"";
    }
    out << "],\"values\":[";
    for (std::size_t i = 0; i < t.final_values.size(); ++i) {
        if (i) out << ",";
        out << "\"" << t.final_values[i].str() << "\"";
    }
    out << "]}}\n";
    return out.str();
}

TieRule lowest_index_tie() {
    return [](const std::vector<int>& tied) { return tied.front(); };
}

Transcript run_game(const Instance& instance, const std::vector<StrategyPtr>& strategies,
                    GameMode mode, const TieRule& tie, std::uint64_t seed) {
    const int n = instance.agent_count();
    if (static_cast<int>(strategies.size()) != n) {
        throw Error("run_game: one strategy per agent required");
    }
    if (!(instance.entitlement_total() == Rat(1))) {
        throw Error("run_game: entitlements must sum to 1");
    }
    for (int i = 0; i < n; ++i) {
        strategies[i]->reset(seed + static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ull);
    }

    GameState state;
    state.remaining = instance.all_items();
    for (int i = 0; i < n; ++i) state.budgets.push_back(instance.agent(i).entitlement);
    state.holdings.assign(n, Bundle());
    state.price_log.assign(instance.item_count(), Rat(0));
    state.active.assign(n, true);

    Transcript transcript;
    while (!state.remaining.empty()) {
        std::vector<Rat> bids(n);
        for (int i = 0; i < n; ++i) {
            StrategyContext ctx{instance, i, mode, state, transcript.rounds};
            bids[i] = strategies[i]->bid(ctx);
            if (bids[i].is_negative() || bids[i] > state.budgets[i]) {
                throw IllegalBid("agent " + std::to_string(i) + " bid " + bids[i].str() +
                                 " with budget " + state.budgets[i].str());
            }
        }
        Rat top = bids[0];
        for (int i = 1; i < n; ++i) top = max(top, bids[i]);
        std::vector<int> tied;
        for (int i = 0; i < n; ++i) {
            if (bids[i] == top) tied.push_back(i);
        }
        int winner = tie(tied);

        StrategyContext ctx{instance, winner, mode, state, transcript.rounds};
        Bundle selection = strategies[winner]->select(ctx, top);
        if (selection.empty()) {
            if (top.is_zero()) break;  // round declined at zero price: game over
            throw IllegalSelection("agent " + std::to_string(winner) +
                                   " declined a winning positive bid");
        }
        if (!state.remaining.contains(selection)) {
            throw IllegalSelection("agent " + std::to_string(winner) +
                                   " selected unavailable items");
        }
        if (mode == GameMode::Plain && selection.size() != 1) {
            throw IllegalSelection("plain game: exactly one item per round");
        }
        Rat payment = mode == GameMode::Plain ? top : top * Rat(selection.size());
        if (payment > state.budgets[winner]) {
            throw IllegalSelection("agent " + std::to_string(winner) + " cannot afford " +
                                   std::to_string(selection.size()) + " items at " + top.str());
        }

        state.budgets[winner] -= payment;
        state.holdings[winner] = state.holdings[winner] | selection;
        state.remaining = state.remaining - selection;
        for (int e : selection.items()) state.price_log[e] = top;
        state.active[winner] =
            state.budgets[winner] == instance.agent(winner).entitlement;
        transcript.rounds.push_back({state.round, bids, winner, selection, payment});
        ++state.round;

        // Budget conservation: entitlement minus payments so far, never negative.
        for (int i = 0; i < n; ++i) {
            Rat spent;
            for (const auto& r : transcript.rounds) {
                if (r.winner == i) spent += r.payment;
            }
            if (!(state.budgets[i] == instance.agent(i).entitlement - spent) ||
                state.budgets[i].is_negative()) {
                throw Error("budget conservation violated for agent " + std::to_string(i));
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        transcript.final_allocation.bundles.push_back(state.holdings[i]);
        transcript.final_values.push_back(instance.agent(i).valuation.eval(state.holdings[i]));
    }
    return transcript;
}

namespace {

class OneShotStrategy final : public Strategy {
public:
    explicit OneShotStrategy(std::optional<Rat> rho) : rho_override_(std::move(rho)) {}

    Rat bid(const StrategyContext& ctx) override {
        if (!holds_full_budget(ctx)) return Rat(0);
        Bundle target = acceptable_bundle(ctx);
        return ctx.instance.agent(ctx.agent).entitlement / Rat(target.size());
    }

    Bundle select(const StrategyContext& ctx, const Rat& price) override {
        (void)price;
        if (!holds_full_budget(ctx)) return Bundle();  // inactive: decline
        return acceptable_bundle(ctx);
    }

    std::string name() const override { return "one-shot"; }

    const Rat& rho(const StrategyContext& ctx) {
        ensure_rho(ctx);
        return *rho_;
    }

private:
    bool holds_full_budget(const StrategyContext& ctx) const {
        return ctx.state.budgets[ctx.agent] == ctx.instance.agent(ctx.agent).entitlement;
    }

    void ensure_rho(const StrategyContext& ctx) {
        if (rho_) return;
        if (rho_override_) {
            rho_ = *rho_override_;
            return;
        }
        const auto& agent = ctx.instance.agent(ctx.agent);
        int k = choose_k(ctx.instance.item_count(), agent.entitlement);
        rho_ = aps(agent.valuation, agent.entitlement).value / Rat(k);
    }

    Bundle acceptable_bundle(const StrategyContext& ctx) {
        ensure_rho(ctx);
        auto target = smallest_acceptable(ctx.instance.agent(ctx.agent).valuation,
                                          ctx.state.remaining, *rho_);
        if (!target) {
            throw StrategyFailed("one-shot: no acceptable bundle among remaining items");
        }
        return *target;
    }

    std::optional<Rat> rho_override_;
    std::optional<Rat> rho_;
};

class GreedyStrategy final : public Strategy {
public:
    Rat bid(const StrategyContext& ctx) override { return ctx.state.budgets[ctx.agent]; }

    Bundle select(const StrategyContext& ctx, const Rat& price) override {
        (void)price;
        auto [value, item] = best_single_item(ctx.instance.agent(ctx.agent).valuation,
                                              ctx.state.remaining);
        return item < 0 ? Bundle() : Bundle::single(item);
    }

    std::string name() const override { return "greedy"; }
};

class RandomStrategy final : public Strategy {
public:
    explicit RandomStrategy(std::uint64_t seed) : base_seed_(seed), rng_(seed) {}

    void reset(std::uint64_t seed) override { rng_.seed(base_seed_ ^ seed); }

    Rat bid(const StrategyContext& ctx) override {
        int sixteenths = static_cast<int>(rng_() % 17);
        return ctx.state.budgets[ctx.agent] * Rat(sixteenths, 16);
    }

    Bundle select(const StrategyContext& ctx, const Rat& price) override {
        auto items = ctx.state.remaining.items();
        std::uint64_t affordable;
        if (ctx.mode == GameMode::Plain) {
            affordable = 1;
        } else if (price.is_zero()) {
            affordable = items.size();
        } else {
            Rat budget = ctx.state.budgets[ctx.agent];
            affordable = 0;
            Rat cost;
            while (affordable < items.size() && cost + price <= budget) {
                cost += price;
                ++affordable;
            }
        }
        if (affordable == 0) return Bundle();
        std::uint64_t want = 1 + rng_() % std::min<std::uint64_t>(affordable, 3);
        Bundle pick;
        for (std::uint64_t c = 0; c < want && !items.empty(); ++c) {
            std::size_t idx = rng_() % items.size();
            pick = pick.with(items[idx]);
            items.erase(items.begin() + static_cast<std::ptrdiff_t>(idx));
        }
        return pick;
    }

    std::string name() const override { return "random"; }

private:
    std::uint64_t base_seed_;
    std::mt19937_64 rng_;
};

}  // namespace

StrategyPtr one_shot_strategy(std::optional<Rat> rho) {
    return std::make_shared<OneShotStrategy>(std::move(rho));
}

StrategyPtr greedy_strategy() { return std::make_shared<GreedyStrategy>(); }

StrategyPtr random_strategy(std::uint64_t seed) {
    return std::make_shared<RandomStrategy>(seed);
}

// --- negative construction --------------------------------------------------

namespace {

// Scripted opponent: bids half the best remaining item value, wins one item
// of that value.
class PriceFloorStrategy final : public Strategy {
public:
    PriceFloorStrategy(std::vector<Rat> item_value) : item_value_(std::move(item_value)) {}

    Rat bid(const StrategyContext& ctx) override {
        Rat top = top_value(ctx.state.remaining);
        Rat want = top / Rat(2);
        return min(want, ctx.state.budgets[ctx.agent]);
    }

    Bundle select(const StrategyContext& ctx, const Rat& price) override {
        (void)price;
        Rat top = top_value(ctx.state.remaining);
        if (top.is_zero()) return Bundle();
        for (int e : ctx.state.remaining.items()) {
            if (item_value_[e] == top) return Bundle::single(e);
        }
        return Bundle();
    }

    std::string name() const override { return "price-floor"; }

private:
    Rat top_value(Bundle remaining) const {
        Rat top;
        for (int e : remaining.items()) top = max(top, item_value_[e]);
        return top;
    }

    std::vector<Rat> item_value_;
};

// Scripted opponent: once the protagonist holds value >= eps/2 inside a
// group, outbids her q-fold on the best item remaining in such groups.
class GroupGuardStrategy final : public Strategy {
public:
    GroupGuardStrategy(std::vector<Rat> item_value, std::vector<int> item_group, int groups,
                       int q, Rat eps)
        : item_value_(std::move(item_value)),
          item_group_(std::move(item_group)),
          groups_(groups),
          q_(q),
          eps_(std::move(eps)) {}

    Rat bid(const StrategyContext& ctx) override {
        auto [value, item] = danger_target(ctx);
        if (item < 0) return Rat(0);
        return min(Rat(q_) * value, ctx.state.budgets[ctx.agent]);
    }

    Bundle select(const StrategyContext& ctx, const Rat& price) override {
        (void)price;
        auto [value, item] = danger_target(ctx);
        return item < 0 ? Bundle() : Bundle::single(item);
    }

    std::string name() const override { return "group-guard"; }

private:
    // Highest-value remaining item within a dangerous group; (-1) if none.
    std::pair<Rat, int> danger_target(const StrategyContext& ctx) const {
        std::vector<Rat> held(groups_, Rat(0));
        for (int e : ctx.state.holdings[0].items()) held[item_group_[e]] += item_value_[e];
        Rat best;
        int arg = -1;
        for (int e : ctx.state.remaining.items()) {
            if (held[item_group_[e]] * Rat(2) < eps_) continue;
            if (arg < 0 || item_value_[e] > best) {
                best = item_value_[e];
                arg = e;
            }
        }
        return {best, arg};
    }

    std::vector<Rat> item_value_;
    std::vector<int> item_group_;
    int groups_;
    int q_;
    Rat eps_;
};

}  // namespace

NegativeInstance gen_negative_instance(int k, int q, const Rat& eps) {
    if (k < 1 || k > 3 || q < 1 || q > 8) {
        throw ParameterTooLarge("negative construction supports k <= 3, q <= 8");
    }
    if (!(eps > Rat(0))) throw Error("negative construction: eps must be positive");
    long long per_group = 0, power = 1;
    for (int t = 0; t < k; ++t) {
        per_group += power;
        power *= q;
    }
    int groups = static_cast<int>(std::min<long long>(64 / per_group, 10));
    if (groups < 3) throw ParameterTooLarge("negative construction does not fit in 64 items");
    const int m = static_cast<int>(groups * per_group);

    std::vector<int> item_group(m, 0);
    std::vector<Rat> item_value(m, Rat(0));
    std::vector<std::vector<Rat>> clauses;
    int item = 0;
    for (int g = 0; g < groups; ++g) {
        std::vector<Rat> clause(m, Rat(0));
        Rat value(1);
        long long count = 1;
        for (int t = 0; t < k; ++t) {
            for (long long c = 0; c < count; ++c) {
                item_group[item] = g;
                item_value[item] = value;
                clause[item] = value;
                ++item;
            }
            value /= Rat(q);
            count *= q;
        }
        clauses.push_back(std::move(clause));
    }
    Valuation v = Valuation::xos(m, std::move(clauses));

    // Group entitlement totals follow the construction: the protagonist gets
    // one group's worth, the price-floor group gets 1/2 (enough to buy every
    // item at half value), the guards split the rest.
    const int p1_members = 3;
    const int p2_members = 2;
    Rat b0(1, groups);
    Rat p1_total(1, 2);
    Rat p2_total = Rat(1) - b0 - p1_total;
    std::vector<Agent> agents;
    agents.push_back(Agent{v, b0});
    for (int i = 0; i < p1_members; ++i) agents.push_back(Agent{v, p1_total / Rat(p1_members)});
    for (int i = 0; i < p2_members; ++i) agents.push_back(Agent{v, p2_total / Rat(p2_members)});

    NegativeInstance out{Instance(m, std::move(agents)),
                         {},
                         groups,
                         std::move(item_group),
                         std::move(item_value),
                         Rat(1) + Rat(3 * k, q) + eps / Rat(2),
                         Rat(k)};

    // Item values in game units: the whole supply is worth groups * k, and
    // budgets are entitlements, so scale by 1 / (groups * k).
    Rat unit = Rat(1) / (Rat(groups) * Rat(k));
    std::vector<Rat> game_values;
    for (const auto& value : out.item_value) game_values.push_back(value * unit);
    for (int i = 0; i < p1_members; ++i) {
        out.adversaries.push_back(std::make_shared<PriceFloorStrategy>(game_values));
    }
    for (int i = 0; i < p2_members; ++i) {
        out.adversaries.push_back(std::make_shared<GroupGuardStrategy>(
            game_values, out.item_group, groups, q, eps * unit));
    }
    return out;
}

// --- adversary search ---------------------------------------------------------

namespace {

struct SearchEnv {
    const Instance& instance;
    int protagonist;
    Strategy* strategy;
    GameMode mode;
    long node_limit;
    long nodes = 0;
    bool failed = false;
    std::vector<RoundRecord> history;
};

Rat search(SearchEnv& env, GameState& state, const Rat& adv_budget);

Rat apply_round(SearchEnv& env, GameState& state, const Rat& adv_budget, int winner,
                Bundle selection, const Rat& price) {
    const bool protagonist_won = winner == env.protagonist;
    GameState next = state;
    Rat payment = env.mode == GameMode::Plain ? price : price * Rat(selection.size());
    next.remaining = state.remaining - selection;
    if (protagonist_won) {
        next.budgets[env.protagonist] -= payment;
        next.holdings[env.protagonist] = state.holdings[env.protagonist] | selection;
        next.active[env.protagonist] = false;
    }
    for (int e : selection.items()) next.price_log[e] = price;
    ++next.round;
    Rat new_adv_budget = protagonist_won ? adv_budget : adv_budget - payment;
    env.history.push_back({state.round, {}, winner, selection, payment});
    Rat value = search(env, next, new_adv_budget);
    env.history.pop_back();
    return value;
}

Rat search(SearchEnv& env, GameState& state, const Rat& adv_budget) {
    if (++env.nodes > env.node_limit) {
        throw SearchSpaceTooLarge("adversary search exceeded the node budget");
    }
    const auto& agent = env.instance.agent(env.protagonist);
    Rat current = agent.valuation.eval(state.holdings[env.protagonist]);
    if (state.remaining.empty()) return current;

    StrategyContext ctx{env.instance, env.protagonist, env.mode, state, env.history};
    Rat bid;
    try {
        bid = env.strategy->bid(ctx);
    } catch (const StrategyFailed&) {
        env.failed = true;
        return current;
    }
    if (bid.is_negative() || bid > state.budgets[env.protagonist]) {
        throw IllegalBid("protagonist bid outside budget in search");
    }
    // Holdings only grow and values are monotone, so once the protagonist
    // stops bidding the adversary ends the game at no cost.
    if (bid.is_zero()) return current;

    std::optional<Rat> best;
    // Option: concede the round; the protagonist wins at her bid.
    {
        Bundle selection = env.strategy->select(ctx, bid);
        if (selection.empty() || !state.remaining.contains(selection)) {
            throw IllegalSelection("protagonist selection invalid in search");
        }
        if (env.mode == GameMode::Plain && selection.size() != 1) {
            throw IllegalSelection("protagonist must take one item in the plain game");
        }
        Rat value = apply_round(env, state, adv_budget, env.protagonist, selection, bid);
        best = value;
    }
    // Options: win at exactly the protagonist's bid (ties break against her)
    // and take any affordable non-empty selection.
    if (adv_budget >= bid) {
        std::uint64_t limit = 0;  // max selection size by budget
        if (env.mode == GameMode::Plain) {
            limit = 1;
        } else {
            Rat cost;
            while (limit < static_cast<std::uint64_t>(state.remaining.size()) &&
                   cost + bid <= adv_budget) {
                cost += bid;
                ++limit;
            }
        }
        for_each_subset(state.remaining, [&](Bundle t) {
            if (t.empty() || static_cast<std::uint64_t>(t.size()) > limit) return;
            Rat value = apply_round(env, state, adv_budget, -1, t, bid);
            if (!best || value < *best) best = value;
        });
    }
    return *best;
}

}  // namespace

AdversarySearchResult adversary_search(const Instance& instance, int protagonist,
                                       const StrategyPtr& strategy, GameMode mode,
                                       long node_limit) {
    if (instance.item_count() > 5) {
        throw SearchSpaceTooLarge("adversary search limited to m <= 5");
    }
    if (!(instance.entitlement_total() == Rat(1))) {
        throw Error("adversary search: entitlements must sum to 1");
    }
    const int n = instance.agent_count();

    SearchEnv env{instance, protagonist, strategy.get(), mode, node_limit};
    strategy->reset(0);
    GameState state;
    state.remaining = instance.all_items();
    for (int i = 0; i < n; ++i) state.budgets.push_back(instance.agent(i).entitlement);
    state.holdings.assign(n, Bundle());
    state.price_log.assign(instance.item_count(), Rat(0));
    state.active.assign(n, true);
    Rat adv_budget = Rat(1) - instance.agent(protagonist).entitlement;

    AdversarySearchResult out;
    out.worst_value = search(env, state, adv_budget);
    out.strategy_failed = env.failed;
    out.nodes = env.nodes;
    return out;
}

}  // namespace fairdiv
