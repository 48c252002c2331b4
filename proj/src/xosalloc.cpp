#include "fairdiv/xosalloc.hpp"

#include <algorithm>
#include <map>

#include "fairdiv/errors.hpp"
#include "fairdiv/shares.hpp"

namespace fairdiv {

Allocation welfare_max(const Instance& instance, const std::vector<Valuation>& valuations) {
    const int n = instance.agent_count();
    const int m = instance.item_count();
    if (static_cast<int>(valuations.size()) != n) {
        throw Error("welfare_max: one valuation per agent required");
    }
    double count = 1;
    for (int e = 0; e < m; ++e) {
        count *= n;
        if (count > 1e7) throw TooLarge("welfare_max enumeration exceeds 10^7 allocations");
    }
    const std::uint64_t total = static_cast<std::uint64_t>(count);

    // Owner digits with item 0 most significant, so ascending index order is
    // lexicographic order of the per-item owner vector.
    std::vector<std::uint64_t> place(m, 1);
    for (int e = m - 2; e >= 0; --e) place[e] = place[e + 1] * static_cast<std::uint64_t>(n);

    Allocation best;
    Rat best_welfare(-1);
    std::vector<Bundle> bundles(n);
    for (std::uint64_t a = 0; a < total; ++a) {
        for (auto& b : bundles) b = Bundle();
        for (int e = 0; e < m; ++e) {
            int owner = static_cast<int>((a / place[e]) % static_cast<std::uint64_t>(n));
            bundles[owner] = bundles[owner].with(e);
        }
        Rat welfare;
        for (int i = 0; i < n; ++i) welfare += valuations[i].eval(bundles[i]);
        if (welfare > best_welfare) {
            best_welfare = std::move(welfare);
            best.bundles = bundles;
        }
    }
    return best;
}

namespace {

// Capped normalized valuation min(b_i, (b_i / APS_i) * v_i); identically
// zero when the share is zero (such an agent's bound is vacuous).
Valuation hat_valuation(const Valuation& v, const Rat& entitlement, const Rat& share,
                        const Rat& cap) {
    if (share.is_zero()) {
        return Valuation::additive(std::vector<Rat>(v.item_count(), Rat(0)));
    }
    return Valuation::truncated(v.scaled(entitlement / share), cap);
}

}  // namespace

ApsAllocationResult apsxos_allocate(const Instance& instance) {
    const int n = instance.agent_count();
    const Rat b_total = instance.entitlement_total();

    ApsAllocationResult out;
    std::vector<Valuation> hats;
    for (int i = 0; i < n; ++i) {
        const auto& agent = instance.agent(i);
        out.aps.push_back(aps(agent.valuation, agent.entitlement).value);
        hats.push_back(hat_valuation(agent.valuation, agent.entitlement, out.aps[i],
                                     agent.entitlement));
    }
    out.allocation = welfare_max(instance, hats);
    for (int i = 0; i < n; ++i) {
        const auto& agent = instance.agent(i);
        out.values.push_back(agent.valuation.eval(out.allocation.bundles[i]));
        Rat floor = (Rat(1) - b_total + agent.entitlement) * out.aps[i];
        if (out.values[i] < floor) {
            throw BoundViolated("agent " + std::to_string(i) + " got " + out.values[i].str() +
                                " below (1 - b + b_i) * APS = " + floor.str());
        }
    }
    return out;
}

std::pair<Bundle, Bundle> split_min_value(Bundle b, const Valuation& v, const Rat& threshold) {
    auto order = b.items();
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return v.eval(Bundle::single(y)) < v.eval(Bundle::single(x));
    });
    if (!(threshold > Rat(0))) {
        if (order.empty()) throw Unsplittable("cannot split an empty bundle");
        Bundle first = Bundle::single(order.front());
        return {first, b - first};
    }
    Bundle b1;
    bool reached = false;
    for (int e : order) {
        b1 = b1.with(e);
        if (v.eval(b1) >= threshold) {
            reached = true;
            break;
        }
    }
    if (!reached) throw Unsplittable("bundle value never reaches the threshold");
    Bundle b2 = b - b1;
    if (v.eval(b2) < threshold) {
        throw Unsplittable("complement value " + v.eval(b2).str() + " below threshold " +
                           threshold.str());
    }
    return {b1, b2};
}

std::array<Bundle, 3> three_set_partition(Bundle b, const std::vector<Rat>& item_values, int e) {
    if (!b.contains(e)) throw Error("three_set_partition: pivot item must lie in the bundle");
    if (b.size() > 13) throw TooLarge("three_set_partition enumeration limited to |B| <= 13");
    Rat total;
    for (int f : b.items()) total += item_values[f];
    if (!(total > Rat(0))) throw HypothesisViolated("three_set_partition: zero total value");
    // Hypothesis: every pair of items in b is worth < total / 4.
    auto items_b = b.items();
    for (std::size_t i = 0; i < items_b.size(); ++i) {
        for (std::size_t j = i + 1; j < items_b.size(); ++j) {
            if ((item_values[items_b[i]] + item_values[items_b[j]]) * Rat(4) >= total) {
                throw HypothesisViolated("a pair reaches a quarter of the bundle value");
            }
        }
    }

    auto rest = (b.without(e)).items();
    const std::size_t t = rest.size();
    // Spread-minimizing 3-partition of b minus {e}; first achiever in
    // assignment order keeps the result deterministic.
    std::vector<int> assign(t, 0);
    std::vector<int> best_assign;
    Rat best_spread;
    bool have = false;
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < t; ++i) combos *= 3;
    for (std::uint64_t code = 0; code < combos; ++code) {
        std::uint64_t c = code;
        std::array<Rat, 3> sums{Rat(0), Rat(0), Rat(0)};
        for (std::size_t i = 0; i < t; ++i) {
            assign[i] = static_cast<int>(c % 3);
            c /= 3;
            sums[assign[i]] += item_values[rest[i]];
        }
        std::array<Rat, 3> sorted = sums;
        std::sort(sorted.begin(), sorted.end(), [](const Rat& a, const Rat& bb) { return bb < a; });
        Rat spread = sorted[0] - sorted[2];
        if (!have || spread < best_spread) {
            have = true;
            best_spread = std::move(spread);
            best_assign = assign;
        }
    }

    std::array<Bundle, 3> parts;
    std::array<Rat, 3> sums{Rat(0), Rat(0), Rat(0)};
    for (std::size_t i = 0; i < t; ++i) {
        parts[best_assign[i]] = parts[best_assign[i]].with(rest[i]);
        sums[best_assign[i]] += item_values[rest[i]];
    }
    // Order parts by value descending (stable on part index).
    std::array<int, 3> idx{0, 1, 2};
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int bb) { return sums[bb] < sums[a]; });
    Bundle s1 = parts[idx[0]], s2 = parts[idx[1]], s3 = parts[idx[2]];

    std::array<Bundle, 3> out{s1 | s2, s2 | s3, s3 | s1};
    for (const auto& part : out) {
        Rat value;
        for (int f : part.items()) value += item_values[f];
        if (value * Rat(2) < total) {
            throw LemmaViolated("three_set_partition produced a set below half the value");
        }
    }
    return out;
}

namespace {

struct RebuiltPartition {
    struct Piece {
        Bundle bundle;
        Rat weight;
        bool single_item;
    };
    std::vector<Piece> pieces;
    Rat single_weight;  // total weight of single-item pieces
};

// New fractional partition for the replacement procedure: bundles holding a
// large item collapse to that item, the rest split into two halves, each of
// value at least a third of the (normalized) entitlement.
RebuiltPartition rebuild_partition(const FractionalPartition& fp, const Valuation& u,
                                   const Rat& large) {
    RebuiltPartition out;
    for (const auto& part : fp.parts) {
        if (part.weight.is_zero()) continue;
        int large_item = -1;
        Rat large_value;
        for (int e : part.bundle.items()) {
            Rat value = u.eval(Bundle::single(e));
            if (value >= large && (large_item < 0 || value > large_value)) {
                large_item = e;
                large_value = std::move(value);
            }
        }
        if (large_item >= 0) {
            out.pieces.push_back({Bundle::single(large_item), part.weight, true});
            out.single_weight += part.weight;
        } else {
            auto [b1, b2] = split_min_value(part.bundle, u, large);
            Rat half = part.weight / Rat(2);
            out.pieces.push_back({b1, half, false});
            out.pieces.push_back({b2, half, false});
        }
    }
    return out;
}

}  // namespace

OneSixthResult allocate_one_sixth(const Instance& instance, int max_steps) {
    const int n = instance.agent_count();
    if (!(instance.entitlement_total() == Rat(1))) {
        throw Error("one-sixth allocation needs entitlements summing to 1");
    }

    OneSixthResult out;
    std::vector<Valuation> scaled;        // u_i with share b_i
    std::vector<Valuation> hats;          // min(u_i, b_i / 3)
    std::vector<RebuiltPartition> parts;  // per-agent rebuilt partitions
    Rat b_min(1);
    for (int i = 0; i < n; ++i) {
        const auto& agent = instance.agent(i);
        auto share = aps(agent.valuation, agent.entitlement);
        if (!(share.value > Rat(0))) {
            throw Error("one-sixth allocation requires positive shares");
        }
        out.aps.push_back(share.value);
        Valuation u = agent.valuation.scaled(agent.entitlement / share.value);
        scaled.push_back(u);
        hats.push_back(Valuation::truncated(u, agent.entitlement / Rat(3)));
        parts.push_back(rebuild_partition(share.partition, u, agent.entitlement / Rat(3)));
        b_min = min(b_min, agent.entitlement);
    }
    if (max_steps < 0) {
        // ceil((1/b_min)^2) plus margin.
        BigInt num = b_min.denominator() * b_min.denominator();
        BigInt den = b_min.numerator() * b_min.numerator();
        max_steps = static_cast<int>((num + den - 1) / den) + 10;
    }

    Allocation alloc = welfare_max(instance, hats);
    auto hat_welfare = [&]() {
        Rat w;
        for (int i = 0; i < n; ++i) w += hats[i].eval(alloc.bundles[i]);
        return w;
    };

    for (;;) {
        int needy = -1;
        for (int i = 0; i < n; ++i) {
            if (hats[i].eval(alloc.bundles[i]) * Rat(6) < instance.agent(i).entitlement) {
                needy = i;
                break;
            }
        }
        if (needy < 0) break;
        if (static_cast<int>(out.steps.size()) >= max_steps) {
            throw StepBudgetExhausted("replacement sequence exceeded " +
                                      std::to_string(max_steps) + " steps");
        }

        // Per-item contribution to the other agents' welfare, through an
        // additive function supporting each capped valuation on its bundle.
        std::vector<Rat> contribution(instance.item_count(), Rat(0));
        Rat w_others;
        for (int j = 0; j < n; ++j) {
            if (j == needy || alloc.bundles[j].empty()) continue;
            auto support = additive_supporting(hats[j], alloc.bundles[j]);
            for (int e : alloc.bundles[j].items()) contribution[e] = support[e];
            w_others += hats[j].eval(alloc.bundles[j]);
        }

        const auto& rebuilt = parts[needy];
        // Fraction of the others' welfare carried by the items that form the
        // needy agent's single-item pieces.
        Rat single_contribution;
        {
            std::uint64_t seen = 0;
            for (const auto& piece : rebuilt.pieces) {
                if (!piece.single_item) continue;
                int e = piece.bundle.lowest();
                if ((seen >> e) & 1u) continue;
                seen |= std::uint64_t{1} << e;
                single_contribution += contribution[e];
            }
        }
        const Rat& alpha_i = rebuilt.single_weight;
        bool use_single;
        if (alpha_i == Rat(1)) {
            use_single = true;
        } else if (alpha_i.is_zero()) {
            use_single = false;
        } else if (w_others.is_zero()) {
            use_single = true;  // alpha = 0 <= alpha_i
        } else {
            use_single = alpha_i * w_others >= single_contribution;  // alpha_i >= alpha
        }

        Bundle replacement;
        bool found = false;
        Rat best_cost;
        for (const auto& piece : rebuilt.pieces) {
            if (piece.single_item != use_single) continue;
            Rat cost;
            for (int e : piece.bundle.items()) cost += contribution[e];
            if (!found || cost < best_cost ||
                (cost == best_cost && lex_less(piece.bundle, replacement))) {
                found = true;
                best_cost = std::move(cost);
                replacement = piece.bundle;
            }
        }
        if (!found) throw Error("replacement procedure found no candidate bundle");

        ReplacementStep step;
        step.agent = needy;
        step.kind = use_single ? ReplacementStep::Kind::SingleItem
                               : ReplacementStep::Kind::MultiItems;
        step.old_bundle = alloc.bundles[needy];
        step.new_bundle = replacement;
        step.welfare_before = hat_welfare();
        alloc.bundles[needy] = replacement;
        for (int j = 0; j < n; ++j) {
            if (j != needy) alloc.bundles[j] = alloc.bundles[j] - replacement;
        }
        step.welfare_after = hat_welfare();
        out.steps.push_back(std::move(step));
    }

    out.allocation = alloc;
    for (int i = 0; i < n; ++i) {
        out.values.push_back(instance.agent(i).valuation.eval(alloc.bundles[i]));
        // v_i >= APS_i / 6, equivalently the capped value reaches b_i / 6.
        if (out.values[i] * Rat(6) < out.aps[i]) {
            throw BoundViolated("agent " + std::to_string(i) + " ended below a sixth of " +
                                out.aps[i].str());
        }
    }
    return out;
}

Equal417Result allocate_equal_417(const Instance& instance, const Rat& rho) {
    const int n = instance.agent_count();
    if (!instance.equal_entitlements() || !(instance.entitlement_total() == Rat(1))) {
        throw Error("equal-entitlement allocation needs entitlements of exactly 1/n");
    }
    const bool default_rho = rho == Rat(4, 17);

    Equal417Result out;
    out.rho = rho;
    out.allocation.bundles.assign(n, Bundle());
    std::vector<Valuation> normalized;
    for (int i = 0; i < n; ++i) {
        const auto& agent = instance.agent(i);
        auto share = aps(agent.valuation, agent.entitlement);
        if (!(share.value > Rat(0))) {
            throw Error("equal-entitlement allocation requires positive shares");
        }
        out.aps.push_back(share.value);
        normalized.push_back(agent.valuation.scaled(Rat(1) / share.value));
        out.normalized_partitions.push_back(share.partition);
    }

    std::vector<bool> remaining_agent(n, true);
    Bundle remaining = instance.all_items();
    for (;;) {
        // Globally smallest acceptable set; ties prefer higher normalized
        // value, then lower agent index, then lexicographic.
        bool found = false;
        int best_size = 0, best_agent = -1;
        Rat best_value;
        Bundle best_set;
        for_each_subset(remaining, [&](Bundle s) {
            if (s.empty()) return;
            for (int i = 0; i < n; ++i) {
                if (!remaining_agent[i]) continue;
                Rat value = normalized[i].eval(s);
                if (value < rho) continue;
                int size = s.size();
                bool better = false;
                if (!found || size < best_size) {
                    better = true;
                } else if (size == best_size) {
                    if (value > best_value) better = true;
                    else if (value == best_value && i < best_agent) better = true;
                    else if (value == best_value && i == best_agent && lex_less(s, best_set)) {
                        better = true;
                    }
                }
                if (better) {
                    found = true;
                    best_size = size;
                    best_agent = i;
                    best_value = value;
                    best_set = s;
                }
            }
        });
        if (!found || best_size >= 5) break;
        out.allocation.bundles[best_agent] = best_set;
        out.step1.push_back({best_agent, best_set});
        remaining_agent[best_agent] = false;
        remaining = remaining - best_set;
        bool any = false;
        for (int i = 0; i < n; ++i) any = any || remaining_agent[i];
        if (!any) break;
    }

    out.remaining_items = remaining;
    for (int i = 0; i < n; ++i) {
        if (remaining_agent[i]) out.remaining_agents.push_back(i);
    }

    if (!out.remaining_agents.empty()) {
        const int n5 = static_cast<int>(out.remaining_agents.size());
        // Halved entitlements on the residue, allocated by the capped welfare
        // maximizer; bundles map back to original item indices.
        std::vector<Agent> sub_agents;
        for (int i : out.remaining_agents) {
            sub_agents.push_back(
                Agent{restrict_to(normalized[i], remaining), Rat(1, 2 * n5)});
        }
        Instance sub(remaining.size(), std::move(sub_agents));
        auto sub_result = apsxos_allocate(sub);
        auto items = remaining.items();
        for (int a = 0; a < n5; ++a) {
            Bundle global;
            for (int j : sub_result.allocation.bundles[a].items()) global = global.with(items[j]);
            out.allocation.bundles[out.remaining_agents[a]] = global;
        }
    }

    for (int i = 0; i < n; ++i) {
        out.values.push_back(instance.agent(i).valuation.eval(out.allocation.bundles[i]));
        if (default_rho && out.values[i] * Rat(17) < Rat(4) * out.aps[i]) {
            throw BoundViolated("agent " + std::to_string(i) + " got " + out.values[i].str() +
                                " below (4/17) * APS with APS " + out.aps[i].str());
        }
    }
    return out;
}

bool lemma817_check(const Instance& instance, const Equal417Result& result) {
    if (result.remaining_agents.empty()) return true;
    if (!(result.rho == Rat(4, 17))) {
        throw Error("lemma817_check applies to the default acceptability threshold");
    }
    const int n = instance.agent_count();
    const int n5 = static_cast<int>(result.remaining_agents.size());
    const Rat target(8, 17);
    const Rat rho5(1, 2 * n5);
    const Rat scale = Rat(n) / Rat(n5);

    for (int agent : result.remaining_agents) {
        Valuation u = instance.agent(agent).valuation.scaled(Rat(1) / result.aps[agent]);
        std::vector<FractionalPartition::Part> rebuilt;

        for (const auto& part : result.normalized_partitions[agent].parts) {
            if (part.weight.is_zero()) continue;
            const Bundle b = part.bundle;
            // Items removed from b in the first stage, bucketed by the size
            // of the set they left with.
            std::array<int, 5> taken{0, 0, 0, 0, 0};
            Bundle removed;
            for (const auto& removal : result.step1) {
                Bundle hit = b & removal.set;
                taken[removal.set.size()] += hit.size();
                removed = removed | hit;
            }
            Bundle residue = b - removed;
            const Rat w = part.weight;

            // Case 1: enough weight already left through the removals.
            Rat drain = Rat(taken[1]) + Rat(taken[2], 2) + Rat(taken[3], 3) + Rat(taken[4], 4);
            if (drain >= Rat(1)) continue;

            if (taken[1] + taken[2] + taken[3] + taken[4] == 0) {
                // Case 2: untouched bundle splits into two halves.
                auto [b1, b2] = split_min_value(b, u, target);
                rebuilt.push_back({b1, w / Rat(2) * scale});
                rebuilt.push_back({b2, w / Rat(2) * scale});
            } else if (taken[2] == 1 && taken[3] + taken[4] <= 2) {
                // Case 3.
                rebuilt.push_back({residue, w / Rat(2) * scale});
            } else if (taken[2] == 0 && taken[3] + taken[4] >= 2 && taken[3] + taken[4] <= 4) {
                // Case 4.
                rebuilt.push_back({residue, w / Rat(2) * scale});
            } else if (taken[2] == 0 && taken[3] + taken[4] == 1) {
                // Case 5: one item gone through a 3- or 4-set; cover the rest
                // with three overlapping sets from the supporting additive
                // function.
                int e = (b & removed).lowest();
                auto support = additive_supporting(u, b);
                auto three = three_set_partition(b, support, e);
                for (const auto& piece : three) {
                    rebuilt.push_back({piece, w / Rat(4) * scale});
                }
            } else {
                throw LemmaViolated("removal trace fell outside the five cases");
            }
        }

        // The paper's two certified bounds, then exact normalization.
        Rat total;
        for (const auto& p : rebuilt) total += p.weight;
        if (total < Rat(1)) {
            throw LemmaViolated("rebuilt weights sum to " + total.str() + " < 1");
        }
        for (int e : result.remaining_items.items()) {
            Rat cover;
            for (const auto& p : rebuilt) {
                if (p.bundle.contains(e)) cover += p.weight;
            }
            if (cover > rho5) {
                throw LemmaViolated("item " + std::to_string(e) + " covered by " + cover.str() +
                                    " > 1/(2*n5)");
            }
        }
        for (const auto& p : rebuilt) {
            if (!result.remaining_items.contains(p.bundle)) {
                throw LemmaViolated("rebuilt bundle leaves the remaining items");
            }
            if (u.eval(p.bundle) < target) {
                throw LemmaViolated("rebuilt bundle value " + u.eval(p.bundle).str() +
                                    " below 8/17");
            }
        }

        // Normalize the mass to 1, then pad item coverage up to exactly
        // 1/(2*n5) by moving mass onto supersets (monotone, so values hold).
        for (auto& p : rebuilt) p.weight /= total;
        for (int e : result.remaining_items.items()) {
            Rat cover;
            for (const auto& p : rebuilt) {
                if (p.bundle.contains(e)) cover += p.weight;
            }
            Rat deficit = rho5 - cover;
            if (deficit.is_negative()) {
                throw LemmaViolated("normalized coverage exceeds 1/(2*n5)");
            }
            for (std::size_t j = 0; j < rebuilt.size() && deficit > Rat(0); ++j) {
                if (rebuilt[j].bundle.contains(e) || rebuilt[j].weight.is_zero()) continue;
                Rat moved = min(deficit, rebuilt[j].weight);
                rebuilt[j].weight -= moved;
                rebuilt.push_back({rebuilt[j].bundle.with(e), moved});
                deficit -= moved;
            }
            if (deficit > Rat(0)) {
                throw LemmaViolated("cannot pad coverage of item " + std::to_string(e));
            }
        }

        // Exact fractional rho5-partition of the remaining items.
        Rat mass;
        for (const auto& p : rebuilt) mass += p.weight;
        if (!(mass == Rat(1))) throw LemmaViolated("normalized mass is not exactly 1");
        for (int e : result.remaining_items.items()) {
            Rat cover;
            for (const auto& p : rebuilt) {
                if (p.bundle.contains(e)) cover += p.weight;
            }
            if (!(cover == rho5)) throw LemmaViolated("padded coverage is not exactly 1/(2*n5)");
        }
        for (const auto& p : rebuilt) {
            if (p.weight > Rat(0) && u.eval(p.bundle) < target) {
                throw LemmaViolated("padded bundle fell below 8/17");
            }
        }
    }
    return true;
}

}  // namespace fairdiv
