#include "fairdiv/exante.hpp"

#include <algorithm>

#include "fairdiv/generators.hpp"

#include "fairdiv/errors.hpp"
#include "fairdiv/lp.hpp"
#include "fairdiv/shares.hpp"

namespace fairdiv {

namespace {

std::vector<Bundle> bundles_within(Bundle available) {
    std::vector<Bundle> out;
    for_each_subset(available, [&](Bundle s) { out.push_back(s); });
    std::sort(out.begin(), out.end(),
              [](Bundle a, Bundle b) { return a.mask() < b.mask(); });
    return out;
}

}  // namespace

CLPSolution clp_solve(const Instance& instance,
                      const std::vector<Valuation>* valuations_override,
                      std::optional<Bundle> available) {
    const int n = instance.agent_count();
    Bundle avail = available.value_or(instance.all_items());
    if (static_cast<double>(n) * static_cast<double>(std::uint64_t{1} << avail.size()) > 1e5) {
        throw TooLarge("configuration LP exceeds the column budget");
    }
    if (valuations_override &&
        static_cast<int>(valuations_override->size()) != n) {
        throw Error("clp_solve: override width mismatch");
    }
    auto valuation_of = [&](int i) -> const Valuation& {
        return valuations_override ? (*valuations_override)[i] : instance.agent(i).valuation;
    };

    auto bundles = bundles_within(avail);
    const std::size_t per_agent = bundles.size();
    const std::size_t ncols = per_agent * static_cast<std::size_t>(n);

    LinearProgram lp;
    lp.objective.assign(ncols, Rat(0));
    for (int i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < per_agent; ++j) {
            lp.objective[i * per_agent + j] = valuation_of(i).eval(bundles[j]);
        }
    }
    for (int i = 0; i < n; ++i) {
        LPRow row;
        row.coeffs.assign(ncols, Rat(0));
        for (std::size_t j = 0; j < per_agent; ++j) row.coeffs[i * per_agent + j] = Rat(1);
        row.rel = Relation::Eq;
        row.rhs = Rat(1);
        lp.rows.push_back(std::move(row));
    }
    for (int e : avail.items()) {
        LPRow row;
        row.coeffs.assign(ncols, Rat(0));
        for (int i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < per_agent; ++j) {
                if (bundles[j].contains(e)) row.coeffs[i * per_agent + j] = Rat(1);
            }
        }
        row.rel = Relation::Eq;
        row.rhs = Rat(1);
        lp.rows.push_back(std::move(row));
    }

    LPResult res = lp_solve(lp);
    if (res.status != LPStatus::Optimal) {
        throw Error("configuration LP unexpectedly not optimal");
    }
    if (!lp_feasible(lp, res.solution)) {
        throw Error("configuration LP solution failed re-substitution");
    }

    CLPSolution out;
    out.objective = res.objective_value;
    for (int i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < per_agent; ++j) {
            const Rat& w = res.solution[i * per_agent + j];
            if (w > Rat(0)) out.entries.push_back({i, bundles[j], w});
        }
    }
    return out;
}

CLPSolution clp_from_mes_partitions(const Instance& instance) {
    if (!(instance.entitlement_total() == Rat(1))) {
        throw Error("mes warm start needs entitlements summing to 1");
    }
    CLPSolution out;
    for (int i = 0; i < instance.agent_count(); ++i) {
        auto share = mes(instance.agent(i).valuation, instance.agent(i).entitlement);
        for (const auto& part : share.partition.parts) {
            out.entries.push_back({i, part.bundle, part.weight});
            out.objective += part.weight * instance.agent(i).valuation.eval(part.bundle);
        }
    }
    // Verify feasibility: one bundle per agent, every item covered once.
    for (int i = 0; i < instance.agent_count(); ++i) {
        Rat total;
        for (const auto& e : out.entries) {
            if (e.agent == i) total += e.weight;
        }
        if (!(total == Rat(1))) throw Error("mes warm start: agent mass is not 1");
    }
    for (int e = 0; e < instance.item_count(); ++e) {
        Rat cover;
        for (const auto& entry : out.entries) {
            if (entry.bundle.contains(e)) cover += entry.weight;
        }
        if (!(cover == Rat(1))) throw Error("mes warm start: item coverage is not 1");
    }
    return out;
}

ExAnteResult exante_opt(const Instance& instance, ShareKind share) {
    const int n = instance.agent_count();
    const int m = instance.item_count();
    double count = 1;
    for (int e = 0; e < m; ++e) {
        count *= n;
        if (count > 1e6) throw TooLarge("allocation simplex exceeds the column budget");
    }
    const std::uint64_t nalloc = static_cast<std::uint64_t>(count);

    ExAnteResult out;
    for (int i = 0; i < n; ++i) {
        const auto& agent = instance.agent(i);
        if (share == ShareKind::Mes) {
            out.shares.push_back(mes(agent.valuation, agent.entitlement).value);
        } else {
            if (!(agent.entitlement == Rat(1, n))) {
                throw Error("maximin-based ratio needs equal entitlements");
            }
            out.shares.push_back(mms(agent.valuation, n).value);
        }
    }
    bool any_positive = false;
    for (const auto& s : out.shares) any_positive = any_positive || s > Rat(0);
    if (!any_positive) throw Error("exante_opt: all shares are zero, ratio undefined");

    // Agent bundles per assignment index (base-n digits, item 0 least
    // significant).
    auto bundle_of = [&](std::uint64_t assignment, int agent) {
        Bundle b;
        std::uint64_t a = assignment;
        for (int e = 0; e < m; ++e) {
            if (static_cast<int>(a % n) == agent) b = b.with(e);
            a /= n;
        }
        return b;
    };

    // Variables: one probability per assignment, then the ratio r.
    LinearProgram lp;
    lp.objective.assign(nalloc + 1, Rat(0));
    lp.objective[nalloc] = Rat(1);
    for (int i = 0; i < n; ++i) {
        if (!(out.shares[i] > Rat(0))) continue;
        LPRow row;
        row.coeffs.assign(nalloc + 1, Rat(0));
        for (std::uint64_t a = 0; a < nalloc; ++a) {
            row.coeffs[a] = instance.agent(i).valuation.eval(bundle_of(a, i));
        }
        row.coeffs[nalloc] = -out.shares[i];
        row.rel = Relation::Ge;
        row.rhs = Rat(0);
        lp.rows.push_back(std::move(row));
    }
    LPRow total{std::vector<Rat>(nalloc + 1, Rat(1)), Relation::Eq, Rat(1)};
    total.coeffs[nalloc] = Rat(0);
    lp.rows.push_back(std::move(total));

    LPResult res = lp_solve(lp);
    if (res.status != LPStatus::Optimal) throw Error("exante ratio LP not optimal");
    out.ratio = res.objective_value;
    for (std::uint64_t a = 0; a < nalloc; ++a) {
        if (res.solution[a] > Rat(0)) {
            Allocation alloc;
            for (int i = 0; i < n; ++i) alloc.bundles.push_back(bundle_of(a, i));
            out.lottery.support.push_back({std::move(alloc), res.solution[a]});
        }
    }
    out.expected.assign(n, Rat(0));
    for (const auto& outcome : out.lottery.support) {
        for (int i = 0; i < n; ++i) {
            out.expected[i] +=
                outcome.probability * instance.agent(i).valuation.eval(outcome.allocation.bundles[i]);
        }
    }
    return out;
}

Instance gen_vector_instance(int n, VectorClass cls) {
    if (n != 2 && n != 3) throw ParameterTooLarge("vector instances support n in {2, 3}");
    std::uint64_t m = 1;
    for (int i = 0; i < n; ++i) m *= static_cast<std::uint64_t>(n);
    const int mi = static_cast<int>(m);

    // Item index from coordinates: sum (a_i - 1) * n^(i-1).
    auto coordinate = [&](int item, int axis) {
        int v = item;
        for (int i = 0; i < axis; ++i) v /= n;
        return v % n;  // 0-based coordinate value
    };

    std::vector<Agent> agents;
    for (int i = 0; i < n; ++i) {
        if (cls == VectorClass::Xos) {
            std::vector<std::vector<Rat>> clauses;
            for (int j = 0; j < n; ++j) {
                std::vector<Rat> clause(mi, Rat(0));
                for (int item = 0; item < mi; ++item) {
                    if (coordinate(item, i) == j) clause[item] = Rat(1);
                }
                clauses.push_back(std::move(clause));
            }
            agents.push_back(Agent{Valuation::xos(mi, std::move(clauses)), Rat(1, n)});
        } else {
            if (n != 2) {
                throw ParameterTooLarge(
                    "the subadditive vector valuation has no compact representation; only n=2 "
                    "is materializable as a table");
            }
            std::vector<Rat> table(std::size_t{1} << mi, Rat(0));
            // Fiber masks for this agent.
            std::vector<std::uint64_t> fibers(n, 0);
            for (int item = 0; item < mi; ++item) {
                fibers[coordinate(item, i)] |= std::uint64_t{1} << item;
            }
            for (std::uint64_t s = 1; s < table.size(); ++s) {
                bool has_fiber = false;
                for (auto f : fibers) has_fiber = has_fiber || (s & f) == f;
                table[s] = has_fiber ? Rat(2) : Rat(1);
            }
            agents.push_back(Agent{Valuation::table(mi, std::move(table)), Rat(1, n)});
        }
    }
    Instance out(mi, std::move(agents));

    // Verify the construction's maximin value: the coordinate fibers are a
    // partition witnessing the lower bound, and no bundle exceeds the full
    // set's value, which the fibers attain.
    Rat target = cls == VectorClass::Subadditive ? Rat(2) : Rat::pow(Rat(n), n - 1);
    for (int i = 0; i < n; ++i) {
        const auto& v = out.agent(i).valuation;
        if (!(v.eval(out.all_items()) == target)) {
            throw Error("vector instance: full-set value mismatch");
        }
        for (int j = 0; j < n; ++j) {
            Bundle fiber;
            for (int item = 0; item < mi; ++item) {
                if (coordinate(item, i) == j) fiber = fiber.with(item);
            }
            if (!(v.eval(fiber) == target)) throw Error("vector instance: fiber value mismatch");
        }
    }
    return out;
}

RoundingReport round_solution(const Instance& instance, const CLPSolution& x,
                              std::uint64_t seed, int trials) {
    const int n = instance.agent_count();
    Rng rng(seed);
    auto uniform_unit = [&rng]() {
        return Rat(BigInt(rng() >> 11), BigInt(std::uint64_t{1} << 53));
    };

    // Per-agent sampling rows in entry order.
    std::vector<std::vector<const CLPSolution::Entry*>> rows(n);
    for (const auto& e : x.entries) rows[e.agent].push_back(&e);

    std::vector<Rat> sums(n, Rat(0));
    std::vector<int> priority(n);
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<Bundle> tentative(n);
        for (int i = 0; i < n; ++i) {
            Rat u = uniform_unit();
            Rat acc;
            Bundle pick;
            for (const auto* e : rows[i]) {
                acc += e->weight;
                pick = e->bundle;
                if (u < acc) break;
            }
            tentative[i] = pick;
        }
        // Uniformly random priority order (deterministic Fisher-Yates).
        for (int i = 0; i < n; ++i) priority[i] = i;
        for (int i = n - 1; i > 0; --i) {
            int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
            std::swap(priority[i], priority[j]);
        }
        std::uint64_t taken = 0;
        for (int rank = 0; rank < n; ++rank) {
            int agent = priority[rank];
            Bundle kept = tentative[agent] - Bundle(taken);
            taken |= tentative[agent].mask();
            sums[agent] += instance.agent(agent).valuation.eval(kept);
        }
    }

    RoundingReport report;
    report.trials = trials;
    for (int i = 0; i < n; ++i) {
        RoundingReport::PerAgent row;
        row.lp_contribution = x.agent_contribution(i, instance.agent(i).valuation);
        row.empirical_mean = sums[i] / Rat(trials);
        row.ratio = row.lp_contribution.is_zero() ? Rat(1)
                                                  : row.empirical_mean / row.lp_contribution;
        report.agents.push_back(std::move(row));
    }
    return report;
}

}  // namespace fairdiv
