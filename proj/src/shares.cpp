#include "fairdiv/shares.hpp"

#include <algorithm>
#include <map>

#include "fairdiv/errors.hpp"
#include "fairdiv/exante.hpp"
#include "fairdiv/lp.hpp"

namespace fairdiv {

namespace {

std::vector<Rat> all_values(const Valuation& v) {
    const int m = v.item_count();
    std::vector<Rat> values(std::size_t{1} << m);
    for (std::uint64_t s = 0; s < values.size(); ++s) values[s] = v.eval(Bundle(s));
    return values;
}

std::vector<Rat> distinct_positive_sorted(const std::vector<Rat>& values) {
    std::vector<Rat> out;
    for (const auto& x : values) {
        if (x > Rat(0)) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Feasibility LP for a fractional b-partition supported on the bundles with
// value >= threshold (empty bundle excluded). Returns the support on success.
std::optional<std::vector<FractionalPartition::Part>> partition_at_threshold(
    const std::vector<Rat>& values, int m, const Rat& b, const Rat& threshold) {
    std::vector<std::uint64_t> columns;
    for (std::uint64_t s = 1; s < values.size(); ++s) {
        if (values[s] >= threshold) columns.push_back(s);
    }
    if (columns.empty()) return std::nullopt;
    LinearProgram lp;
    lp.objective.assign(columns.size(), Rat(0));
    LPRow total{std::vector<Rat>(columns.size(), Rat(1)), Relation::Eq, Rat(1)};
    lp.rows.push_back(std::move(total));
    for (int e = 0; e < m; ++e) {
        LPRow row;
        row.coeffs.assign(columns.size(), Rat(0));
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if ((columns[j] >> e) & 1u) row.coeffs[j] = Rat(1);
        }
        row.rel = Relation::Eq;
        row.rhs = b;
        lp.rows.push_back(std::move(row));
    }
    LPResult res = lp_solve(lp);
    if (res.status != LPStatus::Optimal) return std::nullopt;
    std::vector<FractionalPartition::Part> parts;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (res.solution[j] > Rat(0)) {
            parts.push_back({Bundle(columns[j]), res.solution[j]});
        }
    }
    return parts;
}

}  // namespace

MmsResult mms(const Valuation& v, int n) {
    const int m = v.item_count();
    if (m > 12 || n > 5) throw TooLarge("mms enumeration limited to m <= 12, n <= 5");
    if (n < 1) throw Error("mms: need at least one part");
    auto values = all_values(v);
    const std::size_t size = values.size();

    // f[j][mask]: best max-min over j parts of `mask`; the part holding the
    // lowest item of `mask` is enumerated explicitly.
    std::vector<std::vector<Rat>> f(n + 1, std::vector<Rat>(size));
    std::vector<std::vector<std::uint64_t>> choice(n + 1,
                                                   std::vector<std::uint64_t>(size, 0));
    f[1] = values;
    for (int j = 2; j <= n; ++j) {
        f[j][0] = Rat(0);
        for (std::uint64_t mask = 1; mask < size; ++mask) {
            std::uint64_t low = mask & (~mask + 1);
            Rat best(-1);
            std::uint64_t best_sub = 0;
            std::uint64_t rest = mask & ~low;
            for (std::uint64_t sub = rest;; sub = (sub - 1) & rest) {
                std::uint64_t part = sub | low;
                const Rat& own = values[part];
                const Rat& other = f[j - 1][mask & ~part];
                const Rat& value = own < other ? own : other;
                if (value > best ||
                    (value == best && lex_less(Bundle(part), Bundle(best_sub)))) {
                    best = value;
                    best_sub = part;
                }
                if (sub == 0) break;
            }
            f[j][mask] = std::move(best);
            choice[j][mask] = best_sub;
        }
    }

    MmsResult out;
    out.value = f[n][size - 1];
    std::uint64_t mask = size - 1;
    for (int j = n; j >= 2; --j) {
        std::uint64_t part = mask == 0 ? 0 : choice[j][mask];
        out.partition.push_back(Bundle(part));
        mask &= ~part;
    }
    out.partition.push_back(Bundle(mask));
    return out;
}

ShareValue aps(const Valuation& v, const Rat& b) {
    if (!(b > Rat(0)) || b > Rat(1)) throw Error("aps: entitlement must be in (0, 1]");
    const int m = v.item_count();
    if (m > 16) throw TooLarge("aps limited to m <= 16");
    auto values = all_values(v);
    auto candidates = distinct_positive_sorted(values);

    ShareValue out;
    out.partition.rho = b;
    int lo = 0, hi = static_cast<int>(candidates.size()) - 1, best = -1;
    std::vector<FractionalPartition::Part> best_parts;
    while (lo <= hi) {
        int mid = lo + (hi - lo) / 2;
        auto parts = partition_at_threshold(values, m, b, candidates[mid]);
        if (parts) {
            best = mid;
            best_parts = std::move(*parts);
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    if (best >= 0) {
        out.value = candidates[best];
        out.partition.parts = std::move(best_parts);
    } else {
        out.value = Rat(0);
        out.partition.parts.push_back({Bundle::full(m), b});
        if (b < Rat(1)) out.partition.parts.push_back({Bundle(), Rat(1) - b});
    }
    return out;
}

ShareValue mes(const Valuation& v, const Rat& b) {
    if (!(b > Rat(0)) || b > Rat(1)) throw Error("mes: entitlement must be in (0, 1]");
    const int m = v.item_count();
    if (m > 16) throw TooLarge("mes limited to m <= 16");
    auto values = all_values(v);

    LinearProgram lp;
    lp.objective = values;  // index = bundle mask; the empty bundle contributes 0
    LPRow total{std::vector<Rat>(values.size(), Rat(1)), Relation::Eq, Rat(1)};
    lp.rows.push_back(std::move(total));
    for (int e = 0; e < m; ++e) {
        LPRow row;
        row.coeffs.assign(values.size(), Rat(0));
        for (std::uint64_t s = 0; s < values.size(); ++s) {
            if ((s >> e) & 1u) row.coeffs[s] = Rat(1);
        }
        row.rel = Relation::Eq;
        row.rhs = b;
        lp.rows.push_back(std::move(row));
    }
    LPResult res = lp_solve(lp);
    if (res.status != LPStatus::Optimal) throw Error("mes: partition LP unexpectedly infeasible");

    ShareValue out;
    out.value = res.objective_value;
    out.partition.rho = b;
    for (std::uint64_t s = 0; s < values.size(); ++s) {
        if (res.solution[s] > Rat(0)) out.partition.parts.push_back({Bundle(s), res.solution[s]});
    }
    return out;
}

Rat aps_via_clp(const Valuation& v, int n) {
    const int m = v.item_count();
    if (m > 12) throw TooLarge("aps_via_clp limited to m <= 12");
    if (n < 1) throw Error("aps_via_clp: need n >= 1");
    auto values = all_values(v);
    auto candidates = distinct_positive_sorted(values);

    std::vector<Agent> agents;
    for (int i = 0; i < n; ++i) agents.push_back(Agent{v, Rat(1, n)});
    Instance clones(m, std::move(agents));

    // The LP value is n*C exactly when C is at most the anyprice share.
    auto attains = [&](const Rat& cap) {
        std::vector<Valuation> capped(static_cast<std::size_t>(n), Valuation::truncated(v, cap));
        CLPSolution sol = clp_solve(clones, &capped);
        return sol.objective == Rat(n) * cap;
    };

    int lo = 0, hi = static_cast<int>(candidates.size()) - 1, best = -1;
    while (lo <= hi) {
        int mid = lo + (hi - lo) / 2;
        if (attains(candidates[mid])) {
            best = mid;
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    return best >= 0 ? candidates[best] : Rat(0);
}

namespace {

// Max-welfare partition of `mask` into exactly `parts` bundles for identical
// clones of v, by the same subset DP as the maximin computation.
std::vector<Bundle> clone_welfare_partition(const std::vector<Rat>& values, std::uint64_t mask,
                                            int parts) {
    std::vector<std::map<std::uint64_t, std::pair<Rat, std::uint64_t>>> memo(parts + 1);
    auto g = [&](auto&& self, int j, std::uint64_t rest) -> Rat {
        if (j == 1 || rest == 0) return values[rest];
        auto it = memo[j].find(rest);
        if (it != memo[j].end()) return it->second.first;
        std::uint64_t low = rest & (~rest + 1);
        std::uint64_t others = rest & ~low;
        Rat best(-1);
        std::uint64_t best_part = 0;
        for (std::uint64_t sub = others;; sub = (sub - 1) & others) {
            std::uint64_t part = sub | low;
            Rat value = values[part] + self(self, j - 1, rest & ~part);
            if (value > best || (value == best && lex_less(Bundle(part), Bundle(best_part)))) {
                best = std::move(value);
                best_part = part;
            }
            if (sub == 0) break;
        }
        memo[j][rest] = {best, best_part};
        return memo[j][rest].first;
    };
    g(g, parts, mask);
    std::vector<Bundle> out;
    std::uint64_t rest = mask;
    for (int j = parts; j >= 2; --j) {
        if (rest == 0) {
            out.push_back(Bundle(0));
            continue;
        }
        std::uint64_t part = memo[j][rest].second;
        out.push_back(Bundle(part));
        rest &= ~part;
    }
    out.push_back(Bundle(rest));
    return out;
}

}  // namespace

std::vector<Bundle> approx_mms_partition_subadditive(const Valuation& v, int n) {
    const int m = v.item_count();
    if (m > 12 || n > 5) throw TooLarge("approx mms partition limited to m <= 12, n <= 5");
    if (n < 1) throw Error("approx mms partition: need n >= 1");
    auto values = all_values(v);

    std::vector<Agent> top_agents(static_cast<std::size_t>(n), Agent{v, Rat(1, n)});
    Instance top(m, std::move(top_agents));
    const Rat top_value = clp_solve(top).objective;  // the guarantee baseline
    const Rat floor = top_value / Rat(6 * n);

    std::vector<Bundle> parts;
    Bundle remaining = Bundle::full(m);
    int agents = n;
    while (agents > 0) {
        if (agents == 1) {
            parts.push_back(remaining);
            break;
        }
        std::vector<Agent> level_agents(static_cast<std::size_t>(agents),
                                        Agent{v, Rat(1, agents)});
        Instance level(m, std::move(level_agents));
        Rat t = clp_solve(level, nullptr, remaining).objective;
        Rat big = t / Rat(3 * agents);

        auto [best_value, best_item] = best_single_item(v, remaining);
        if (best_item >= 0 && best_value >= big) {
            parts.push_back(Bundle::single(best_item));
            remaining = remaining.without(best_item);
            --agents;
            continue;
        }

        // No large item: exact welfare-maximizing split into `agents`
        // bundles, then greedy chunk cutting from each.
        Rat low_cut = t / Rat(6 * agents);
        auto sources = clone_welfare_partition(values, remaining.mask(), agents);
        std::vector<Bundle> chunks;
        for (Bundle source : sources) {
            Bundle rest = source;
            while (v.eval(rest) >= low_cut) {
                // A single item already in range, if any, is a chunk by
                // itself; otherwise greedy accumulation crosses the lower cut
                // with an increment below it, staying under the upper cut.
                Bundle chunk;
                auto [iv, item] = best_single_item(v, rest);
                if (item >= 0 && iv >= low_cut) {
                    chunk = Bundle::single(item);
                } else {
                    auto order = rest.items();
                    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                        return v.eval(Bundle::single(b)) < v.eval(Bundle::single(a));
                    });
                    for (int e : order) {
                        chunk = chunk.with(e);
                        if (v.eval(chunk) >= low_cut) break;
                    }
                }
                if (v.eval(chunk) < low_cut) break;  // exhausted without reaching the cut
                chunks.push_back(chunk);
                rest = rest - chunk;
            }
        }
        if (static_cast<int>(chunks.size()) < agents) {
            throw GuaranteeViolated("chunk cutting produced " + std::to_string(chunks.size()) +
                                    " bundles for " + std::to_string(agents) + " agents");
        }
        for (int i = 0; i < agents; ++i) parts.push_back(chunks[i]);
        agents = 0;
    }

    while (static_cast<int>(parts.size()) < n) parts.push_back(Bundle());
    for (const auto& p : parts) {
        if (v.eval(p) < floor) {
            throw GuaranteeViolated("output bundle " + p.to_string() + " has value " +
                                    v.eval(p).str() + " below T/(6n) = " + floor.str());
        }
    }
    return parts;
}

ShareReport share_relations(const Valuation& v, int n) {
    ShareReport report;
    auto mm = mms(v, n);
    report.mms_value = mm.value;
    report.mms_partition = mm.partition;
    auto ap = aps(v, Rat(1, n));
    report.aps_value = ap.value;
    report.aps_partition = ap.partition;
    auto me = mes(v, Rat(1, n));
    report.mes_value = me.value;
    report.mes_partition = me.partition;

    if (report.mes_value < report.aps_value) {
        throw RelationViolated("MES " + report.mes_value.str() + " < APS " +
                               report.aps_value.str());
    }
    if (report.aps_value < *report.mms_value) {
        throw RelationViolated("APS " + report.aps_value.str() + " < MMS " +
                               report.mms_value->str());
    }
    try {
        report.subadditive = class_check(v, ValuationClass::Subadditive);
    } catch (const TooLarge&) {
    }
    try {
        report.xos = class_check(v, ValuationClass::Xos);
    } catch (const TooLarge&) {
    }
    if (report.subadditive.value_or(false) && report.aps_value > Rat(5) * *report.mms_value) {
        throw RelationViolated("subadditive APS " + report.aps_value.str() +
                               " exceeds 5*MMS with MMS " + report.mms_value->str());
    }
    if (report.xos.value_or(false) && report.aps_value > Rat(17, 4) * *report.mms_value) {
        throw RelationViolated("xos APS " + report.aps_value.str() +
                               " exceeds (17/4)*MMS with MMS " + report.mms_value->str());
    }
    return report;
}

}  // namespace fairdiv
