#include "fairdiv/valuation.hpp"

#include <algorithm>
#include <numeric>

#include "fairdiv/errors.hpp"
#include "fairdiv/lp.hpp"

namespace fairdiv {

namespace {

void require_nonnegative(const std::vector<Rat>& values, const char* what) {
    for (const auto& v : values) {
        if (v.is_negative()) throw Error(std::string(what) + ": negative value");
    }
}

}  // namespace

Valuation Valuation::additive(std::vector<Rat> values) {
    require_nonnegative(values, "additive valuation");
    auto d = std::make_shared<Data>();
    d->kind = Kind::Additive;
    d->m = static_cast<int>(values.size());
    d->values = std::move(values);
    return Valuation(std::move(d));
}

Valuation Valuation::xos(int m, std::vector<std::vector<Rat>> clauses) {
    if (clauses.empty()) throw Error("xos valuation: clause list must be non-empty");
    for (const auto& c : clauses) {
        if (static_cast<int>(c.size()) != m) throw Error("xos valuation: clause width mismatch");
        require_nonnegative(c, "xos clause");
    }
    auto d = std::make_shared<Data>();
    d->kind = Kind::Xos;
    d->m = m;
    d->clauses = std::move(clauses);
    return Valuation(std::move(d));
}

Valuation Valuation::table(int m, std::vector<Rat> values) {
    if (m < 0 || m > 16) throw TooLarge("table valuation: m must be at most 16");
    if (values.size() != (std::size_t{1} << m)) {
        throw Error("table valuation: need exactly 2^m entries");
    }
    if (!values[0].is_zero()) throw Error("table valuation: v(empty) must be 0");
    // Exhaustive monotonicity check at load time.
    for (std::uint64_t s = 1; s < values.size(); ++s) {
        if (values[s].is_negative()) throw Error("table valuation: negative value");
        for (std::uint64_t rest = s; rest; rest &= rest - 1) {
            std::uint64_t without = s & ~(rest & -rest);
            if (values[s] < values[without]) {
                throw Error("table valuation: not monotone");
            }
        }
    }
    auto d = std::make_shared<Data>();
    d->kind = Kind::Table;
    d->m = m;
    d->values = std::move(values);
    return Valuation(std::move(d));
}

Valuation Valuation::truncated(Valuation base, Rat cap) {
    if (cap.is_negative()) throw Error("truncated valuation: cap must be nonnegative");
    auto d = std::make_shared<Data>();
    d->kind = Kind::Truncated;
    d->m = base.item_count();
    d->base = base.d_;
    d->cap = std::move(cap);
    return Valuation(std::move(d));
}

Rat Valuation::eval(Bundle s) const {
    if (d_->m < 64 && (s.mask() >> d_->m) != 0) {
        throw IndexOutOfRange("bundle contains an item outside the universe");
    }
    switch (d_->kind) {
        case Kind::Additive: {
            Rat sum;
            for (std::uint64_t rest = s.mask(); rest; rest &= rest - 1) {
                sum += d_->values[std::countr_zero(rest)];
            }
            return sum;
        }
        case Kind::Xos: {
            Rat best;
            for (const auto& clause : d_->clauses) {
                Rat sum;
                for (std::uint64_t rest = s.mask(); rest; rest &= rest - 1) {
                    sum += clause[std::countr_zero(rest)];
                }
                if (sum > best) best = std::move(sum);
            }
            return best;
        }
        case Kind::Table:
            return d_->values[s.mask()];
        case Kind::Truncated: {
            Rat base_value = Valuation(d_->base).eval(s);
            return base_value > d_->cap ? d_->cap : base_value;
        }
    }
    throw Error("unreachable");
}

Valuation Valuation::scaled(const Rat& factor) const {
    if (factor.is_negative()) throw Error("scale factor must be nonnegative");
    switch (d_->kind) {
        case Kind::Additive: {
            auto values = d_->values;
            for (auto& v : values) v *= factor;
            return additive(std::move(values));
        }
        case Kind::Xos: {
            auto clauses = d_->clauses;
            for (auto& c : clauses) {
                for (auto& v : c) v *= factor;
            }
            return xos(d_->m, std::move(clauses));
        }
        case Kind::Table: {
            auto values = d_->values;
            for (auto& v : values) v *= factor;
            return table(d_->m, std::move(values));
        }
        case Kind::Truncated:
            return truncated(base().scaled(factor), cap() * factor);
    }
    throw Error("unreachable");
}

namespace {

// All 2^m values of v, indexed by mask.
std::vector<Rat> materialize(const Valuation& v, int max_m) {
    int m = v.item_count();
    if (m > max_m) throw TooLarge("exhaustive check infeasible at this size");
    std::vector<Rat> out(std::size_t{1} << m);
    for (std::uint64_t s = 0; s < out.size(); ++s) out[s] = v.eval(Bundle(s));
    return out;
}

bool table_is_additive(const std::vector<Rat>& val, int m) {
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << m); ++s) {
        Rat sum;
        for (std::uint64_t rest = s; rest; rest &= rest - 1) {
            sum += val[std::uint64_t{1} << std::countr_zero(rest)];
        }
        if (!(val[s] == sum)) return false;
    }
    return true;
}

bool table_is_submodular(const std::vector<Rat>& val, int m) {
    // Pairwise diminishing-returns form: v(S+e) + v(S+f) >= v(S+e+f) + v(S).
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
        for (int e = 0; e < m; ++e) {
            if ((s >> e) & 1u) continue;
            for (int f = e + 1; f < m; ++f) {
                if ((s >> f) & 1u) continue;
                std::uint64_t se = s | (std::uint64_t{1} << e);
                std::uint64_t sf = s | (std::uint64_t{1} << f);
                if (val[se] + val[sf] < val[se | sf] + val[s]) return false;
            }
        }
    }
    return true;
}

bool table_is_subadditive(const std::vector<Rat>& val, int m) {
    // For monotone v, checking disjoint pairs suffices.
    std::uint64_t full = (std::uint64_t{1} << m) - 1;
    for (std::uint64_t s = 1; s <= full; ++s) {
        std::uint64_t comp = full & ~s;
        for (std::uint64_t t = comp; t; t = (t - 1) & comp) {
            if (val[s] + val[t] < val[s | t]) return false;
        }
    }
    return true;
}

// Optimum of: maximize sum a_e over e in b, subject to a >= 0 and
// a(T) <= v(T) for every non-empty T within b. Equals v(b) exactly when v is
// fractionally subadditive on b.
std::pair<Rat, std::vector<Rat>> supporting_lp(const Valuation& v, Bundle b) {
    auto items = b.items();
    const int k = static_cast<int>(items.size());
    LinearProgram lp;
    lp.objective.assign(k, Rat(1));
    for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << k); ++sub) {
        LPRow row;
        row.coeffs.assign(k, Rat(0));
        Bundle t;
        for (int j = 0; j < k; ++j) {
            if ((sub >> j) & 1u) {
                row.coeffs[j] = Rat(1);
                t = t.with(items[j]);
            }
        }
        row.rel = Relation::Le;
        row.rhs = v.eval(t);
        lp.rows.push_back(std::move(row));
    }
    LPResult res = lp_solve(lp);
    std::vector<Rat> full(v.item_count(), Rat(0));
    for (int j = 0; j < k; ++j) full[items[j]] = res.solution[j];
    return {res.objective_value, std::move(full)};
}

bool table_is_xos(const Valuation& v) {
    if (v.item_count() > 6) {
        throw TooLarge("xos membership test for tables is limited to m <= 6");
    }
    Bundle full = Bundle::full(v.item_count());
    bool ok = true;
    for_each_subset(full, [&](Bundle s) {
        if (!ok || s.empty()) return;
        auto [opt, a] = supporting_lp(v, s);
        if (!(opt == v.eval(s))) ok = false;
    });
    return ok;
}

}  // namespace

bool class_check(const Valuation& v, ValuationClass cls) {
    const auto kind = v.kind();
    switch (cls) {
        case ValuationClass::Monotone:
            // Every representation is monotone by construction (tables are
            // checked exhaustively at load time).
            return true;
        case ValuationClass::Additive: {
            if (kind == Valuation::Kind::Additive) return true;
            auto val = materialize(v, 16);
            return table_is_additive(val, v.item_count());
        }
        case ValuationClass::Submodular: {
            auto val = materialize(v, 12);
            return table_is_submodular(val, v.item_count());
        }
        case ValuationClass::Xos: {
            if (kind == Valuation::Kind::Additive || kind == Valuation::Kind::Xos) return true;
            return table_is_xos(v);
        }
        case ValuationClass::Subadditive: {
            if (kind == Valuation::Kind::Additive) return true;
            auto val = materialize(v, 12);
            return table_is_subadditive(val, v.item_count());
        }
    }
    throw Error("unreachable");
}

Bundle demand_query(const Valuation& v, const std::vector<Rat>& prices) {
    const int m = v.item_count();
    if (static_cast<int>(prices.size()) != m) {
        throw IndexOutOfRange("price vector width mismatch");
    }
    if (m > 20) throw TooLarge("demand query enumeration is limited to m <= 20");
    Bundle best;
    Rat best_profit;  // empty set: profit 0
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << m); ++s) {
        Rat profit = v.eval(Bundle(s));
        for (std::uint64_t rest = s; rest; rest &= rest - 1) {
            profit -= prices[std::countr_zero(rest)];
        }
        if (profit > best_profit ||
            (profit == best_profit && lex_less(Bundle(s), best))) {
            best = Bundle(s);
            best_profit = std::move(profit);
        }
    }
    return best;
}

Bundle truncated_demand_query(const Valuation& v, const std::vector<Rat>& prices,
                              const Rat& cap) {
    return demand_query(Valuation::truncated(v, cap), prices);
}

namespace {

// Clause-structure shortcut for wide XOS valuations: the smallest acceptable
// bundle reaches the threshold inside a single clause, so per-clause greedy
// prefixes (entries descending, index ascending) are exact for size and
// value. The lexicographic tie-break is applied across the per-clause
// candidate sets.
std::optional<Bundle> smallest_acceptable_xos(const std::vector<std::vector<Rat>>& clauses,
                                              Bundle available, const Rat& threshold,
                                              const Rat* value_cap) {
    auto items = available.items();
    int best_size = -1;
    std::vector<Bundle> candidates;  // minimum-size greedy prefixes
    for (const auto& clause : clauses) {
        std::vector<int> order = items;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return clause[b] < clause[a]; });
        Rat sum;
        Bundle set;
        int size = 0;
        bool reached = false;
        for (int e : order) {
            sum += clause[e];
            set = set.with(e);
            ++size;
            if (sum >= threshold) {
                reached = true;
                break;
            }
            if (best_size >= 0 && size >= best_size) break;  // cannot improve
        }
        if (!reached) continue;
        if (best_size < 0 || size < best_size) {
            best_size = size;
            candidates.clear();
        }
        if (size == best_size) candidates.push_back(set);
    }
    if (best_size < 0) return std::nullopt;
    // Evaluate candidates under the full valuation (max over clauses), capped
    // when the valuation is truncated.
    Rat best_value(-1);
    Bundle best;
    for (const Bundle& set : candidates) {
        Rat value;
        for (const auto& clause : clauses) {
            Rat s;
            for (std::uint64_t rest = set.mask(); rest; rest &= rest - 1) {
                s += clause[std::countr_zero(rest)];
            }
            if (s > value) value = std::move(s);
        }
        if (value_cap && value > *value_cap) value = *value_cap;
        if (value > best_value || (value == best_value && lex_less(set, best))) {
            best_value = std::move(value);
            best = set;
        }
    }
    return best;
}

}  // namespace

std::optional<Bundle> smallest_acceptable(const Valuation& v, Bundle available,
                                          const Rat& threshold) {
    const int avail_count = available.size();
    if (avail_count == 0) return std::nullopt;
    if (avail_count <= 16) {
        // Exhaustive: exact size, value, and lexicographic tie-break.
        bool found = false;
        Bundle best;
        int best_size = 0;
        Rat best_value;
        for_each_subset(available, [&](Bundle s) {
            if (s.empty()) return;
            Rat value = v.eval(s);
            if (value < threshold) return;
            int size = s.size();
            if (!found || size < best_size ||
                (size == best_size &&
                 (value > best_value || (value == best_value && lex_less(s, best))))) {
                found = true;
                best = s;
                best_size = size;
                best_value = std::move(value);
            }
        });
        if (!found) return std::nullopt;
        return best;
    }
    switch (v.kind()) {
        case Valuation::Kind::Additive: {
            std::vector<std::vector<Rat>> one{v.additive_values()};
            return smallest_acceptable_xos(one, available, threshold, nullptr);
        }
        case Valuation::Kind::Xos:
            return smallest_acceptable_xos(v.clauses(), available, threshold, nullptr);
        case Valuation::Kind::Truncated: {
            if (v.cap() < threshold) return std::nullopt;
            Valuation b = v.base();
            if (b.kind() == Valuation::Kind::Additive) {
                std::vector<std::vector<Rat>> one{b.additive_values()};
                return smallest_acceptable_xos(one, available, threshold, &v.cap());
            }
            if (b.kind() == Valuation::Kind::Xos) {
                return smallest_acceptable_xos(b.clauses(), available, threshold, &v.cap());
            }
            throw TooLarge("smallest_acceptable: unsupported wide representation");
        }
        case Valuation::Kind::Table:
            throw TooLarge("smallest_acceptable: table too wide for enumeration");
    }
    throw Error("unreachable");
}

std::pair<Rat, int> best_single_item(const Valuation& v, Bundle available) {
    Rat best;
    int arg = -1;
    for (int e : available.items()) {
        Rat value = v.eval(Bundle::single(e));
        if (arg < 0 || value > best) {
            best = std::move(value);
            arg = e;
        }
    }
    return {best, arg};
}

Valuation restrict_to(const Valuation& v, Bundle keep) {
    auto items = keep.items();
    const int k = static_cast<int>(items.size());
    switch (v.kind()) {
        case Valuation::Kind::Additive: {
            std::vector<Rat> values;
            for (int e : items) values.push_back(v.additive_values()[e]);
            return Valuation::additive(std::move(values));
        }
        case Valuation::Kind::Xos: {
            std::vector<std::vector<Rat>> clauses;
            for (const auto& clause : v.clauses()) {
                std::vector<Rat> projected;
                for (int e : items) projected.push_back(clause[e]);
                clauses.push_back(std::move(projected));
            }
            return Valuation::xos(k, std::move(clauses));
        }
        case Valuation::Kind::Table: {
            std::vector<Rat> values(std::size_t{1} << k);
            for (std::uint64_t sub = 0; sub < values.size(); ++sub) {
                Bundle original;
                for (int j = 0; j < k; ++j) {
                    if ((sub >> j) & 1u) original = original.with(items[j]);
                }
                values[sub] = v.eval(original);
            }
            return Valuation::table(k, std::move(values));
        }
        case Valuation::Kind::Truncated:
            return Valuation::truncated(restrict_to(v.base(), keep), v.cap());
    }
    throw Error("unreachable");
}

std::vector<Rat> additive_supporting(const Valuation& v, Bundle b) {
    const int m = v.item_count();
    switch (v.kind()) {
        case Valuation::Kind::Additive: {
            std::vector<Rat> out(m, Rat(0));
            for (int e : b.items()) out[e] = v.additive_values()[e];
            return out;
        }
        case Valuation::Kind::Xos: {
            // Maximizing clause on b, restricted to b.
            const auto& clauses = v.clauses();
            int best = 0;
            Rat best_sum;
            for (std::size_t c = 0; c < clauses.size(); ++c) {
                Rat sum;
                for (int e : b.items()) sum += clauses[c][e];
                if (c == 0 || sum > best_sum) {
                    best = static_cast<int>(c);
                    best_sum = std::move(sum);
                }
            }
            std::vector<Rat> out(m, Rat(0));
            for (int e : b.items()) out[e] = clauses[best][e];
            return out;
        }
        case Valuation::Kind::Table: {
            if (b.size() > 12) throw TooLarge("additive_supporting: bundle too large for LP");
            auto [opt, a] = supporting_lp(v, b);
            if (!(opt == v.eval(b))) {
                throw Error("additive_supporting: valuation is not fractionally subadditive here");
            }
            return a;
        }
        case Valuation::Kind::Truncated: {
            // Supporting function of the base, scaled down when the cap binds.
            auto a = additive_supporting(v.base(), b);
            Rat base_value = v.base().eval(b);
            if (base_value > v.cap()) {
                Rat factor = v.cap() / base_value;
                for (auto& x : a) x *= factor;
            }
            return a;
        }
    }
    throw Error("unreachable");
}

}  // namespace fairdiv
