#include "fairdiv/generators.hpp"

#include <algorithm>
#include <bit>

#include "fairdiv/errors.hpp"

namespace fairdiv {

Valuation two_triangle_valuation(int n) {
    if (n < 3) throw ParameterTooLarge("two-triangle valuation needs n >= 3");
    const int large = n - 3;
    const int m = n + 3;
    std::vector<std::vector<Rat>> clauses;
    for (int e = 0; e < large; ++e) {
        std::vector<Rat> clause(m, Rat(0));
        clause[e] = Rat(2);
        clauses.push_back(std::move(clause));
    }
    // Vertices: {large..large+2} and {large+3..large+5}, each triangle complete.
    for (int t = 0; t < 2; ++t) {
        int base = large + 3 * t;
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                std::vector<Rat> clause(m, Rat(0));
                clause[base + i] = Rat(1);
                clause[base + j] = Rat(1);
                clauses.push_back(std::move(clause));
            }
        }
    }
    return Valuation::xos(m, std::move(clauses));
}

Instance two_triangle_instance(int n) {
    Valuation v = two_triangle_valuation(n);
    std::vector<Agent> agents;
    for (int i = 0; i < n; ++i) agents.push_back(Agent{v, Rat(1, n)});
    return Instance(n + 3, std::move(agents));
}

namespace {

Rat small_positive(Rng& rng) {
    std::uniform_int_distribution<int> num(1, 8);
    std::uniform_int_distribution<int> den(1, 4);
    return Rat(num(rng), den(rng));
}

Rat small_nonnegative(Rng& rng) {
    std::uniform_int_distribution<int> num(0, 8);
    std::uniform_int_distribution<int> den(1, 4);
    return Rat(num(rng), den(rng));
}

}  // namespace

std::vector<Rat> random_monotone_table_values(Rng& rng, int m) {
    if (m > 12) throw TooLarge("random table limited to m <= 12");
    std::vector<Rat> values(std::size_t{1} << m, Rat(0));
    std::uniform_int_distribution<int> inc(0, 4);
    for (std::uint64_t s = 1; s < values.size(); ++s) {
        Rat base;  // max over one-item-removed subsets
        for (std::uint64_t rest = s; rest; rest &= rest - 1) {
            std::uint64_t sub = s & ~(rest & -rest);
            if (values[sub] > base) base = values[sub];
        }
        values[s] = base + Rat(inc(rng), 4);
    }
    return values;
}

std::vector<Rat> subadditive_closure(std::vector<Rat> values, int m) {
    (void)m;
    // Size-ordered pass: splits are strictly smaller sets, already final.
    std::vector<std::uint64_t> order;
    order.reserve(values.size());
    for (std::uint64_t s = 0; s < values.size(); ++s) order.push_back(s);
    std::stable_sort(order.begin(), order.end(), [](std::uint64_t a, std::uint64_t b) {
        return std::popcount(a) < std::popcount(b);
    });
    for (std::uint64_t s : order) {
        if (std::popcount(s) < 2) continue;
        std::uint64_t low = s & (~s + 1);
        // Splits (a, s \ a) with the lowest item pinned to one side cover all
        // unordered two-part splits once.
        std::uint64_t rest = s & ~low;
        for (std::uint64_t sub = rest;; sub = (sub - 1) & rest) {
            std::uint64_t a = sub | low;
            std::uint64_t b = s & ~a;
            if (b != 0) {
                Rat split = values[a] + values[b];
                if (split < values[s]) values[s] = std::move(split);
            }
            if (sub == 0) break;
        }
    }
    return values;
}

Valuation random_valuation(Rng& rng, GenClass cls, int m) {
    switch (cls) {
        case GenClass::Additive: {
            std::vector<Rat> values;
            for (int e = 0; e < m; ++e) values.push_back(small_positive(rng));
            return Valuation::additive(std::move(values));
        }
        case GenClass::Xos: {
            std::uniform_int_distribution<int> nclauses(2, 4);
            int t = nclauses(rng);
            std::vector<std::vector<Rat>> clauses;
            for (int c = 0; c < t; ++c) {
                std::vector<Rat> clause;
                for (int e = 0; e < m; ++e) clause.push_back(small_nonnegative(rng));
                clauses.push_back(std::move(clause));
            }
            // Guarantee every item positive value in some clause.
            for (int e = 0; e < m; ++e) {
                bool positive = false;
                for (const auto& c : clauses) positive = positive || c[e] > Rat(0);
                if (!positive) clauses[0][e] = small_positive(rng);
            }
            return Valuation::xos(m, std::move(clauses));
        }
        case GenClass::SubadditiveTable: {
            for (int attempt = 0; attempt < 100; ++attempt) {
                auto values = subadditive_closure(random_monotone_table_values(rng, m), m);
                bool all_positive = true;
                for (int e = 0; e < m; ++e) {
                    all_positive = all_positive && values[std::uint64_t{1} << e] > Rat(0);
                }
                if (all_positive) return Valuation::table(m, std::move(values));
            }
            throw Error("random subadditive generator failed to find positive singletons");
        }
        case GenClass::MonotoneTable:
            return Valuation::table(m, random_monotone_table_values(rng, m));
    }
    throw Error("unreachable");
}

std::vector<Rat> random_entitlements(Rng& rng, int n, const Rat& min_each) {
    std::uniform_int_distribution<int> weight(1, 12);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<int> w(n);
        int total = 0;
        for (auto& x : w) {
            x = weight(rng);
            total += x;
        }
        std::vector<Rat> out;
        bool ok = true;
        for (int x : w) {
            Rat b(x, total);
            if (b < min_each) ok = false;
            out.push_back(std::move(b));
        }
        if (ok) return out;
    }
    return std::vector<Rat>(n, Rat(1, n));
}

Instance random_instance(Rng& rng, const RandomInstanceOptions& options) {
    std::vector<Rat> entitlements;
    if (options.equal_entitlements) {
        entitlements.assign(options.n, Rat(1, options.n));
    } else {
        entitlements = random_entitlements(rng, options.n, Rat(1, options.m));
    }
    std::vector<Agent> agents;
    for (int i = 0; i < options.n; ++i) {
        agents.push_back(Agent{random_valuation(rng, options.cls, options.m), entitlements[i]});
    }
    return Instance(options.m, std::move(agents));
}

}  // namespace fairdiv
