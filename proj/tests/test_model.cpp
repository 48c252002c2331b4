#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fairdiv/generators.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/partition.hpp"
#include "fairdiv/valuation.hpp"

using namespace fairdiv;

namespace {

Valuation additive(std::vector<int> values) {
    std::vector<Rat> v;
    for (int x : values) v.push_back(Rat(x));
    return Valuation::additive(std::move(v));
}

}  // namespace

TEST_CASE("eval across representations") {
    Valuation a = additive({1, 2, 3});
    CHECK(a.eval(Bundle(0b101)) == Rat(4));
    CHECK(a.eval(Bundle(0)) == Rat(0));

    Valuation x = Valuation::xos(3, {{Rat(1), Rat(0), Rat(1)}, {Rat(0), Rat(2), Rat(0)}});
    CHECK(x.eval(Bundle(0b111)) == Rat(2));
    CHECK(x.eval(Bundle(0b001)) == Rat(1));

    Valuation t = Valuation::truncated(additive({3, 3}), Rat(4));
    CHECK(t.eval(Bundle(0b11)) == Rat(4));
    CHECK(t.eval(Bundle(0b01)) == Rat(3));

    CHECK_THROWS_AS(a.eval(Bundle(0b1000)), IndexOutOfRange);
}

TEST_CASE("table valuations are validated at load time") {
    // v({a}) = v({b}) = 1, v({a,b}) = 3: monotone but not subadditive.
    Valuation t = Valuation::table(2, {Rat(0), Rat(1), Rat(1), Rat(3)});
    CHECK(t.eval(Bundle(0b11)) == Rat(3));
    CHECK_FALSE(class_check(t, ValuationClass::Subadditive));

    // Monotone rejection: v(S) > v(T) for S subset of T.
    CHECK_THROWS_AS(Valuation::table(2, {Rat(0), Rat(2), Rat(1), Rat(1)}), Error);
    // Normalization rejection.
    CHECK_THROWS_AS(Valuation::table(1, {Rat(1), Rat(2)}), Error);
}

TEST_CASE("class checks on the stated examples") {
    CHECK(class_check(additive({1, 2}), ValuationClass::Subadditive));
    Valuation x = Valuation::xos(2, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
    CHECK(class_check(x, ValuationClass::Submodular));
    CHECK(class_check(x, ValuationClass::Xos));
    CHECK_FALSE(class_check(x, ValuationClass::Additive));

    // A table that is XOS: max of two additive clauses, materialized.
    Valuation xt = Valuation::table(2, {Rat(0), Rat(1), Rat(1), Rat(1)});
    CHECK(class_check(xt, ValuationClass::Xos));
    CHECK_FALSE(class_check(xt, ValuationClass::Additive));

    Valuation sub = Valuation::table(2, {Rat(0), Rat(1), Rat(1), Rat(3, 2)});
    CHECK(class_check(sub, ValuationClass::Subadditive));
    CHECK(class_check(sub, ValuationClass::Xos));
    CHECK(class_check(sub, ValuationClass::Submodular));
}

TEST_CASE("non-xos subadditive table is detected") {
    // On 3 items: v(S) = 1 for non-empty S except v(full) = 2. Subadditive,
    // but a fractional cover of the full set by the three 2-sets with weight
    // 1/2 each costs 3/2 < 2, so it is not fractionally subadditive.
    std::vector<Rat> vals(8, Rat(1));
    vals[0] = Rat(0);
    vals[7] = Rat(2);
    Valuation v = Valuation::table(3, vals);
    CHECK(class_check(v, ValuationClass::Subadditive));
    CHECK_FALSE(class_check(v, ValuationClass::Xos));
}

TEST_CASE("class chain on random valuations") {
    Rng rng(42);
    int checked = 0;
    for (int iter = 0; iter < 500; ++iter) {
        GenClass cls = static_cast<GenClass>(iter % 4);
        int m = 2 + static_cast<int>(rng() % 4);  // m <= 5 keeps the xos LP cheap
        Valuation v = random_valuation(rng, cls, m);
        bool is_additive = class_check(v, ValuationClass::Additive);
        bool is_submodular = class_check(v, ValuationClass::Submodular);
        bool is_xos = class_check(v, ValuationClass::Xos);
        bool is_subadditive = class_check(v, ValuationClass::Subadditive);
        if (is_additive) CHECK(is_submodular);
        if (is_submodular) CHECK(is_xos);
        if (is_xos) CHECK(is_subadditive);
        ++checked;
    }
    CHECK(checked == 500);
}

TEST_CASE("demand queries") {
    Valuation v = additive({3, 1});
    CHECK(demand_query(v, {Rat(1), Rat(2)}) == Bundle(0b01));

    // All-zero prices: monotone, so the full set maximizes profit; ties go to
    // the lexicographically smallest optimum, which is still the full set
    // only when every item has positive value.
    Valuation w = additive({1, 2, 3});
    CHECK(demand_query(w, {Rat(0), Rat(0), Rat(0)}) == Bundle(0b111));

    CHECK(demand_query(additive({1}), {Rat(5)}) == Bundle(0));

    // Exhaustive oracle agreement on random instances.
    Rng rng(7);
    for (int iter = 0; iter < 100; ++iter) {
        int m = 2 + static_cast<int>(rng() % 3);
        Valuation rv = random_valuation(rng, GenClass::Xos, m);
        std::vector<Rat> prices;
        for (int e = 0; e < m; ++e) prices.push_back(Rat(static_cast<int>(rng() % 5), 2));
        Bundle choice = demand_query(rv, prices);
        Rat profit = rv.eval(choice);
        for (int e : choice.items()) profit -= prices[e];
        CHECK(profit >= Rat(0));
        // No bundle beats it.
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
            Rat p = rv.eval(Bundle(s));
            for (int e : Bundle(s).items()) p -= prices[e];
            CHECK(p <= profit);
        }
    }
}

TEST_CASE("truncated demand queries") {
    Valuation v = additive({3, 3});
    CHECK(truncated_demand_query(v, {Rat(1), Rat(1)}, Rat(3)) == Bundle(0b01));
    CHECK(truncated_demand_query(v, {Rat(1), Rat(1)}, Rat(0)) == Bundle(0));
    CHECK(truncated_demand_query(v, {Rat(1), Rat(1)}, Rat(1000)) ==
          demand_query(v, {Rat(1), Rat(1)}));
}

TEST_CASE("eval on truncated never exceeds cap") {
    Rng rng(11);
    for (int iter = 0; iter < 50; ++iter) {
        int m = 2 + static_cast<int>(rng() % 3);
        Valuation base = random_valuation(rng, GenClass::Xos, m);
        Rat cap(static_cast<int>(rng() % 9), 2);
        Valuation t = Valuation::truncated(base, cap);
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
            CHECK(t.eval(Bundle(s)) <= cap);
        }
    }
}

TEST_CASE("two-triangle fractional partition validates") {
    // Pure graph case: n = 3, m = 6, six edge bundles of weight 1/6 each.
    Valuation v = two_triangle_valuation(3);
    REQUIRE(v.item_count() == 6);
    FractionalPartition fp;
    fp.rho = Rat(1, 3);
    int edges[6][2] = {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}};
    for (auto& e : edges) {
        fp.parts.push_back({Bundle::single(e[0]) | Bundle::single(e[1]), Rat(1, 6)});
    }
    auto check = check_fractional_partition(fp, v);
    REQUIRE(check.valid);
    CHECK(check.min_value == Rat(2));
}

TEST_CASE("an n-partition is a fractional 1/n partition") {
    Valuation v = additive({1, 1, 1, 1});
    FractionalPartition fp;
    fp.rho = Rat(1, 2);
    fp.parts.push_back({Bundle(0b0011), Rat(1, 2)});
    fp.parts.push_back({Bundle(0b1100), Rat(1, 2)});
    auto check = check_fractional_partition(fp, v);
    REQUIRE(check.valid);
    CHECK(check.min_value == Rat(2));
}

TEST_CASE("bad weights are rejected with a report") {
    Valuation v = additive({1, 1});
    FractionalPartition fp;
    fp.rho = Rat(1, 2);
    fp.parts.push_back({Bundle(0b11), Rat(1, 2)});  // weights sum to 1/2
    auto check = check_fractional_partition(fp, v);
    CHECK_FALSE(check.valid);
    CHECK(!check.first_violation.empty());
}

TEST_CASE("smallest acceptable bundle") {
    Valuation v = Valuation::xos(4, {{Rat(3), Rat(1), Rat(0), Rat(0)},
                                     {Rat(0), Rat(0), Rat(2), Rat(2)}});
    auto s = smallest_acceptable(v, Bundle::full(4), Rat(3));
    REQUIRE(s.has_value());
    CHECK(*s == Bundle(0b0001));  // single item already reaches 3
    auto s2 = smallest_acceptable(v, Bundle(0b1110), Rat(3));
    REQUIRE(s2.has_value());
    CHECK(*s2 == Bundle(0b1100));  // needs both clause-2 items, value 4
    CHECK_FALSE(smallest_acceptable(v, Bundle(0b0010), Rat(3)).has_value());
}

TEST_CASE("instance json round trip") {
    Instance inst = two_triangle_instance(3);
    std::string text = instance_to_json(inst);
    Instance back = parse_instance(text);
    CHECK(back.item_count() == inst.item_count());
    CHECK(back.agent_count() == inst.agent_count());
    CHECK(instance_to_json(back) == text);
    for (std::uint64_t s = 0; s < 64; ++s) {
        CHECK(back.agent(0).valuation.eval(Bundle(s)) == inst.agent(0).valuation.eval(Bundle(s)));
    }
}

TEST_CASE("instance json validation") {
    CHECK_THROWS_AS(parse_instance("{"), Error);
    CHECK_THROWS_AS(parse_instance(R"({"m":1,"agents":[]})"), Error);
    // Entitlements above 1 in total.
    CHECK_THROWS_AS(parse_instance(R"({"m":1,"agents":[
        {"entitlement":"2/3","valuation":{"type":"additive","values":["1/1"]}},
        {"entitlement":"2/3","valuation":{"type":"additive","values":["1/1"]}}]})"),
                    Error);
    // Table with a missing bundle entry is illegal.
    CHECK_THROWS_AS(parse_instance(R"({"m":1,"agents":[
        {"entitlement":"1/1","valuation":{"type":"table","values":{"0":"0/1"}}}]})"),
                    Error);
}

TEST_CASE("subadditive closure produces subadditive monotone tables") {
    Rng rng(5);
    for (int iter = 0; iter < 50; ++iter) {
        int m = 2 + static_cast<int>(rng() % 4);
        Valuation v = random_valuation(rng, GenClass::SubadditiveTable, m);
        CHECK(class_check(v, ValuationClass::Subadditive));
        CHECK(class_check(v, ValuationClass::Monotone));
    }
}
