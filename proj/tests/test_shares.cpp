#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fairdiv/exante.hpp"
#include "fairdiv/generators.hpp"
#include "fairdiv/shares.hpp"

using namespace fairdiv;

namespace {

Valuation additive(std::vector<Rat> values) { return Valuation::additive(std::move(values)); }

// Independent maximin oracle: enumerate every assignment of items to n
// labeled parts (a different code path from the subset DP).
Rat mms_bruteforce(const Valuation& v, int n) {
    const int m = v.item_count();
    std::uint64_t total = 1;
    for (int e = 0; e < m; ++e) total *= static_cast<std::uint64_t>(n);
    Rat best(-1);
    for (std::uint64_t a = 0; a < total; ++a) {
        std::vector<Bundle> parts(n);
        std::uint64_t code = a;
        for (int e = 0; e < m; ++e) {
            parts[code % n] = parts[code % n].with(e);
            code /= n;
        }
        Rat worst = v.eval(parts[0]);
        for (int i = 1; i < n; ++i) worst = min(worst, v.eval(parts[i]));
        best = max(best, worst);
    }
    return best;
}

}  // namespace

TEST_CASE("maximin share on the stated examples") {
    auto r1 = mms(additive({Rat(1), Rat(1), Rat(1), Rat(1)}), 2);
    CHECK(r1.value == Rat(2));

    auto r2 = mms(two_triangle_valuation(3), 3);
    CHECK(r2.value == Rat(1));

    Valuation v3 = additive({Rat(3), Rat(2), Rat(2), Rat(1)});
    CHECK(mms_bruteforce(v3, 2) == Rat(4));
    auto r3 = mms(v3, 2);
    CHECK(r3.value == Rat(4));

    // Witness partition is a real n-partition achieving the value.
    std::uint64_t seen = 0;
    Rat worst(-1);
    for (const auto& b : r3.partition) {
        CHECK((seen & b.mask()) == 0);
        seen |= b.mask();
        if (worst.is_negative() || v3.eval(b) < worst) worst = v3.eval(b);
    }
    CHECK(seen == Bundle::full(4).mask());
    CHECK(worst == Rat(4));
}

TEST_CASE("maximin agrees with the brute-force oracle on random valuations") {
    Rng rng(301);
    for (int iter = 0; iter < 40; ++iter) {
        int m = 2 + static_cast<int>(rng() % 4);
        int n = 2 + static_cast<int>(rng() % 2);
        Valuation v = random_valuation(rng, static_cast<GenClass>(iter % 4), m);
        CHECK(mms(v, n).value == mms_bruteforce(v, n));
    }
}

TEST_CASE("anyprice share on the stated examples") {
    auto tri = aps(two_triangle_valuation(3), Rat(1, 3));
    CHECK(tri.value == Rat(2));
    auto check = check_fractional_partition(tri.partition, two_triangle_valuation(3));
    REQUIRE(check.valid);
    CHECK(check.min_value == Rat(2));

    auto single = aps(additive({Rat(1)}), Rat(1, 2));
    CHECK(single.value == Rat(0));
    auto check_single = check_fractional_partition(single.partition, additive({Rat(1)}));
    REQUIRE(check_single.valid);
    CHECK(check_single.min_value == Rat(0));

    auto thirds = aps(additive({Rat(1), Rat(1), Rat(1)}), Rat(1, 3));
    CHECK(thirds.value == Rat(1));
}

TEST_CASE("anyprice share witness is always a valid fractional partition") {
    Rng rng(302);
    for (int iter = 0; iter < 30; ++iter) {
        int m = 2 + static_cast<int>(rng() % 4);
        Valuation v = random_valuation(rng, GenClass::Xos, m);
        Rat b(1 + static_cast<int>(rng() % 3), 4);  // 1/4, 1/2, or 3/4
        auto share = aps(v, b);
        auto check = check_fractional_partition(share.partition, v);
        REQUIRE(check.valid);
        CHECK(check.min_value == share.value);
        CHECK(share.partition.rho == b);
    }
}

TEST_CASE("anyprice share is monotone in the entitlement") {
    Rng rng(303);
    for (int iter = 0; iter < 25; ++iter) {
        int m = 2 + static_cast<int>(rng() % 3);
        Valuation v = random_valuation(rng, GenClass::SubadditiveTable, m);
        CHECK(aps(v, Rat(1, 4)).value <= aps(v, Rat(1, 2)).value);
        CHECK(aps(v, Rat(1, 2)).value <= aps(v, Rat(3, 4)).value);
        CHECK(aps(v, Rat(3, 4)).value <= aps(v, Rat(1)).value);
    }
}

TEST_CASE("maximum expectation share on the stated examples") {
    CHECK(mes(additive({Rat(2), Rat(4)}), Rat(1, 2)).value == Rat(3));
    CHECK(mes(additive({Rat(1)}), Rat(1, 2)).value == Rat(1, 2));

    Rng rng(304);
    for (int iter = 0; iter < 10; ++iter) {
        Valuation v = random_valuation(rng, GenClass::Xos, 3);
        CHECK(mes(v, Rat(1)).value == v.eval(Bundle::full(3)));
    }
}

TEST_CASE("expectation share of an additive valuation is the proportional share") {
    Rng rng(305);
    for (int iter = 0; iter < 25; ++iter) {
        int m = 2 + static_cast<int>(rng() % 4);
        Valuation v = random_valuation(rng, GenClass::Additive, m);
        Rat b(1 + static_cast<int>(rng() % 5), 6);
        auto share = mes(v, b);
        CHECK(share.value == b * v.eval(Bundle::full(m)));
        auto check = check_fractional_partition(share.partition, v);
        REQUIRE(check.valid);
    }
}

TEST_CASE("anyprice share through the configuration LP") {
    CHECK(aps_via_clp(two_triangle_valuation(3), 3) == Rat(2));
    CHECK(aps_via_clp(additive({Rat(1), Rat(1), Rat(1)}), 3) == Rat(1));
    CHECK(aps_via_clp(additive({Rat(1)}), 2) == Rat(0));

    Rng rng(306);
    for (int iter = 0; iter < 20; ++iter) {
        int m = 2 + static_cast<int>(rng() % 3);
        int n = 2 + static_cast<int>(rng() % 2);
        Valuation v = random_valuation(rng, GenClass::Xos, m);
        CHECK(aps_via_clp(v, n) == aps(v, Rat(1, n)).value);
    }
}

TEST_CASE("subadditive approximate maximin partition") {
    // Balanced additive case: both parts worth 2, far above T/12 = 1/3.
    Valuation v = additive({Rat(1), Rat(1), Rat(1), Rat(1)});
    auto parts = approx_mms_partition_subadditive(v, 2);
    REQUIRE(parts.size() == 2);
    CHECK((parts[0].mask() & parts[1].mask()) == 0);
    CHECK(v.eval(parts[0]) >= Rat(1, 3));
    CHECK(v.eval(parts[1]) >= Rat(1, 3));

    // A dominant item is allocated outright as its own bundle.
    Valuation big = additive({Rat(10), Rat(1), Rat(1), Rat(1)});
    auto parts_big = approx_mms_partition_subadditive(big, 2);
    bool big_alone = false;
    for (const auto& p : parts_big) big_alone = big_alone || p == Bundle::single(0);
    CHECK(big_alone);

    // Single agent takes everything.
    auto parts_one = approx_mms_partition_subadditive(v, 1);
    REQUIRE(parts_one.size() == 1);
    CHECK(parts_one[0] == Bundle::full(4));
}

TEST_CASE("approximate maximin partition on random subadditive tables") {
    Rng rng(307);
    for (int iter = 0; iter < 20; ++iter) {
        int n = 2 + static_cast<int>(rng() % 2);
        int m = n + 2 + static_cast<int>(rng() % 3);
        Valuation v = random_valuation(rng, GenClass::SubadditiveTable, m);
        auto parts = approx_mms_partition_subadditive(v, n);  // throws on violation
        REQUIRE(static_cast<int>(parts.size()) == n);
        std::uint64_t seen = 0;
        for (const auto& p : parts) {
            CHECK((seen & p.mask()) == 0);
            seen |= p.mask();
        }
    }
}

TEST_CASE("share relations on the two-triangle instance") {
    auto report = share_relations(two_triangle_valuation(3), 3);
    REQUIRE(report.mms_value.has_value());
    CHECK(*report.mms_value == Rat(1));
    CHECK(report.aps_value == Rat(2));
    CHECK(report.mes_value >= Rat(2));
    CHECK(report.xos.value_or(false));
    // The gap is exactly 2, inside both caps.
    CHECK(report.aps_value == Rat(2) * *report.mms_value);
}

TEST_CASE("share relations hold on random valuations") {
    Rng rng(308);
    for (int iter = 0; iter < 30; ++iter) {
        int m = 2 + static_cast<int>(rng() % 4);
        int n = 2 + static_cast<int>(rng() % 2);
        GenClass cls = iter % 2 == 0 ? GenClass::SubadditiveTable : GenClass::Xos;
        if (m > 5 && cls == GenClass::SubadditiveTable) m = 5;
        Valuation v = random_valuation(rng, cls, m);
        CHECK_NOTHROW(share_relations(v, n));
    }
}
