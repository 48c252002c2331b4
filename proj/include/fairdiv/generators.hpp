#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fairdiv/instance.hpp"

namespace fairdiv {

using Rng = std::mt19937_64;

// XOS valuation on m = n + 3 items (n >= 3): n - 3 "large" items worth 2
// each, plus six items forming the vertices of two disjoint triangles. A
// non-empty vertex set is worth 1, or 2 if it spans an edge. Its anyprice
// share at entitlement 1/n is 2 while its maximin share over n parts is 1.
Valuation two_triangle_valuation(int n);

// n equal-entitlement agents sharing the two-triangle valuation.
Instance two_triangle_instance(int n);

enum class GenClass { Additive, Xos, SubadditiveTable, MonotoneTable };

// Random valuations with small rational values. Every single item has
// positive value, so anyprice shares stay positive whenever b >= 1/m.
Valuation random_valuation(Rng& rng, GenClass cls, int m);

// Random positive entitlements summing to exactly 1, each at least min_each.
std::vector<Rat> random_entitlements(Rng& rng, int n, const Rat& min_each);

struct RandomInstanceOptions {
    GenClass cls = GenClass::Xos;
    int m = 4;
    int n = 2;
    bool equal_entitlements = true;
    // When entitlements are random, they are kept >= 1/m so shares remain
    // positive for monotone valuations with positive items.
};

Instance random_instance(Rng& rng, const RandomInstanceOptions& options);

// Monotone normalized table obtained from random increments.
std::vector<Rat> random_monotone_table_values(Rng& rng, int m);

// Subadditive closure: repeatedly replace v(S) by the cheapest two-part
// split; a single size-ordered pass reaches the fixpoint. Preserves
// monotonicity and normalization.
std::vector<Rat> subadditive_closure(std::vector<Rat> values, int m);

}  // namespace fairdiv
