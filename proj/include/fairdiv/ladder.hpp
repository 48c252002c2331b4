#pragma once

#include <optional>
#include <vector>

#include "fairdiv/rat.hpp"
#include "fairdiv/valuation.hpp"

namespace fairdiv {

// Minimum bundle sizes reaching the value thresholds j/k of v(B), j = 1..k.
// Entries are nondecreasing with entry(k) <= |B|; the extension entry(0) = 1,
// entry(-1) = 0 is fixed.
struct Ladder {
    int k = 0;
    std::vector<int> entries;  // entries[j-1] = L_j

    int entry(int j) const {
        if (j <= -1) return 0;
        if (j == 0) return 1;
        return entries.at(j - 1);
    }
};

// Exact ladder by exhaustive subset search over B (|B| <= 16).
Ladder compute_ladder(const Valuation& v, Bundle b, int k);

struct LadderLemmaReport {
    bool superadditive = true;        // h(j) = L_j - 1 is superadditive
    bool replacement_sets = true;     // small sets leave a valuable small set behind
    std::string violation;
};

// Structural properties of ladders of subadditive valuations, checked
// exhaustively: (a) h(i+j) >= h(i) + h(j) for h(j) = L_j - 1; (b) for every
// j <= k-1 and every S with |S| < L_j, some T inside B minus S has
// |T| <= L_{j+1} and v(T) > v(B)/k.
LadderLemmaReport check_ladder_lemmas(const Valuation& v, Bundle b, int k);

// b * sum_{j=0}^{k-1} (L_j - L_{j-1}) / L_{j+1}, the price floor paid by
// opponents while consuming a bundle with this ladder.
Rat payment_bound(const Ladder& ladder, const Rat& b);

// Smallest k >= 2 with m <= (k-1)^(k-1); with an entitlement given, the
// refined bound m <= ((k-1)/(1-b))^(k-1).
int choose_k(long long m, const std::optional<Rat>& b = std::nullopt);

// x_{-1} = 0, x_0 = 1, and the recurrence values x_1..x_k.
struct XSeq {
    std::vector<Rat> x;  // x[0] = x_1, ..., x[k-1] = x_k

    int k() const { return static_cast<int>(x.size()); }
    Rat at(int i) const {  // i from -1 to k
        if (i <= -1) return Rat(0);
        if (i == 0) return Rat(1);
        return x.at(i - 1);
    }
};

struct YSeq {
    std::vector<Rat> y;  // y[0] = y_1, ..., y[k-1] = y_k

    int k() const { return static_cast<int>(y.size()); }
    Rat sum() const {
        Rat s;
        for (const auto& v : y) s += v;
        return s;
    }
};

// x_1 = 1/y_1 and x_i = (x_{i-1} - x_{i-2}) / y_i. Requires all y_i > 0.
XSeq x_from_y(const YSeq& y);

// y_i = (x_{i-1} - x_{i-2}) / x_i. With assert_positivity, first validates
// the sequence hypotheses (monotone from 0,1; x_i - 1 superadditive; payment
// sum < 1) and throws HypothesisViolated when the sum condition fails, or
// TheoremViolated if the hypotheses hold yet some y_i <= 0.
YSeq y_from_x(const XSeq& x, bool assert_positivity = true);

// Whether x satisfies the three sequence hypotheses (nonnegative monotone
// with x_0 = 1; h(i) = x_i - 1 superadditive; sum (x_{i-1}-x_{i-2})/x_i < 1).
bool xseq_hypotheses_hold(const XSeq& x);

// Sum over directed paths of length j in the gap graph on {1..k-1}
// (edge i -> j iff i <= j - 2) of the product of y over path vertices.
// path_sums[j] is that sum; paths longer than floor(k/2) - 1 do not exist.
std::vector<Rat> path_sums(const YSeq& y);

// Closed form x_k = (prod y_i)^{-1} * (1 + Y_k) with Y_k the alternating sum
// of the path sums.
Rat xk_path_formula(const YSeq& y);

struct AppendixReport {
    bool recurrence_matches_path_formula = false;
    bool path_sums_nonincreasing = false;
    bool one_plus_Yk_exceeds_yk = false;
    bool xk_exceeds_bound = false;
    Rat xk;
    Rat bound;  // (k-1)^(k-1)

    bool all_hold() const {
        return recurrence_matches_path_formula && path_sums_nonincreasing &&
               one_plus_Yk_exceeds_yk && xk_exceeds_bound;
    }
};

// Exact verification of the recurrence/path-formula identity, monotone path
// sums, 1 + Y_k > y_k, and x_k > (k-1)^(k-1) for y > 0 with sum < 1. Throws
// HypothesisViolated on out-of-hypothesis input; a failing claim throws
// TheoremViolated (it would falsify the underlying statement).
AppendixReport verify_appendix(const YSeq& y);

}  // namespace fairdiv
