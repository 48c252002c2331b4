#include "fairdiv/ladder.hpp"

#include <algorithm>

#include "fairdiv/errors.hpp"

namespace fairdiv {

Ladder compute_ladder(const Valuation& v, Bundle b, int k) {
    if (b.size() > 16) throw TooLarge("ladder computation limited to |B| <= 16");
    if (k < 1) throw Error("ladder: k must be positive");
    const Rat total = v.eval(b);
    // Best value per subset size; monotone in size for monotone v.
    std::vector<Rat> best(b.size() + 1, Rat(0));
    for_each_subset(b, [&](Bundle s) {
        const Rat value = v.eval(s);
        if (value > best[s.size()]) best[s.size()] = value;
    });
    Ladder ladder;
    ladder.k = k;
    for (int j = 1; j <= k; ++j) {
        Rat threshold = total * Rat(j, k);
        int size = -1;
        for (int c = 0; c <= b.size(); ++c) {
            if (best[c] >= threshold) {
                size = c;
                break;
            }
        }
        // Monotonicity guarantees the full bundle reaches every threshold;
        // degenerate zero thresholds still count the smallest non-empty set.
        ladder.entries.push_back(std::max(size, 1));
    }
    return ladder;
}

LadderLemmaReport check_ladder_lemmas(const Valuation& v, Bundle b, int k) {
    if (b.size() > 12) throw TooLarge("ladder lemma check limited to |B| <= 12");
    Ladder ladder = compute_ladder(v, b, k);
    LadderLemmaReport report;

    auto h = [&](int j) { return ladder.entry(j) - 1; };
    for (int i = 1; i <= k && report.superadditive; ++i) {
        for (int j = 1; i + j <= k; ++j) {
            if (h(i + j) < h(i) + h(j)) {
                report.superadditive = false;
                report.violation = "h(" + std::to_string(i) + "+" + std::to_string(j) +
                                   ") < h(i) + h(j)";
                break;
            }
        }
    }

    const Rat per_level = v.eval(b) / Rat(k);
    for (int j = 1; j <= k - 1 && report.replacement_sets; ++j) {
        const int size_limit = ladder.entry(j + 1);
        for_each_subset(b, [&](Bundle s) {
            if (!report.replacement_sets || s.size() >= ladder.entry(j)) return;
            // Largest value of a small-enough set disjoint from s.
            bool found = false;
            for_each_subset(b - s, [&](Bundle t) {
                if (found || t.empty() || t.size() > size_limit) return;
                if (v.eval(t) > per_level) found = true;
            });
            if (!found) {
                report.replacement_sets = false;
                report.violation = "no replacement set of size <= " +
                                   std::to_string(size_limit) + " avoids " + s.to_string();
            }
        });
    }
    return report;
}

Rat payment_bound(const Ladder& ladder, const Rat& b) {
    Rat sum;
    for (int j = 0; j <= ladder.k - 1; ++j) {
        sum += Rat(ladder.entry(j) - ladder.entry(j - 1)) / Rat(ladder.entry(j + 1));
    }
    return b * sum;
}

int choose_k(long long m, const std::optional<Rat>& b) {
    if (m < 1) throw Error("choose_k: m must be positive");
    for (int k = 2;; ++k) {
        if (b) {
            // m <= ((k-1)/(1-b))^(k-1), rearranged to avoid division.
            Rat lhs = Rat(m) * Rat::pow(Rat(1) - *b, k - 1);
            if (lhs <= Rat::pow(Rat(k - 1), k - 1)) return k;
        } else {
            if (Rat(m) <= Rat::pow(Rat(k - 1), k - 1)) return k;
        }
    }
}

XSeq x_from_y(const YSeq& y) {
    for (const auto& v : y.y) {
        if (!(v > Rat(0))) throw Error("x_from_y: all y_i must be positive");
    }
    XSeq x;
    for (int i = 1; i <= y.k(); ++i) {
        Rat next = (x.at(i - 1) - x.at(i - 2)) / y.y[i - 1];
        x.x.push_back(std::move(next));
    }
    return x;
}

bool xseq_hypotheses_hold(const XSeq& x) {
    const int k = x.k();
    for (int i = 0; i <= k; ++i) {
        if (x.at(i - 1) > x.at(i)) return false;
    }
    for (int i = 1; i <= k; ++i) {
        for (int j = 1; i + j <= k; ++j) {
            if (x.at(i + j) < x.at(i) + x.at(j) - Rat(1)) return false;
        }
    }
    Rat sum;
    for (int i = 1; i <= k; ++i) {
        if (!(x.at(i) > Rat(0))) return false;
        sum += (x.at(i - 1) - x.at(i - 2)) / x.at(i);
    }
    return sum < Rat(1);
}

YSeq y_from_x(const XSeq& x, bool assert_positivity) {
    const int k = x.k();
    if (assert_positivity) {
        // Identify which hypothesis fails, if any; the sum condition is the
        // one whose absence must be flagged distinctly.
        bool monotone = true;
        for (int i = 0; i <= k; ++i) monotone = monotone && !(x.at(i - 1) > x.at(i));
        bool superadd = true;
        for (int i = 1; i <= k; ++i) {
            for (int j = 1; i + j <= k; ++j) {
                superadd = superadd && !(x.at(i + j) < x.at(i) + x.at(j) - Rat(1));
            }
        }
        if (!monotone || !superadd) {
            throw HypothesisViolated("y_from_x: sequence fails monotonicity/superadditivity");
        }
        Rat sum;
        for (int i = 1; i <= k; ++i) {
            if (!(x.at(i) > Rat(0))) throw HypothesisViolated("y_from_x: nonpositive term");
            sum += (x.at(i - 1) - x.at(i - 2)) / x.at(i);
        }
        if (!(sum < Rat(1))) {
            throw HypothesisViolated("y_from_x: ratio sum " + sum.str() + " is not below 1");
        }
    }
    YSeq y;
    for (int i = 1; i <= k; ++i) {
        if (x.at(i).is_zero()) throw Error("y_from_x: division by zero term");
        y.y.push_back((x.at(i - 1) - x.at(i - 2)) / x.at(i));
    }
    if (assert_positivity) {
        for (const auto& v : y.y) {
            if (!(v > Rat(0))) {
                throw TheoremViolated("strict increase fails although the hypotheses hold");
            }
        }
    }
    return y;
}

std::vector<Rat> path_sums(const YSeq& y) {
    const int k = y.k();
    const int verts = k - 1;  // vertices 1..k-1
    // ways[v][j]: sum of y-products over paths of length j starting at v.
    const int max_len = std::max(0, k / 2 - 1);
    std::vector<std::vector<Rat>> ways(verts + 1, std::vector<Rat>(max_len + 1, Rat(0)));
    for (int v = 1; v <= verts; ++v) ways[v][0] = y.y[v - 1];
    for (int j = 1; j <= max_len; ++j) {
        for (int v = 1; v <= verts; ++v) {
            Rat sum;
            for (int u = v + 2; u <= verts; ++u) sum += ways[u][j - 1];
            ways[v][j] = y.y[v - 1] * sum;
        }
    }
    std::vector<Rat> sums(max_len + 1, Rat(0));
    for (int j = 0; j <= max_len; ++j) {
        for (int v = 1; v <= verts; ++v) sums[j] += ways[v][j];
    }
    return sums;
}

Rat xk_path_formula(const YSeq& y) {
    const int k = y.k();
    if (k < 2) throw Error("path formula needs k >= 2");
    auto sums = path_sums(y);
    Rat yk;  // alternating sum: Y_k = sum_j (-1)^(j+1) * pathsum_j
    for (std::size_t j = 0; j < sums.size(); ++j) {
        if (j % 2 == 0) {
            yk -= sums[j];
        } else {
            yk += sums[j];
        }
    }
    Rat product(1);
    for (const auto& v : y.y) product *= v;
    return (Rat(1) + yk) / product;
}

AppendixReport verify_appendix(const YSeq& y) {
    const int k = y.k();
    if (k < 2) throw Error("appendix verification needs k >= 2");
    for (const auto& v : y.y) {
        if (!(v > Rat(0))) throw HypothesisViolated("verify_appendix: y_i must be positive");
    }
    if (!(y.sum() < Rat(1))) {
        throw HypothesisViolated("verify_appendix: sum of y must be below 1");
    }

    AppendixReport report;
    XSeq x = x_from_y(y);
    report.xk = x.at(k);
    Rat formula = xk_path_formula(y);
    report.recurrence_matches_path_formula = report.xk == formula;

    auto sums = path_sums(y);
    report.path_sums_nonincreasing = true;
    for (std::size_t j = 0; j + 1 < sums.size(); ++j) {
        if (sums[j] < sums[j + 1]) report.path_sums_nonincreasing = false;
    }

    Rat yk_alt;
    for (std::size_t j = 0; j < sums.size(); ++j) {
        if (j % 2 == 0) {
            yk_alt -= sums[j];
        } else {
            yk_alt += sums[j];
        }
    }
    report.one_plus_Yk_exceeds_yk = Rat(1) + yk_alt > y.y[k - 1];

    report.bound = Rat::pow(Rat(k - 1), k - 1);
    report.xk_exceeds_bound = report.xk > report.bound;

    if (!report.all_hold()) {
        std::string which;
        if (!report.recurrence_matches_path_formula) {
            which = "recurrence/path-formula identity";
        } else if (!report.path_sums_nonincreasing) {
            which = "monotone path sums";
        } else if (!report.one_plus_Yk_exceeds_yk) {
            which = "1 + Y_k > y_k";
        } else {
            which = "x_k > (k-1)^(k-1)";
        }
        std::string ys;
        for (const auto& v : y.y) ys += (ys.empty() ? "" : ",") + v.str();
        throw TheoremViolated("appendix claim failed: " + which + " at y = (" + ys + ")");
    }
    return report;
}

}  // namespace fairdiv
