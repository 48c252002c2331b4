#include "fairdiv/lp.hpp"

#include <cstddef>
#include <limits>

namespace fairdiv {

namespace {

// Dense simplex tableau. Columns: structural variables (shifted to be
// nonnegative), then one slack/surplus per inequality row, then artificials.
// Row i of `a` is the current representation of constraint i; `basis[i]` is
// the column currently basic in row i. `cost` is the reduced-cost row of the
// phase objective (a minimization row), with value tracked separately.
struct Tableau {
    std::vector<std::vector<Rat>> a;  // m x ncols
    std::vector<Rat> b;               // m
    std::vector<int> basis;           // m
    int ncols = 0;

    void pivot(int row, int col) {
        auto& prow = a[row];
        Rat inv = Rat(1) / prow[col];
        if (!(inv == Rat(1))) {
            for (auto& v : prow) v *= inv;
            b[row] *= inv;
        }
        prow[col] = Rat(1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (static_cast<int>(i) == row) continue;
            Rat factor = a[i][col];
            if (factor.is_zero()) continue;
            auto& target = a[i];
            for (int j = 0; j < ncols; ++j) {
                if (!prow[j].is_zero()) target[j] -= factor * prow[j];
            }
            target[col] = Rat(0);
            b[i] -= factor * b[row];
        }
        basis[row] = col;
    }
};

// Bland's rule: entering column = lowest-index improving column; leaving row
// = among the minimum-ratio rows, the one whose basic variable has the lowest
// index. Returns false on unboundedness.
bool run_simplex(Tableau& tab, std::vector<Rat>& cost, Rat& cost_value,
                 const std::vector<bool>& allowed) {
    const int m = static_cast<int>(tab.a.size());
    for (;;) {
        int enter = -1;
        for (int j = 0; j < tab.ncols; ++j) {
            if (allowed[j] && cost[j].is_negative()) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return true;  // optimal

        int leave = -1;
        Rat best_ratio;
        for (int i = 0; i < m; ++i) {
            const Rat& coef = tab.a[i][enter];
            if (!(coef > Rat(0))) continue;
            Rat ratio = tab.b[i] / coef;
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && tab.basis[i] < tab.basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) return false;  // unbounded direction

        // Apply the pivot to the cost row as well.
        Rat factor = cost[enter];
        tab.pivot(leave, enter);
        const auto& prow = tab.a[leave];
        for (int j = 0; j < tab.ncols; ++j) {
            if (!prow[j].is_zero()) cost[j] -= factor * prow[j];
        }
        cost[enter] = Rat(0);
        cost_value -= factor * tab.b[leave];
    }
}

}  // namespace

LPResult lp_solve(const LinearProgram& lp) {
    const int nvars = static_cast<int>(lp.objective.size());
    for (const auto& row : lp.rows) {
        if (static_cast<int>(row.coeffs.size()) != nvars) {
            throw MalformedLP("constraint width disagrees with objective width");
        }
    }
    if (!lp.lower_bounds.empty() &&
        static_cast<int>(lp.lower_bounds.size()) != nvars) {
        throw MalformedLP("lower bound width disagrees with objective width");
    }

    const int m = static_cast<int>(lp.rows.size());

    // Shift x = y + lb so y >= 0.
    std::vector<Rat> lb(nvars, Rat(0));
    if (!lp.lower_bounds.empty()) lb = lp.lower_bounds;
    Rat objective_shift;
    for (int j = 0; j < nvars; ++j) {
        if (!lb[j].is_zero()) objective_shift += lp.objective[j] * lb[j];
    }

    // Count inequality rows to size the slack block.
    int nslack = 0;
    for (const auto& row : lp.rows) {
        if (row.rel != Relation::Eq) ++nslack;
    }

    Tableau tab;
    tab.ncols = nvars + nslack + m;  // artificial block sized m, trimmed below
    tab.a.assign(m, std::vector<Rat>(tab.ncols, Rat(0)));
    tab.b.assign(m, Rat(0));
    tab.basis.assign(m, -1);

    std::vector<bool> allowed(tab.ncols, false);
    for (int j = 0; j < nvars + nslack; ++j) allowed[j] = true;

    int slack_at = nvars;
    int art_at = nvars + nslack;
    std::vector<int> artificial_cols;
    for (int i = 0; i < m; ++i) {
        const auto& row = lp.rows[i];
        Rat rhs = row.rhs;
        for (int j = 0; j < nvars; ++j) {
            if (!lb[j].is_zero()) rhs -= row.coeffs[j] * lb[j];
        }
        bool flip = rhs.is_negative();
        for (int j = 0; j < nvars; ++j) {
            tab.a[i][j] = flip ? -row.coeffs[j] : row.coeffs[j];
        }
        tab.b[i] = flip ? -rhs : rhs;

        Relation rel = row.rel;
        if (flip && rel != Relation::Eq) {
            rel = (rel == Relation::Le) ? Relation::Ge : Relation::Le;
        }
        if (rel != Relation::Eq) {
            tab.a[i][slack_at] = (rel == Relation::Le) ? Rat(1) : Rat(-1);
            if (rel == Relation::Le) tab.basis[i] = slack_at;
            ++slack_at;
        }
        if (tab.basis[i] < 0) {
            tab.a[i][art_at] = Rat(1);
            tab.basis[i] = art_at;
            artificial_cols.push_back(art_at);
            ++art_at;
        }
    }
    tab.ncols = art_at;
    for (auto& row : tab.a) row.resize(tab.ncols);
    allowed.resize(tab.ncols);
    for (int c : artificial_cols) allowed[c] = true;

    // Phase 1: minimize the sum of artificials.
    if (!artificial_cols.empty()) {
        std::vector<Rat> cost(tab.ncols, Rat(0));
        for (int c : artificial_cols) cost[c] = Rat(1);
        Rat cost_value;
        for (int i = 0; i < m; ++i) {
            if (cost[tab.basis[i]] == Rat(1)) {
                for (int j = 0; j < tab.ncols; ++j) cost[j] -= tab.a[i][j];
                cost_value -= tab.b[i];
            }
        }
        run_simplex(tab, cost, cost_value, allowed);
        if (!(-cost_value == Rat(0))) {
            return LPResult{LPStatus::Infeasible, Rat(0), {}};
        }
        // Drive any remaining basic artificial out, or drop its (redundant) row.
        std::vector<bool> is_artificial(tab.ncols, false);
        for (int c : artificial_cols) is_artificial[c] = true;
        for (int i = 0; i < m; ++i) {
            if (!is_artificial[tab.basis[i]]) continue;
            int piv = -1;
            for (int j = 0; j < nvars + nslack; ++j) {
                if (!tab.a[i][j].is_zero()) {
                    piv = j;
                    break;
                }
            }
            if (piv >= 0) {
                tab.pivot(i, piv);
            } else {
                tab.basis[i] = -1;  // redundant row, neutralized below
            }
        }
        // Remove neutralized rows.
        std::vector<std::vector<Rat>> a2;
        std::vector<Rat> b2;
        std::vector<int> basis2;
        for (int i = 0; i < m; ++i) {
            if (tab.basis[i] < 0) continue;
            a2.push_back(std::move(tab.a[i]));
            b2.push_back(std::move(tab.b[i]));
            basis2.push_back(tab.basis[i]);
        }
        tab.a = std::move(a2);
        tab.b = std::move(b2);
        tab.basis = std::move(basis2);
        for (int c : artificial_cols) allowed[c] = false;
    }

    // Phase 2: minimize -objective over y.
    std::vector<Rat> cost(tab.ncols, Rat(0));
    for (int j = 0; j < nvars; ++j) cost[j] = -lp.objective[j];
    Rat cost_value;
    for (std::size_t i = 0; i < tab.a.size(); ++i) {
        Rat factor = cost[tab.basis[i]];
        if (factor.is_zero()) continue;
        for (int j = 0; j < tab.ncols; ++j) {
            if (!tab.a[i][j].is_zero()) cost[j] -= factor * tab.a[i][j];
        }
        cost[tab.basis[i]] = Rat(0);
        cost_value -= factor * tab.b[i];
    }
    if (!run_simplex(tab, cost, cost_value, allowed)) {
        return LPResult{LPStatus::Unbounded, Rat(0), {}};
    }

    std::vector<Rat> x = lb;
    for (std::size_t i = 0; i < tab.a.size(); ++i) {
        if (tab.basis[i] < nvars) x[tab.basis[i]] += tab.b[i];
    }
    // cost_value tracks the negated phase objective, which for the phase-2
    // row (minimize -c.y) is exactly the maximization value over y.
    Rat value = cost_value + objective_shift;
    return LPResult{LPStatus::Optimal, value, std::move(x)};
}

bool lp_feasible(const LinearProgram& lp, const std::vector<Rat>& x) {
    if (x.size() != lp.objective.size()) return false;
    if (!lp.lower_bounds.empty()) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (x[j] < lp.lower_bounds[j]) return false;
        }
    } else {
        for (const auto& v : x) {
            if (v.is_negative()) return false;
        }
    }
    for (const auto& row : lp.rows) {
        Rat lhs;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (!row.coeffs[j].is_zero()) lhs += row.coeffs[j] * x[j];
        }
        switch (row.rel) {
            case Relation::Eq:
                if (!(lhs == row.rhs)) return false;
                break;
            case Relation::Le:
                if (lhs > row.rhs) return false;
                break;
            case Relation::Ge:
                if (lhs < row.rhs) return false;
                break;
        }
    }
    return true;
}

}  // namespace fairdiv
