#pragma once

#include <vector>

#include "fairdiv/rat.hpp"

namespace fairdiv {

enum class Relation { Eq, Le, Ge };

struct LPRow {
    std::vector<Rat> coeffs;
    Relation rel = Relation::Le;
    Rat rhs;
};

// Maximization LP over rational data. Variables are bounded below by
// lower_bounds (all zero when the vector is empty) and unbounded above.
struct LinearProgram {
    std::vector<Rat> objective;
    std::vector<LPRow> rows;
    std::vector<Rat> lower_bounds;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    Rat objective_value;
    std::vector<Rat> solution;
};

// Two-phase primal simplex with Bland's pivot rule over exact rationals.
// Deterministic: identical inputs produce bit-identical results. Throws
// MalformedLP if row widths disagree with the objective.
LPResult lp_solve(const LinearProgram& lp);

// True iff x satisfies every constraint and lower bound of lp exactly.
bool lp_feasible(const LinearProgram& lp, const std::vector<Rat>& x);

}  // namespace fairdiv
