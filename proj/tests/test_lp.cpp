#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fairdiv/lp.hpp"

using namespace fairdiv;

namespace {

LPRow row(std::vector<Rat> coeffs, Relation rel, Rat rhs) {
    return LPRow{std::move(coeffs), rel, std::move(rhs)};
}

}  // namespace

TEST_CASE("single upper bound") {
    LinearProgram lp;
    lp.objective = {Rat(1)};
    lp.rows.push_back(row({Rat(1)}, Relation::Le, Rat(3)));
    auto res = lp_solve(lp);
    REQUIRE(res.status == LPStatus::Optimal);
    CHECK(res.objective_value == Rat(3));
    CHECK(res.solution[0] == Rat(3));
    CHECK(lp_feasible(lp, res.solution));
}

TEST_CASE("equality forces the value") {
    LinearProgram lp;
    lp.objective = {Rat(1), Rat(1)};
    lp.rows.push_back(row({Rat(1), Rat(1)}, Relation::Eq, Rat(1)));
    auto res = lp_solve(lp);
    REQUIRE(res.status == LPStatus::Optimal);
    CHECK(res.objective_value == Rat(1));
    CHECK(lp_feasible(lp, res.solution));
}

TEST_CASE("contradictory bounds are infeasible") {
    LinearProgram lp;
    lp.objective = {Rat(0)};
    lp.rows.push_back(row({Rat(1)}, Relation::Ge, Rat(2)));
    lp.rows.push_back(row({Rat(1)}, Relation::Le, Rat(1)));
    CHECK(lp_solve(lp).status == LPStatus::Infeasible);
}

TEST_CASE("unbounded detection") {
    LinearProgram lp;
    lp.objective = {Rat(1)};
    lp.rows.push_back(row({Rat(1)}, Relation::Ge, Rat(2)));
    CHECK(lp_solve(lp).status == LPStatus::Unbounded);
}

TEST_CASE("malformed rows throw") {
    LinearProgram lp;
    lp.objective = {Rat(1), Rat(2)};
    lp.rows.push_back(row({Rat(1)}, Relation::Le, Rat(1)));
    CHECK_THROWS_AS(lp_solve(lp), MalformedLP);
}

TEST_CASE("lower bounds are honored") {
    LinearProgram lp;
    lp.objective = {Rat(-1), Rat(-1)};
    lp.rows.push_back(row({Rat(1), Rat(1)}, Relation::Le, Rat(10)));
    lp.lower_bounds = {Rat(1, 2), Rat(2, 3)};
    auto res = lp_solve(lp);
    REQUIRE(res.status == LPStatus::Optimal);
    CHECK(res.solution[0] == Rat(1, 2));
    CHECK(res.solution[1] == Rat(2, 3));
    CHECK(res.objective_value == Rat(-7, 6));
}

TEST_CASE("exact fractional optimum") {
    // max 2x + 3y s.t. 2x + y <= 3, x + 3y <= 5/2
    LinearProgram lp;
    lp.objective = {Rat(2), Rat(3)};
    lp.rows.push_back(row({Rat(2), Rat(1)}, Relation::Le, Rat(3)));
    lp.rows.push_back(row({Rat(1), Rat(3)}, Relation::Le, Rat(5, 2)));
    auto res = lp_solve(lp);
    REQUIRE(res.status == LPStatus::Optimal);
    CHECK(res.objective_value == Rat(19, 5));
    CHECK(res.solution[0] == Rat(13, 10));
    CHECK(res.solution[1] == Rat(2, 5));
}

TEST_CASE("degenerate equalities with redundant rows") {
    LinearProgram lp;
    lp.objective = {Rat(1), Rat(2), Rat(1)};
    lp.rows.push_back(row({Rat(1), Rat(1), Rat(1)}, Relation::Eq, Rat(1)));
    lp.rows.push_back(row({Rat(2), Rat(2), Rat(2)}, Relation::Eq, Rat(2)));  // redundant
    auto res = lp_solve(lp);
    REQUIRE(res.status == LPStatus::Optimal);
    CHECK(res.objective_value == Rat(2));
    CHECK(lp_feasible(lp, res.solution));
}

namespace {

// Random LPs in the canonical form max c.x s.t. Ax <= b, x >= 0 with b >= 0
// (always feasible at x = 0).
LinearProgram random_canonical_lp(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim(1, 4);
    std::uniform_int_distribution<int> coef(-3, 5);
    std::uniform_int_distribution<int> rhs(0, 8);
    std::uniform_int_distribution<int> den(1, 3);
    int n = dim(rng), m = dim(rng);
    LinearProgram lp;
    for (int j = 0; j < n; ++j) lp.objective.push_back(Rat(coef(rng), den(rng)));
    for (int i = 0; i < m; ++i) {
        LPRow r;
        for (int j = 0; j < n; ++j) r.coeffs.push_back(Rat(coef(rng), den(rng)));
        r.rel = Relation::Le;
        r.rhs = Rat(rhs(rng), den(rng));
        lp.rows.push_back(std::move(r));
    }
    return lp;
}

LinearProgram dual_of_canonical(const LinearProgram& lp) {
    // min b.y s.t. A^T y >= c, y >= 0  ==  max -b.y s.t. -A^T y <= -c.
    LinearProgram dual;
    for (const auto& r : lp.rows) dual.objective.push_back(-r.rhs);
    for (std::size_t j = 0; j < lp.objective.size(); ++j) {
        LPRow r;
        for (const auto& prow : lp.rows) r.coeffs.push_back(prow.coeffs[j]);
        r.rel = Relation::Ge;
        r.rhs = lp.objective[j];
        dual.rows.push_back(std::move(r));
    }
    return dual;
}

}  // namespace

TEST_CASE("strong duality on 200 random LPs") {
    std::mt19937_64 rng(20240501);
    int optimal_count = 0;
    for (int iter = 0; iter < 200; ++iter) {
        LinearProgram lp = random_canonical_lp(rng);
        auto primal = lp_solve(lp);
        auto dual = lp_solve(dual_of_canonical(lp));
        if (primal.status == LPStatus::Optimal) {
            ++optimal_count;
            REQUIRE(dual.status == LPStatus::Optimal);
            CHECK(primal.objective_value == -dual.objective_value);
            CHECK(lp_feasible(lp, primal.solution));
        } else {
            // Canonical LPs here are always feasible, so the alternative is
            // unboundedness, which makes the dual infeasible.
            REQUIRE(primal.status == LPStatus::Unbounded);
            CHECK(dual.status == LPStatus::Infeasible);
        }
    }
    CHECK(optimal_count > 50);
}

TEST_CASE("deterministic resolves") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        LinearProgram lp = random_canonical_lp(rng);
        auto a = lp_solve(lp);
        auto b = lp_solve(lp);
        REQUIRE(a.status == b.status);
        if (a.status == LPStatus::Optimal) {
            CHECK(a.objective_value == b.objective_value);
            REQUIRE(a.solution.size() == b.solution.size());
            for (std::size_t j = 0; j < a.solution.size(); ++j) {
                CHECK(a.solution[j] == b.solution[j]);
            }
        }
    }
}
