#include <gtest/gtest.h>

#include <limits>

#include "icopt/altmin.hpp"
#include "icopt/errors.hpp"
#include "icopt/simplex.hpp"

using namespace icopt;

namespace {

// min ||V u||_1 s.t. a^T u = 1 over r <= 2 by brute force: the feasible set
// is a point (r = 1) or a line u0 + t n (r = 2). The objective is convex and
// piecewise linear in t, so its minimum sits at a kink; we scan a dense grid
// and add every kink exactly.
double brute_force_row(const Matrix& v, const Vector& a) {
  if (a.size() == 1) return (v * (Vector(1) << 1.0 / a(0)).finished()).cwiseAbs().sum();
  const Vector u0 = a / a.squaredNorm();
  Vector n(2);
  n << -a(1), a(0);
  const Vector p = v * u0;
  const Vector q = v * n;
  const auto f = [&](double t) { return (p + t * q).cwiseAbs().sum(); };
  double best = std::numeric_limits<double>::infinity();
  for (int i = -200000; i <= 200000; ++i) best = std::min(best, f(i * 5e-5));
  for (int i = 0; i < q.size(); ++i) {
    if (std::abs(q(i)) > 1e-14) best = std::min(best, f(-p(i) / q(i)));
  }
  return best;
}

}  // namespace

TEST(Simplex, SmallLpOptimum) {
  // min -x1 - x2  s.t.  x1 + 2 x2 + s1 = 4,  3 x1 + x2 + s2 = 6
  Matrix a(2, 4);
  a << 1, 2, 1, 0, 3, 1, 0, 1;
  Vector b(2);
  b << 4, 6;
  Vector c(4);
  c << -1, -1, 0, 0;
  const LpSolution sol = solve_standard_lp(a, b, c);
  EXPECT_NEAR(sol.objective, -2.8, 1e-12);
  EXPECT_NEAR(sol.x(0), 1.6, 1e-12);
  EXPECT_NEAR(sol.x(1), 1.2, 1e-12);
}

TEST(Simplex, InfeasibleThrows) {
  Matrix a(2, 2);
  a << 1, 1, 1, 1;
  Vector b(2);
  b << 1, 2;
  EXPECT_THROW(solve_standard_lp(a, b, Vector::Zero(2)), InfeasibleRow);
}

TEST(Simplex, UnboundedThrows) {
  Matrix a(1, 2);
  a << 1, -1;
  Vector b(1);
  b << 0;
  Vector c(2);
  c << -1, 0;
  EXPECT_THROW(solve_standard_lp(a, b, c), NumericalFailure);
}

TEST(Simplex, RedundantRowsHandled) {
  Matrix a(2, 3);
  a << 1, 1, 1, 2, 2, 2;
  Vector b(2);
  b << 1, 2;
  Vector c(3);
  c << 3, 1, 2;
  const LpSolution sol = solve_standard_lp(a, b, c);
  EXPECT_NEAR(sol.objective, 1.0, 1e-12);
}

TEST(Simplex, TieBreakOnOptimalFace) {
  // Every feasible point is optimal for c = 0; the tie-break picks x2.
  Matrix a(1, 2);
  a << 1, 1;
  Vector b(1);
  b << 1;
  Vector tb(2);
  tb << 2, 1;
  const LpSolution sol = solve_standard_lp(a, b, Vector::Zero(2), tb);
  EXPECT_NEAR(sol.x(0), 0.0, 1e-12);
  EXPECT_NEAR(sol.x(1), 1.0, 1e-12);
}

TEST(RowLp, ScalarForcedPoint) {
  Matrix v(2, 1);
  v << 2, 3;
  const RowLpResult res = lp_row_subproblem(v, Vector::Constant(1, 2.0));
  EXPECT_NEAR(res.u(0), 0.5, 1e-12);
  EXPECT_NEAR(res.objective, 2.5, 1e-12);
}

TEST(RowLp, IdentityV) {
  for (int i = 0; i < 4; ++i) {
    const RowLpResult res = lp_row_subproblem(Matrix::Identity(4, 4), Vector::Unit(4, i));
    EXPECT_LT((res.u - Vector::Unit(4, i)).norm(), 1e-12);
    EXPECT_NEAR(res.objective, 1.0, 1e-12);
  }
}

TEST(RowLp, DegenerateTieBrokenTowardSparse) {
  Matrix v(3, 2);
  v << 1, 0, 0, 1, 1, 1;
  Vector a(2);
  a << 1, 0;
  const RowLpResult res = lp_row_subproblem(v, a);
  EXPECT_NEAR(res.u(0), 1.0, 1e-12);
  EXPECT_NEAR(res.u(1), 0.0, 1e-12);
  EXPECT_NEAR(res.objective, 2.0, 1e-12);
}

TEST(RowLp, ZeroAnchorThrows) {
  EXPECT_THROW(lp_row_subproblem(Matrix::Identity(2, 2), Vector::Zero(2)), InfeasibleRow);
}

TEST(RowLp, MatchesGridBruteForce) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const int r = 1 + static_cast<int>(s % 2);
    const Matrix v = random_gaussian(5, r, s);
    const Vector a = random_gaussian(r, 1, 1000 + s);
    const RowLpResult res = lp_row_subproblem(v, a);
    EXPECT_NEAR(a.dot(res.u), 1.0, 1e-10);
    EXPECT_NEAR(res.objective, (v * res.u).cwiseAbs().sum(), 1e-10);
    const double bf = brute_force_row(v, a);
    EXPECT_LE(res.objective - bf, 1e-6) << "seed " << s;
    EXPECT_LE(bf - res.objective, 1e-6) << "seed " << s;
  }
}

TEST(AltMin, FullRankTwoUsersFindsIdentity) {
  AltMinConfig cfg;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const IndexCodingSolution sol = altmin_run(2, 2, cfg, seed);
    EXPECT_TRUE(sol.feasible) << "seed " << seed;
    EXPECT_EQ(sol.side_info_amount, 0) << "seed " << seed;
  }
}

TEST(AltMin, RankOneTwoUsersIsDense) {
  const IndexCodingSolution sol = altmin_solve(2, 1, AltMinConfig{});
  EXPECT_TRUE(sol.feasible);
  EXPECT_EQ(sol.side_info_amount, 2);
}

TEST(AltMin, ObjectiveMonotoneAcrossHalfSteps) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    AltMinTrace trace;
    altmin_run(8, 3, AltMinConfig{}, seed, &trace);
    ASSERT_GE(trace.objective.size(), 2u);
    for (std::size_t i = 1; i < trace.objective.size(); ++i) {
      EXPECT_LE(trace.objective[i], trace.objective[i - 1] * (1 + 1e-12) + 1e-12)
          << "seed " << seed << " half-step " << i;
    }
  }
}

TEST(AltMin, DeterministicUnderSeed) {
  const IndexCodingSolution a = altmin_solve(6, 3, AltMinConfig{});
  const IndexCodingSolution b = altmin_solve(6, 3, AltMinConfig{});
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.pattern, b.pattern);
}

TEST(AltMin, ConfigValidation) {
  AltMinConfig cfg;
  cfg.max_outer = 0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
}
