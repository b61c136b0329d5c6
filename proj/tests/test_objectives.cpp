#include <gtest/gtest.h>

#include "icopt/errors.hpp"
#include "icopt/objectives.hpp"
#include "test_util.hpp"

using namespace icopt;
using namespace icopt::testing;

namespace {
Matrix scalar(double a) { return Matrix::Constant(1, 1, a); }

FactorPoint point_for(const Matrix& x) {
  // X = X * I^T with full-rank X.
  return FactorPoint(x, Matrix::Identity(x.rows(), x.cols()));
}

SparsityPattern full_pattern(int k) { return SparsityPattern::full(k); }
}  // namespace

TEST(RegularizedObjective, IdentityWithoutPenalty) {
  const RegularizedObjective obj(3, 0.0, 1e-2);
  EXPECT_EQ(obj.value(point_for(Matrix::Identity(3, 3))), 0.0);
}

TEST(RegularizedObjective, IdentityClosedForm) {
  const RegularizedObjective obj(2, 1e-3, 1e-2);
  const double expected = 1e-3 * (2 * std::sqrt(1 + 1e-4) + 2 * 1e-2);
  EXPECT_NEAR(obj.value(point_for(Matrix::Identity(2, 2))), expected, 1e-15);
  EXPECT_NEAR(expected, 0.0020201, 1e-9);
}

TEST(RegularizedObjective, ScalarPlugIn) {
  const RegularizedObjective obj(1, 1e-3, 1e-2);
  const FactorPoint x(scalar(0.5), scalar(0.5));
  EXPECT_NEAR(obj.value(x), 0.5 * 0.75 * 0.75 + 1e-3 * std::sqrt(0.0625 + 1e-4), 1e-15);
}

TEST(RegularizedObjective, DimensionMismatch) {
  const RegularizedObjective obj(3);
  EXPECT_THROW(obj.value(random_point(4, 2, 1)), InvalidInput);
}

TEST(RegularizedObjective, GradientVanishesAtIdentityWithoutPenalty) {
  const RegularizedObjective obj(3, 0.0, 1e-2);
  EXPECT_EQ(tnorm(obj.egrad(point_for(Matrix::Identity(3, 3)))), 0.0);
  const RegularizedObjective one(1, 0.0, 1e-2);
  EXPECT_EQ(tnorm(one.egrad(FactorPoint(scalar(1), scalar(1)))), 0.0);
}

TEST(RegularizedObjective, GradientMatchesFiniteDifferences) {
  for (int k = 1; k <= 4; ++k) {
    for (int r = 1; r <= k; ++r) {
      const FactorPoint x = random_point(k, r, 10 * k + r);
      const RegularizedObjective obj(k, 1e-3, 1e-2);
      const TangentVector fd = fd_gradient([&](const FactorPoint& p) { return obj.value(p); }, x);
      const TangentVector an = obj.egrad(x);
      EXPECT_LT(tnorm(fd - an), 1e-6 * tnorm(an)) << "k=" << k << " r=" << r;
    }
  }
}

TEST(RegularizedObjective, DirectionalDerivativeMatchesFiniteDifferences) {
  const FactorPoint x = random_point(4, 2, 5);
  const RegularizedObjective obj(4, 1e-3, 1e-2);
  const TangentVector xi = random_tangent(4, 2, 6);
  const double h = 1e-6;
  const TangentVector fd =
      (1.0 / (2 * h)) * (obj.egrad(shifted(x, xi, h)) - obj.egrad(shifted(x, xi, -h)));
  const TangentVector an = obj.egrad_directional(x, xi);
  EXPECT_LT(tnorm(fd - an), 1e-6 * tnorm(an));
  EXPECT_EQ(tnorm(obj.egrad_directional(x, TangentVector::zero(4, 2))), 0.0);
}

TEST(RegularizedObjective, ApproachesL1AsEpsShrinks) {
  const FactorPoint x = random_point(4, 3, 7);
  const Matrix m = x.product();
  const double rho = 1e-3;
  const double l1 = 0.5 * (m.diagonal().array() - 1).square().sum() + rho * m.cwiseAbs().sum();
  const RegularizedObjective small(4, rho, 1e-4);
  EXPECT_LE(small.value(x) - l1, rho * 16 * 1e-4);
  EXPECT_GE(small.value(x), l1);
  const RegularizedObjective larger(4, rho, 1e-2);
  EXPECT_GT(larger.value(x), small.value(x));
}

TEST(RegularizedObjective, QuotientInvariant) {
  const FactorPoint x = random_point(5, 2, 8);
  const Matrix m = random_gl(2, 9);
  const FactorPoint y(x.u() * m.inverse(), x.v() * m.transpose());
  const RegularizedObjective obj(5);
  EXPECT_NEAR(obj.value(x), obj.value(y), 1e-12 * obj.value(x));
}

TEST(ExtractPattern, IdentityInIdentityOut) {
  EXPECT_EQ(extract_pattern(Matrix::Identity(4, 4), 0.01), SparsityPattern::identity(4));
}

TEST(ExtractPattern, AbsoluteValueAndThreshold) {
  Matrix x = Matrix::Identity(3, 3);
  x(0, 1) = -0.5;
  x(0, 2) = 0.005;
  const SparsityPattern p = extract_pattern(x, 0.01);
  EXPECT_TRUE(p.at(0, 1));
  EXPECT_FALSE(p.at(0, 2));
}

TEST(ExtractPattern, DiagonalForced) {
  Matrix x = Matrix::Identity(3, 3);
  x(1, 1) = 1e-5;
  EXPECT_TRUE(extract_pattern(x, 0.01).at(1, 1));
}

TEST(SparsityPattern, CountsAndDiagonal) {
  SparsityPattern p(4);
  EXPECT_EQ(p.nnz(), 4);
  p.set(1, 2, true);
  EXPECT_EQ(p.nnz(), 5);
  EXPECT_THROW(p.set(2, 2, false), InvalidInput);
  EXPECT_EQ(full_pattern(4).nnz(), 16);
}

TEST(RefinementObjective, IdentityAnyPattern) {
  SparsityPattern p(3);
  p.set(0, 2, true);
  EXPECT_EQ(RefinementObjective(p).value(point_for(Matrix::Identity(3, 3))), 0.0);
}

TEST(RefinementObjective, FullPatternDisablesCompletionTerm) {
  Matrix x(2, 2);
  x << 1, 3, 2, 1;
  EXPECT_NEAR(RefinementObjective(full_pattern(2)).value(point_for(x)), 0.0, 1e-15);
}

TEST(RefinementObjective, SingleOffPatternEntry) {
  Matrix x(2, 2);
  x << 1, 0.1, 0, 1;
  EXPECT_NEAR(RefinementObjective(SparsityPattern::identity(2)).value(point_for(x)), 0.005, 1e-15);
}

TEST(RefinementObjective, GradientsMatchFiniteDifferences) {
  SparsityPattern p(4);
  p.set(0, 1, true);
  p.set(2, 3, true);
  p.set(3, 0, true);
  const RefinementObjective obj(p);
  const FactorPoint x = random_point(4, 2, 12);
  const TangentVector fd = fd_gradient([&](const FactorPoint& q) { return obj.value(q); }, x);
  EXPECT_LT(tnorm(fd - obj.egrad(x)), 1e-6 * tnorm(obj.egrad(x)));
  const TangentVector xi = random_tangent(4, 2, 13);
  const double h = 1e-6;
  const TangentVector fdd =
      (1.0 / (2 * h)) * (obj.egrad(shifted(x, xi, h)) - obj.egrad(shifted(x, xi, -h)));
  EXPECT_LT(tnorm(fdd - obj.egrad_directional(x, xi)), 1e-6 * tnorm(fdd));
}

TEST(RefinementObjective, ZeroIffPatternAndDiagonalMatch) {
  Matrix x(2, 2);
  x << 1, 0, 0, 1.0000001;
  EXPECT_GT(RefinementObjective(SparsityPattern::identity(2)).value(point_for(x)), 0.0);
}
