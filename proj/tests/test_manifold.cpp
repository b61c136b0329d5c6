#include <gtest/gtest.h>

#include "icopt/errors.hpp"
#include "icopt/manifold.hpp"
#include "icopt/objectives.hpp"
#include "test_util.hpp"

using namespace icopt;
using namespace icopt::testing;

namespace {
Matrix scalar(double a) { return Matrix::Constant(1, 1, a); }
}  // namespace

TEST(FactorPoint, RejectsRankDeficientFactor) {
  Matrix u = Matrix::Ones(3, 2);
  EXPECT_THROW(FactorPoint(u, random_gaussian(3, 2, 1)), RankDeficiency);
}

TEST(FactorPoint, RejectsShapeMismatch) {
  EXPECT_THROW(FactorPoint(random_gaussian(3, 2, 1), random_gaussian(3, 1, 2)), InvalidInput);
}

TEST(Metric, ZeroVector) {
  const FactorPoint x = random_point(4, 2, 1);
  EXPECT_EQ(metric(x, TangentVector::zero(4, 2), random_tangent(4, 2, 3)), 0.0);
}

TEST(Metric, ScalarExpansion) {
  const FactorPoint x(scalar(2), scalar(3));
  const TangentVector xi(scalar(1), scalar(1));
  EXPECT_DOUBLE_EQ(metric(x, xi, xi), 13.0);
}

TEST(Metric, SymmetricAndPositive) {
  const FactorPoint x = random_point(5, 3, 2);
  const TangentVector a = random_tangent(5, 3, 4);
  const TangentVector b = random_tangent(5, 3, 5);
  EXPECT_NEAR(metric(x, a, b), metric(x, b, a), 1e-12 * std::abs(metric(x, a, b)) + 1e-14);
  EXPECT_GT(metric(x, a, a), 0.0);
}

TEST(Metric, ShapeMismatchThrows) {
  const FactorPoint x = random_point(4, 2, 1);
  EXPECT_THROW(metric(x, TangentVector::zero(4, 3), TangentVector::zero(4, 3)), InvalidInput);
}

TEST(ProjectHorizontal, Idempotent) {
  const FactorPoint x = random_point(5, 2, 7);
  const TangentVector h = random_horizontal(x, 8);
  const TangentVector hh = project_horizontal(x, h);
  EXPECT_LT(tnorm(hh - h), 1e-10 * tnorm(h));
  EXPECT_LT(horizontal_residual(x, h), 1e-10);
}

TEST(ProjectHorizontal, AnnihilatesVertical) {
  const FactorPoint x = random_point(5, 3, 9);
  const TangentVector vert = vertical_vector(x, random_gaussian(3, 3, 10));
  EXPECT_LT(tnorm(project_horizontal(x, vert)), 1e-10 * tnorm(vert));
}

TEST(ProjectHorizontal, OrthogonalToVertical) {
  const FactorPoint x = random_point(6, 3, 12);
  const TangentVector h = random_horizontal(x, 13);
  const TangentVector vert = vertical_vector(x, random_gaussian(3, 3, 14));
  EXPECT_LT(std::abs(metric(x, h, vert)), 1e-10 * metric_norm(x, h) * metric_norm(x, vert));
}

TEST(EgradToRgrad, Zero) {
  const FactorPoint x = random_point(4, 2, 1);
  EXPECT_EQ(tnorm(egrad_to_rgrad(x, TangentVector::zero(4, 2))), 0.0);
}

TEST(EgradToRgrad, ScalarGramInverses) {
  const FactorPoint x(scalar(2), scalar(3));
  const TangentVector g = egrad_to_rgrad(x, {scalar(6), scalar(4)});
  EXPECT_NEAR(g.u(0, 0), 6.0 / 9.0, 1e-15);
  EXPECT_NEAR(g.v(0, 0), 1.0, 1e-15);
}

TEST(EgradToRgrad, RieszRepresenter) {
  // g(rgrad, xi) = <egrad, xi> for horizontal xi and an invariant cost.
  const FactorPoint x = random_point(5, 2, 21);
  const RegularizedObjective obj(5);
  const TangentVector eg = obj.egrad(x);
  const TangentVector rg = egrad_to_rgrad(x, eg);
  const TangentVector xi = random_horizontal(x, 22);
  EXPECT_NEAR(metric(x, rg, xi), flat_inner(eg, xi), 1e-10 * tnorm(eg) * tnorm(xi));
  EXPECT_LT(horizontal_residual(x, rg), 1e-8);
}

TEST(Connection, ZeroDirection) {
  const FactorPoint x = random_point(4, 2, 1);
  const TangentVector eta = random_tangent(4, 2, 2);
  EXPECT_EQ(tnorm(connection(x, TangentVector::zero(4, 2), eta, TangentVector::zero(4, 2))), 0.0);
}

TEST(Connection, ScalarChristoffelSymbols) {
  // K = r = 1: the metric is diag(v^2, u^2) in coordinates (u, v). Christoffel
  // symbols from the coordinate formula:
  //   A_U = (a d + c b) / v - u c d / v^2,  A_V = (a d + c b) / u - v a b / u^2
  // for xi = (a, c), eta = (b, d).
  const double u = 1.7;
  const double v = -0.6;
  const double a = 0.3;
  const double c = -1.1;
  const double b = 2.0;
  const double d = 0.45;
  const FactorPoint x(scalar(u), scalar(v));
  const TangentVector res = connection(x, {scalar(a), scalar(c)}, {scalar(b), scalar(d)},
                                       TangentVector::zero(1, 1));
  EXPECT_NEAR(res.u(0, 0), (a * d + c * b) / v - u * c * d / (v * v), 1e-12);
  EXPECT_NEAR(res.v(0, 0), (a * d + c * b) / u - v * a * b / (u * u), 1e-12);
}

TEST(Connection, TorsionFree) {
  const FactorPoint x = random_point(5, 2, 31);
  const TangentVector xi = random_tangent(5, 2, 32);
  const TangentVector eta = random_tangent(5, 2, 33);
  const TangentVector zero = TangentVector::zero(5, 2);
  const TangentVector a = connection(x, xi, eta, zero);
  const TangentVector b = connection(x, eta, xi, zero);
  EXPECT_LT(tnorm(a - b), 1e-12 * tnorm(a));
}

TEST(Connection, MetricCompatibleAlongCurves) {
  // For constant coordinate fields eta, zeta:
  //   D_xi g(eta, zeta) = g(A(xi, eta), zeta) + g(eta, A(xi, zeta)).
  for (std::uint64_t s = 0; s < 5; ++s) {
    const FactorPoint x = random_point(4, 2, 40 + s);
    const TangentVector xi = random_tangent(4, 2, 50 + s);
    const TangentVector eta = random_tangent(4, 2, 60 + s);
    const TangentVector zeta = random_tangent(4, 2, 70 + s);
    const double h = 1e-5;
    const double fd = (metric(shifted(x, xi, h), eta, zeta) - metric(shifted(x, xi, -h), eta, zeta)) /
                      (2 * h);
    const TangentVector zero = TangentVector::zero(4, 2);
    const double an =
        metric(x, connection(x, xi, eta, zero), zeta) + metric(x, eta, connection(x, xi, zeta, zero));
    EXPECT_NEAR(fd, an, 1e-5 * std::max(1.0, std::abs(an)));
  }
}

TEST(RiemannianHessian, ZeroDirection) {
  const FactorPoint x = random_point(4, 2, 1);
  const RegularizedObjective obj(4);
  const TangentVector zero = TangentVector::zero(4, 2);
  EXPECT_EQ(tnorm(rhess_apply(x, zero, obj.egrad(x), obj.egrad_directional(x, zero))), 0.0);
}

TEST(RiemannianHessian, LinearAndSelfAdjoint) {
  const FactorPoint x = random_point(5, 2, 81);
  const RegularizedObjective obj(5, 1e-3, 1e-2);
  const TangentVector eg = obj.egrad(x);
  const auto hess = [&](const TangentVector& xi) {
    return rhess_apply(x, xi, eg, obj.egrad_directional(x, xi));
  };
  const TangentVector a = random_horizontal(x, 82);
  const TangentVector b = random_horizontal(x, 83);
  const double ab = metric(x, hess(a), b);
  const double ba = metric(x, a, hess(b));
  EXPECT_LT(std::abs(ab - ba), 1e-8 * std::max(std::abs(ab), 1.0));
  const TangentVector lin = hess(2.0 * a + b) - (2.0 * hess(a) + hess(b));
  EXPECT_LT(tnorm(lin), 1e-10 * tnorm(hess(a)));
  EXPECT_LT(horizontal_residual(x, hess(a)), 1e-8);
}

TEST(RiemannianHessian, SecondOrderAlongStraightLines) {
  // The retraction curve c(t) = x + t xi is straight in factor space, so its
  // covariant acceleration is A(xi, xi). Hence
  //   d^2/dt^2 f(c(t)) = g(H xi, xi) + g(grad f, A(xi, xi)).
  const FactorPoint x = random_point(4, 2, 91);
  const RegularizedObjective obj(4, 1e-3, 1e-2);
  const TangentVector xi = random_horizontal(x, 92);
  const double h = 1e-4;
  const double d2 = (obj.value(shifted(x, xi, h)) - 2 * obj.value(x) + obj.value(shifted(x, xi, -h))) /
                    (h * h);
  const TangentVector eg = obj.egrad(x);
  const TangentVector zero = TangentVector::zero(4, 2);
  const double an = metric(x, rhess_apply(x, xi, eg, obj.egrad_directional(x, xi)), xi) +
                    metric(x, egrad_to_rgrad(x, eg), connection(x, xi, xi, zero));
  EXPECT_NEAR(d2, an, 1e-4 * std::max(1.0, std::abs(an)));
}

TEST(RiemannianHessian, FiniteDifferenceAtCriticalPoint) {
  // At a stationary point the connection term drops out and H xi equals the
  // horizontal part of the rgrad difference quotient.
  const double a = 0.7;
  Matrix u(2, 1);
  Matrix v(2, 1);
  u << 1.3, 1.3 / a;
  v << 1 / 1.3, a / 1.3;
  const FactorPoint x(u, v);  // X = [[1, a], [1/a, 1]]
  const RefinementObjective obj(SparsityPattern::identity(2));
  SparsityPattern p(2);
  p.set(0, 1, true);
  p.set(1, 0, true);
  const RefinementObjective full(p);
  ASSERT_LT(full.value(x), 1e-28);
  const TangentVector xi = random_horizontal(x, 5);
  const double t = 1e-6;
  const TangentVector fd =
      (1.0 / t) * (egrad_to_rgrad(shifted(x, xi, t), full.egrad(shifted(x, xi, t))) -
                   egrad_to_rgrad(x, full.egrad(x)));
  const TangentVector h = rhess_apply(x, xi, full.egrad(x), full.egrad_directional(x, xi));
  EXPECT_LT(tnorm(project_horizontal(x, fd) - h), 1e-4 * tnorm(h));
}

TEST(Retract, ZeroStepIsIdentity) {
  const FactorPoint x = random_point(4, 2, 3);
  const FactorPoint y = retract(x, TangentVector::zero(4, 2));
  EXPECT_EQ(y.u(), x.u());
  EXPECT_EQ(y.v(), x.v());
}

TEST(Retract, SingularResultThrows) {
  const FactorPoint x(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  const TangentVector xi(-Matrix::Identity(2, 2), Matrix::Zero(2, 2));
  EXPECT_THROW(retract(x, xi), RetractionFailure);
}

TEST(Retract, FirstOrderRigidity) {
  const FactorPoint x = random_point(4, 2, 101);
  const RegularizedObjective obj(4);
  const TangentVector xi = random_horizontal(x, 102);
  const double slope = metric(x, egrad_to_rgrad(x, obj.egrad(x)), xi);
  const auto err = [&](double t) {
    return std::abs(obj.value(retract(x, t * xi)) - obj.value(x) - t * slope);
  };
  // Second-order remainder: a tenfold smaller step shrinks it ~100x.
  const double ratio = err(1e-3) / err(1e-4);
  EXPECT_GT(ratio, 50.0);
  EXPECT_LT(ratio, 200.0);
}

TEST(QuotientInvariance, ValuesAndGradientNorms) {
  const FactorPoint x = random_point(5, 3, 111);
  const Matrix m = random_gl(3, 112);
  const FactorPoint y(x.u() * m.inverse(), x.v() * m.transpose());
  const RegularizedObjective obj(5);
  EXPECT_NEAR(obj.value(x), obj.value(y), 1e-12 * obj.value(x));
  const double nx = metric_norm(x, egrad_to_rgrad(x, obj.egrad(x)));
  const double ny = metric_norm(y, egrad_to_rgrad(y, obj.egrad(y)));
  EXPECT_NEAR(nx, ny, 1e-8 * nx);
}
