#include "icopt/manifold.hpp"

#include <cmath>
#include <string>

#include "icopt/errors.hpp"

namespace icopt {

namespace {

constexpr double kFullRankTol = 1e-12;

void require_full_column_rank(const Matrix& m, const char* what) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  const Eigen::Index r = m.cols();
  if (s.size() < r || !(s(r - 1) > kFullRankTol * s(0))) {
    throw RankDeficiency(std::string(what) + " is not of full column rank");
  }
}

}  // namespace

FactorPoint::FactorPoint(Matrix u, Matrix v) : u_(std::move(u)), v_(std::move(v)) {
  if (u_.rows() != v_.rows() || u_.cols() != v_.cols() || u_.cols() < 1 ||
      u_.cols() > u_.rows()) {
    throw InvalidInput("FactorPoint: U and V must both be K x r with 1 <= r <= K");
  }
  require_finite(u_, "FactorPoint U");
  require_finite(v_, "FactorPoint V");
  require_full_column_rank(u_, "U");
  require_full_column_rank(v_, "V");
  gram_u_ = SpdFactor(sym(u_.transpose() * u_));
  gram_v_ = SpdFactor(sym(v_.transpose() * v_));
}

void require_shape(const FactorPoint& x, const TangentVector& xi, const char* what) {
  if (xi.u.rows() != x.dim() || xi.u.cols() != x.rank() || xi.v.rows() != x.dim() ||
      xi.v.cols() != x.rank()) {
    throw InvalidInput(std::string(what) + ": tangent vector shape does not match point");
  }
}

double metric(const FactorPoint& x, const TangentVector& xi, const TangentVector& eta) {
  require_shape(x, xi, "metric");
  require_shape(x, eta, "metric");
  // Tr(G_V xi_U^T eta_U) = sum((xi_U G_V) .* eta_U)
  return ((xi.u * x.gram_v()).array() * eta.u.array()).sum() +
         ((xi.v * x.gram_u()).array() * eta.v.array()).sum();
}

double horizontal_residual(const FactorPoint& x, const TangentVector& xi) {
  require_shape(x, xi, "horizontal_residual");
  const Matrix lhs = x.u().transpose() * xi.u * x.gram_v();
  const Matrix rhs = x.gram_u() * xi.v.transpose() * x.v();
  const double scale = x.u().norm() * xi.u.norm() * x.gram_v().norm() +
                       x.v().norm() * xi.v.norm() * x.gram_u().norm();
  if (scale == 0.0) return 0.0;
  return (lhs - rhs).cwiseAbs().maxCoeff() / scale;
}

TangentVector project_horizontal(const FactorPoint& x, const TangentVector& eta) {
  require_shape(x, eta, "project_horizontal");
  // Lambda = 0.5 [eta_V^T V (V^T V)^{-1} - (U^T U)^{-1} U^T eta_U]
  const Matrix lambda = 0.5 * (x.gram_v_factor().solve_right(eta.v.transpose() * x.v()) -
                               x.gram_u_factor().solve(x.u().transpose() * eta.u));
  return {eta.u + x.u() * lambda, eta.v - x.v() * lambda.transpose()};
}

TangentVector vertical_vector(const FactorPoint& x, const Matrix& lambda) {
  if (lambda.rows() != x.rank() || lambda.cols() != x.rank()) {
    throw InvalidInput("vertical_vector: Lambda must be r x r");
  }
  return {-x.u() * lambda, x.v() * lambda.transpose()};
}

TangentVector egrad_to_rgrad(const FactorPoint& x, const TangentVector& egrad) {
  require_shape(x, egrad, "egrad_to_rgrad");
  TangentVector scaled{x.gram_v_factor().solve_right(egrad.u),
                       x.gram_u_factor().solve_right(egrad.v)};
  return project_horizontal(x, scaled);
}

TangentVector connection(const FactorPoint& x, const TangentVector& xi,
                         const TangentVector& eta, const TangentVector& eta_directional) {
  require_shape(x, xi, "connection");
  require_shape(x, eta, "connection");
  require_shape(x, eta_directional, "connection");
  const Matrix& u = x.u();
  const Matrix& v = x.v();
  const Matrix a_u = eta.u * sym(xi.v.transpose() * v) + xi.u * sym(eta.v.transpose() * v) -
                     u * sym(eta.v.transpose() * xi.v);
  const Matrix a_v = eta.v * sym(xi.u.transpose() * u) + xi.v * sym(eta.u.transpose() * u) -
                     v * sym(eta.u.transpose() * xi.u);
  return {eta_directional.u + x.gram_v_factor().solve_right(a_u),
          eta_directional.v + x.gram_u_factor().solve_right(a_v)};
}

TangentVector rhess_apply(const FactorPoint& x, const TangentVector& xi,
                          const TangentVector& egrad,
                          const TangentVector& egrad_directional) {
  require_shape(x, xi, "rhess_apply");
  require_shape(x, egrad, "rhess_apply");
  require_shape(x, egrad_directional, "rhess_apply");
  const SpdFactor& gu = x.gram_u_factor();
  const SpdFactor& gv = x.gram_v_factor();

  const Matrix fu_gv = gv.solve_right(egrad.u);  // f_U G_V^{-1}
  const Matrix fv_gu = gu.solve_right(egrad.v);  // f_V G_U^{-1}
  const TangentVector rgrad{fu_gv, fv_gu};

  // D[f_U G_V^{-1}][xi] = (D f_U[xi]) G_V^{-1} - f_U G_V^{-1} dG_V G_V^{-1}
  const Matrix dgv = xi.v.transpose() * x.v() + x.v().transpose() * xi.v;
  const Matrix dgu = xi.u.transpose() * x.u() + x.u().transpose() * xi.u;
  const TangentVector rgrad_directional{
      gv.solve_right(egrad_directional.u - fu_gv * dgv),
      gu.solve_right(egrad_directional.v - fv_gu * dgu)};

  return project_horizontal(x, connection(x, xi, rgrad, rgrad_directional));
}

FactorPoint retract(const FactorPoint& x, const TangentVector& xi) {
  require_shape(x, xi, "retract");
  try {
    return FactorPoint(x.u() + xi.u, x.v() + xi.v);
  } catch (const RankDeficiency& e) {
    throw RetractionFailure(std::string("retract: ") + e.what());
  } catch (const InvalidInput& e) {
    throw RetractionFailure(std::string("retract: ") + e.what());
  }
}

}  // namespace icopt
