#pragma once

// Quotient geometry of K x K rank-r matrices X = U V^T under the action
// (U, V) -> (U M^{-1}, V M^T), M in GL(r), with the Gram-scaled metric
//
//   g_x(xi, eta) = Tr((V^T V) xi_U^T eta_U) + Tr((U^T U) xi_V^T eta_V).
//
// Tangent vectors are represented by their horizontal lifts: pairs
// (xi_U, xi_V) with U^T xi_U (V^T V) = (U^T U) xi_V^T V.

#include "icopt/linalg.hpp"

namespace icopt {

struct TangentVector {
  Matrix u;
  Matrix v;

  TangentVector() = default;
  TangentVector(Matrix xi_u, Matrix xi_v) : u(std::move(xi_u)), v(std::move(xi_v)) {}

  static TangentVector zero(int k, int r) {
    return {Matrix::Zero(k, r), Matrix::Zero(k, r)};
  }

  TangentVector& operator+=(const TangentVector& o) {
    u += o.u;
    v += o.v;
    return *this;
  }
  TangentVector& operator-=(const TangentVector& o) {
    u -= o.u;
    v -= o.v;
    return *this;
  }
  TangentVector& operator*=(double a) {
    u *= a;
    v *= a;
    return *this;
  }
  bool all_finite() const { return u.allFinite() && v.allFinite(); }
};

inline TangentVector operator+(TangentVector a, const TangentVector& b) { return a += b; }
inline TangentVector operator-(TangentVector a, const TangentVector& b) { return a -= b; }
inline TangentVector operator*(double s, TangentVector a) { return a *= s; }

// Flat (Frobenius) inner product on the total space; used by oracles.
inline double flat_inner(const TangentVector& a, const TangentVector& b) {
  return (a.u.array() * b.u.array()).sum() + (a.v.array() * b.v.array()).sum();
}

class FactorPoint {
 public:
  // Throws InvalidInput on shape mismatch or non-finite entries and
  // RankDeficiency when U or V is not of full column rank.
  FactorPoint(Matrix u, Matrix v);

  const Matrix& u() const { return u_; }
  const Matrix& v() const { return v_; }
  const Matrix& gram_u() const { return gram_u_.matrix(); }
  const Matrix& gram_v() const { return gram_v_.matrix(); }
  const SpdFactor& gram_u_factor() const { return gram_u_; }
  const SpdFactor& gram_v_factor() const { return gram_v_; }

  int dim() const { return static_cast<int>(u_.rows()); }
  int rank() const { return static_cast<int>(u_.cols()); }

  Matrix product() const { return u_ * v_.transpose(); }

 private:
  Matrix u_;
  Matrix v_;
  SpdFactor gram_u_;
  SpdFactor gram_v_;
};

void require_shape(const FactorPoint& x, const TangentVector& xi, const char* what);

double metric(const FactorPoint& x, const TangentVector& xi, const TangentVector& eta);
inline double metric_norm(const FactorPoint& x, const TangentVector& xi) {
  return std::sqrt(std::max(0.0, metric(x, xi, xi)));
}

// Max-abs residual of U^T xi_U (V^T V) - (U^T U) xi_V^T V, relative to the
// scale of the two terms.
double horizontal_residual(const FactorPoint& x, const TangentVector& xi);

TangentVector project_horizontal(const FactorPoint& x, const TangentVector& eta);

// (-U L, V L^T): the tangent direction of the GL(r) orbit generated by L.
TangentVector vertical_vector(const FactorPoint& x, const Matrix& lambda);

// (dF/dU (V^T V)^{-1}, dF/dV (U^T U)^{-1}) followed by horizontal projection.
TangentVector egrad_to_rgrad(const FactorPoint& x, const TangentVector& egrad);

// Levi-Civita connection of the total space: D eta[xi] + (A_U, A_V).
// `eta_directional` is the Euclidean directional derivative D eta[xi].
TangentVector connection(const FactorPoint& x, const TangentVector& xi,
                         const TangentVector& eta, const TangentVector& eta_directional);

// Riemannian Hessian action Pi_x(nabla_xi grad f). `egrad_directional` is
// D(egrad)[xi] supplied by the objective.
TangentVector rhess_apply(const FactorPoint& x, const TangentVector& xi,
                          const TangentVector& egrad,
                          const TangentVector& egrad_directional);

// (U + xi_U, V + xi_V). Throws RetractionFailure if the result is
// rank-deficient.
FactorPoint retract(const FactorPoint& x, const TangentVector& xi);

}  // namespace icopt
