#include "icopt/objectives.hpp"

#include <cmath>

#include "icopt/errors.hpp"

namespace icopt {

namespace {

void require_dim(int k, const FactorPoint& x, const char* what) {
  if (x.dim() != k) throw InvalidInput(std::string(what) + ": dimension mismatch");
}

// Euclidean partials of a cost whose gradient in X is G: (G V, G^T U).
TangentVector factor_gradient(const FactorPoint& x, const Matrix& g) {
  return {g * x.v(), g.transpose() * x.u()};
}

// D(G V, G^T U)[xi] given dG.
TangentVector factor_gradient_directional(const FactorPoint& x, const TangentVector& xi,
                                          const Matrix& g, const Matrix& dg) {
  return {dg * x.v() + g * xi.v, dg.transpose() * x.u() + g.transpose() * xi.u};
}

Matrix x_dot(const FactorPoint& x, const TangentVector& xi) {
  return xi.u * x.v().transpose() + x.u() * xi.v.transpose();
}

}  // namespace

SparsityPattern::SparsityPattern(int k) : k_(k) {
  if (k < 1) throw InvalidInput("SparsityPattern: K must be >= 1");
  bits_.assign(static_cast<std::size_t>(k) * k, 0);
  for (int i = 0; i < k; ++i) bits_[static_cast<std::size_t>(i * k + i)] = 1;
}

SparsityPattern::SparsityPattern(const Eigen::MatrixXi& bits)
    : SparsityPattern(static_cast<int>(bits.rows())) {
  if (bits.rows() != bits.cols()) throw InvalidInput("SparsityPattern: not square");
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      const int b = bits(i, j);
      if (b != 0 && b != 1) throw InvalidInput("SparsityPattern: entries must be 0/1");
      if (i == j && b != 1) throw InvalidInput("SparsityPattern: diagonal must be 1");
      bits_[static_cast<std::size_t>(i * k_ + j)] = static_cast<std::uint8_t>(b);
    }
  }
}

SparsityPattern SparsityPattern::full(int k) {
  return SparsityPattern(Eigen::MatrixXi::Ones(k, k));
}

void SparsityPattern::set(int i, int j, bool on) {
  if (i < 0 || j < 0 || i >= k_ || j >= k_) throw InvalidInput("SparsityPattern: index");
  if (i == j && !on) throw InvalidInput("SparsityPattern: diagonal must be 1");
  bits_[static_cast<std::size_t>(i * k_ + j)] = on ? 1 : 0;
}

int SparsityPattern::nnz() const {
  int n = 0;
  for (auto b : bits_) n += b;
  return n;
}

Eigen::MatrixXi SparsityPattern::to_int() const {
  Eigen::MatrixXi m(k_, k_);
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j) m(i, j) = at(i, j) ? 1 : 0;
  return m;
}

Matrix SparsityPattern::mask() const { return to_int().cast<double>(); }

SparsityPattern extract_pattern(const Matrix& x_opt, double eps) {
  if (x_opt.rows() != x_opt.cols() || x_opt.rows() < 1) {
    throw InvalidInput("extract_pattern: X must be square");
  }
  if (!(eps > 0.0)) throw InvalidInput("extract_pattern: eps must be > 0");
  require_finite(x_opt, "extract_pattern");
  const int k = static_cast<int>(x_opt.rows());
  SparsityPattern p(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && std::abs(x_opt(i, j)) > eps) p.set(i, j, true);
  return p;
}

RegularizedObjective::RegularizedObjective(int k_, double rho_, double eps_)
    : k(k_), rho(rho_), eps(eps_) {
  if (k < 1) throw InvalidInput("RegularizedObjective: K must be >= 1");
  if (!(rho >= 0.0)) throw InvalidInput("RegularizedObjective: rho must be >= 0");
  if (!(eps > 0.0)) throw InvalidInput("RegularizedObjective: eps must be > 0");
}

double RegularizedObjective::value(const FactorPoint& x) const {
  require_dim(k, x, "reg_value");
  const Matrix xm = x.product();
  const double diag = 0.5 * (xm.diagonal().array() - 1.0).square().sum();
  const double smooth = (xm.array().square() + eps * eps).sqrt().sum();
  return diag + rho * smooth;
}

TangentVector RegularizedObjective::egrad(const FactorPoint& x) const {
  require_dim(k, x, "reg_egrad");
  const Matrix xm = x.product();
  Matrix g = rho * (xm.array() / (xm.array().square() + eps * eps).sqrt()).matrix();
  g.diagonal().array() += xm.diagonal().array() - 1.0;
  return factor_gradient(x, g);
}

TangentVector RegularizedObjective::egrad_directional(const FactorPoint& x,
                                                      const TangentVector& xi) const {
  require_dim(k, x, "reg_egrad_directional");
  require_shape(x, xi, "reg_egrad_directional");
  const Matrix xm = x.product();
  const Matrix dx = x_dot(x, xi);
  const Eigen::ArrayXXd s2 = xm.array().square() + eps * eps;
  Matrix g = rho * (xm.array() / s2.sqrt()).matrix();
  g.diagonal().array() += xm.diagonal().array() - 1.0;
  Matrix dg = rho * (dx.array() * (eps * eps) / (s2 * s2.sqrt())).matrix();
  dg.diagonal() += dx.diagonal();
  return factor_gradient_directional(x, xi, g, dg);
}

double RefinementObjective::value(const FactorPoint& x) const {
  require_dim(pattern.dim(), x, "ref_value");
  const Matrix xm = x.product();
  const Matrix off = ((1.0 - pattern.mask().array()) * xm.array()).matrix();
  return 0.5 * (xm.diagonal().array() - 1.0).square().sum() + 0.5 * off.squaredNorm();
}

TangentVector RefinementObjective::egrad(const FactorPoint& x) const {
  require_dim(pattern.dim(), x, "ref_egrad");
  const Matrix xm = x.product();
  Matrix g = ((1.0 - pattern.mask().array()) * xm.array()).matrix();
  g.diagonal().array() += xm.diagonal().array() - 1.0;
  return factor_gradient(x, g);
}

TangentVector RefinementObjective::egrad_directional(const FactorPoint& x,
                                                     const TangentVector& xi) const {
  require_dim(pattern.dim(), x, "ref_egrad_directional");
  require_shape(x, xi, "ref_egrad_directional");
  const Matrix xm = x.product();
  const Matrix dx = x_dot(x, xi);
  const Eigen::ArrayXXd off = 1.0 - pattern.mask().array();
  Matrix g = (off * xm.array()).matrix();
  g.diagonal().array() += xm.diagonal().array() - 1.0;
  Matrix dg = (off * dx.array()).matrix();
  dg.diagonal() += dx.diagonal();
  return factor_gradient_directional(x, xi, g, dg);
}

}  // namespace icopt
