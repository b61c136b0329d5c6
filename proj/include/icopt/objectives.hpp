#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "icopt/manifold.hpp"

namespace icopt {

// Binary K x K matrix with unit diagonal marking the entries of X that are
// allowed to be nonzero. Off-diagonal ones are side information.
class SparsityPattern {
 public:
  // All-zero off-diagonal (identity) pattern.
  explicit SparsityPattern(int k);
  // Entries must be 0 or 1 with a unit diagonal; throws InvalidInput otherwise.
  explicit SparsityPattern(const Eigen::MatrixXi& bits);

  static SparsityPattern identity(int k) { return SparsityPattern(k); }
  static SparsityPattern full(int k);

  int dim() const { return k_; }
  bool at(int i, int j) const { return bits_[static_cast<std::size_t>(i * k_ + j)] != 0; }
  void set(int i, int j, bool on);  // diagonal cannot be cleared
  int nnz() const;

  Eigen::MatrixXi to_int() const;
  // 1.0 at allowed positions, 0.0 elsewhere.
  Matrix mask() const;

  bool operator==(const SparsityPattern&) const = default;

 private:
  int k_;
  std::vector<std::uint8_t> bits_;
};

// P_ij = 1 iff |X_ij| > eps; the diagonal is always 1.
SparsityPattern extract_pattern(const Matrix& x_opt, double eps);

// 1/2 sum_i (X_ii - 1)^2 + rho sum_ij (X_ij^2 + eps^2)^{1/2}
struct RegularizedObjective {
  int k;
  double rho = 1e-3;
  double eps = 1e-2;

  RegularizedObjective(int k_, double rho_ = 1e-3, double eps_ = 1e-2);

  double value(const FactorPoint& x) const;
  TangentVector egrad(const FactorPoint& x) const;
  TangentVector egrad_directional(const FactorPoint& x, const TangentVector& xi) const;
};

// 1/2 sum_i (X_ii - 1)^2 + 1/2 ||(P .* X) - X||_F^2
struct RefinementObjective {
  SparsityPattern pattern;

  explicit RefinementObjective(SparsityPattern p) : pattern(std::move(p)) {}

  double value(const FactorPoint& x) const;
  TangentVector egrad(const FactorPoint& x) const;
  TangentVector egrad_directional(const FactorPoint& x, const TangentVector& xi) const;
};

// Callback bundle consumed by the trust-region solver.
struct CostFunctions {
  std::function<double(const FactorPoint&)> value;
  std::function<TangentVector(const FactorPoint&)> egrad;
  std::function<TangentVector(const FactorPoint&, const TangentVector&)> egrad_directional;
};

template <class Objective>
CostFunctions make_cost(const Objective& obj) {
  return {[obj](const FactorPoint& x) { return obj.value(x); },
          [obj](const FactorPoint& x) { return obj.egrad(x); },
          [obj](const FactorPoint& x, const TangentVector& xi) {
            return obj.egrad_directional(x, xi);
          }};
}

}  // namespace icopt
