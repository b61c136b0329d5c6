#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace icopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultRankTol = 1e-9;

// Throws InvalidInput if any entry is NaN or Inf. `what` names the argument.
void require_finite(const Matrix& m, const char* what);

// Number of singular values strictly above tol * sigma_max. Zero matrix -> 0.
int numerical_rank(const Matrix& m, double tol = kDefaultRankTol);

// Solves A X = B for symmetric positive definite A (small, r x r).
// Throws RankDeficiency when A is numerically singular (condition estimate
// above 1e14) and InvalidInput when A is not symmetric within 1e-12.
Matrix solve_small_spd(const Matrix& a, const Matrix& b);

// Cached Cholesky factorization of a small SPD matrix; the solver used for
// every (U^T U)^{-1} / (V^T V)^{-1} application.
class SpdFactor {
 public:
  SpdFactor() = default;
  explicit SpdFactor(const Matrix& a);

  Matrix solve(const Matrix& b) const;                  // A^{-1} B
  Matrix solve_right(const Matrix& b) const;            // B A^{-1}
  const Matrix& matrix() const { return a_; }

 private:
  Matrix a_;
  Eigen::LLT<Matrix> llt_;
};

// Deterministic standard-normal stream. The engine is std::mt19937_64
// (bit-exactly specified by the standard) and normals come from the polar
// Box-Muller transform implemented here, so the output does not depend on
// the standard library's normal_distribution.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  double uniform();  // in [0, 1) with 53 random bits

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// rows x cols matrix of N(0,1) draws, filled row-major from GaussianStream.
Matrix random_gaussian(int rows, int cols, std::uint64_t seed);

// splitmix64 finalizer; derives independent sub-seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// (Z + Z^T) / 2
inline Matrix sym(const Matrix& z) { return 0.5 * (z + z.transpose()); }

}  // namespace icopt
