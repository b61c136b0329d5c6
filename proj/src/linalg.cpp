#include "icopt/linalg.hpp"

#include <cmath>
#include <string>

#include "icopt/errors.hpp"

namespace icopt {

namespace {
constexpr double kMaxCondition = 1e14;
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entry");
  }
}

int numerical_rank(const Matrix& m, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("numerical_rank: tol must be > 0");
  require_finite(m, "numerical_rank");
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = tol * s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) ++rank;
  }
  return rank;
}

SpdFactor::SpdFactor(const Matrix& a) : a_(a) {
  if (a.rows() != a.cols()) throw InvalidInput("SpdFactor: matrix not square");
  require_finite(a, "SpdFactor");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInput("SpdFactor: matrix not symmetric");
  }
  llt_.compute(a);
  if (llt_.info() != Eigen::Success) {
    throw RankDeficiency("SpdFactor: matrix not positive definite");
  }
  // cond(A) = (max L_ii / min L_ii)^2 is a cheap lower bound; it is exact
  // enough to flag the near-singular Gram matrices we care about.
  const Vector d = llt_.matrixL().toDenseMatrix().diagonal();
  const double lo = d.minCoeff();
  const double hi = d.maxCoeff();
  if (!(lo > 0.0) || (hi / lo) * (hi / lo) > kMaxCondition) {
    throw RankDeficiency("SpdFactor: matrix numerically singular");
  }
}

Matrix SpdFactor::solve(const Matrix& b) const { return llt_.solve(b); }

Matrix SpdFactor::solve_right(const Matrix& b) const {
  // B A^{-1} = (A^{-1} B^T)^T since A is symmetric.
  return llt_.solve(b.transpose()).transpose();
}

Matrix solve_small_spd(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw InvalidInput("solve_small_spd: shape mismatch");
  require_finite(b, "solve_small_spd");
  return SpdFactor(a).solve(b);
}

double GaussianStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

Matrix random_gaussian(int rows, int cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw InvalidInput("random_gaussian: empty shape");
  GaussianStream g(seed);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = g.next();
  }
  return m;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace icopt
