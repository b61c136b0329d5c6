#include "icopt/altmin.hpp"

#include <cmath>
#include <limits>

#include "icopt/errors.hpp"
#include "icopt/simplex.hpp"

namespace icopt {

namespace {

constexpr int kInfeasibleRetries = 10;

double l1(const Matrix& u, const Matrix& v) { return (u * v.transpose()).cwiseAbs().sum(); }

// Rows of `target` minimize sum_i ||fixed * target_i||_1 with
// fixed_i . target_i = 1.
void half_step(Matrix& target, const Matrix& fixed) {
  for (Eigen::Index i = 0; i < target.rows(); ++i) {
    target.row(i) = lp_row_subproblem(fixed, fixed.row(i).transpose()).u.transpose();
  }
}

}  // namespace

void AltMinConfig::validate() const {
  if (max_outer < 1 || restarts < 1 || !(zero_tol > 0) || !(stall_tol > 0)) {
    throw InvalidInput("AltMinConfig: counts must be >= 1 and tolerances > 0");
  }
}

RowLpResult lp_row_subproblem(const Matrix& v, const Vector& anchor) {
  const Eigen::Index k = v.rows();
  const Eigen::Index r = v.cols();
  if (anchor.size() != r) throw InvalidInput("lp_row_subproblem: anchor length != r");
  require_finite(v, "lp_row_subproblem V");
  if (!(anchor.cwiseAbs().maxCoeff() > 0.0)) {
    throw InfeasibleRow("lp_row_subproblem: zero anchor");
  }
  // Variables [u+ (r), u- (r), p (K), q (K)], all >= 0, with
  //   V u+ - V u- - p + q = 0,   anchor^T (u+ - u-) = 1,
  // minimizing sum(p + q) = ||V u||_1.
  const Eigen::Index n = 2 * r + 2 * k;
  Matrix a = Matrix::Zero(k + 1, n);
  a.block(0, 0, k, r) = v;
  a.block(0, r, k, r) = -v;
  a.block(0, 2 * r, k, k) = -Matrix::Identity(k, k);
  a.block(0, 2 * r + k, k, k) = Matrix::Identity(k, k);
  a.block(k, 0, 1, r) = anchor.transpose();
  a.block(k, r, 1, r) = -anchor.transpose();
  Vector b = Vector::Zero(k + 1);
  b(k) = 1.0;
  Vector c = Vector::Zero(n);
  c.tail(2 * k).setOnes();
  Vector tie = Vector::Zero(n);
  tie.head(2 * r).setOnes();

  const LpSolution lp = solve_standard_lp(a, b, c, tie);
  Vector u = lp.x.head(r) - lp.x.segment(r, r);
  // Restore the equality constraint to rounding level.
  u /= anchor.dot(u);
  return {u, (v * u).cwiseAbs().sum()};
}

IndexCodingSolution altmin_run(int k, int r, const AltMinConfig& cfg, std::uint64_t seed,
                               AltMinTrace* trace) {
  if (k < 1 || r < 1 || r > k) throw InvalidInput("altmin: need 1 <= r <= K");
  cfg.validate();
  const double scale = 1.0 / std::sqrt(static_cast<double>(r));
  for (int attempt = 0; attempt <= kInfeasibleRetries; ++attempt) {
    const std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(attempt) * 2);
    Matrix u = scale * random_gaussian(k, r, s);
    Matrix v = scale * random_gaussian(k, r, mix_seed(s, 1));
    // The random start violates the unit diagonal, so the trace begins after
    // the first half-step, from which point every iterate is feasible.
    if (trace) trace->objective.clear();
    try {
      double prev = std::numeric_limits<double>::infinity();
      for (int outer = 0; outer < cfg.max_outer; ++outer) {
        half_step(u, v);
        if (trace) trace->objective.push_back(l1(u, v));
        half_step(v, u);
        const double cur = l1(u, v);
        if (trace) trace->objective.push_back(cur);
        if (std::abs(prev - cur) < cfg.stall_tol * std::max(1.0, std::abs(cur))) break;
        prev = cur;
      }
    } catch (const InfeasibleRow&) {
      continue;
    }
    return finalize_solution(std::move(u), std::move(v), SparsityPattern::full(k),
                             cfg.zero_tol, SolverTag::altmin);
  }
  IndexCodingSolution failed;
  failed.x = Matrix::Zero(k, k);
  failed.u = Matrix::Zero(k, r);
  failed.v = Matrix::Zero(k, r);
  failed.pattern = SparsityPattern::full(k);
  failed.rank = r;
  failed.side_info_amount = k * k - k;
  failed.feasible = false;
  failed.solver = SolverTag::altmin;
  failed.residual = std::numeric_limits<double>::infinity();
  return failed;
}

IndexCodingSolution altmin_solve(int k, int r, const AltMinConfig& cfg) {
  if (k < 1 || r < 1 || r > k) throw InvalidInput("altmin: need 1 <= r <= K");
  cfg.validate();
  const std::uint64_t rank_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(r));
  IndexCodingSolution best;
  for (int i = 0; i < cfg.restarts; ++i) {
    IndexCodingSolution sol =
        altmin_run(k, r, cfg, mix_seed(rank_seed, static_cast<std::uint64_t>(i)));
    sol.restart = i;
    if (i == 0 || better_solution(sol, best)) best = std::move(sol);
  }
  return best;
}

}  // namespace icopt
