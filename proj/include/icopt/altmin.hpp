#pragma once

#include <cstdint>
#include <vector>

#include "icopt/solution.hpp"

namespace icopt {

struct AltMinConfig {
  int max_outer = 50;
  double zero_tol = 1e-6;
  std::uint64_t seed = 7;
  double stall_tol = 1e-8;
  // Independent starts per rank; the best solution is kept.
  int restarts = 10;

  void validate() const;
};

struct RowLpResult {
  Vector u;
  double objective;  // ||V u||_1
};

// minimize ||V u||_1 subject to anchor^T u = 1, solved exactly by simplex.
// Ties are broken toward minimum ||u||_1. Throws InfeasibleRow if the anchor
// is zero.
RowLpResult lp_row_subproblem(const Matrix& v, const Vector& anchor);

// ||U V^T||_1 after every half-step (the unconstrained start is not recorded).
struct AltMinTrace {
  std::vector<double> objective;
};

// One alternating-minimization run from a Gaussian start drawn from `seed`.
// Retries with fresh seeds (up to 10) when a row LP is infeasible.
IndexCodingSolution altmin_run(int k, int r, const AltMinConfig& cfg, std::uint64_t seed,
                               AltMinTrace* trace = nullptr);

// Best of cfg.restarts runs; restart i uses a seed derived from (cfg.seed, r, i).
IndexCodingSolution altmin_solve(int k, int r, const AltMinConfig& cfg);

}  // namespace icopt
