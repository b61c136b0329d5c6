#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "icopt/objectives.hpp"

namespace icopt {

struct TrustRegionConfig {
  int max_iterations = 100;
  double grad_norm_tol = 1e-6;
  double delta0 = 1.0;
  double delta_max = 1024.0;
  double rho_accept = 0.1;
  // 0 means 2 K r, resolved at solve time.
  int tcg_max_inner = 0;
  double tcg_kappa = 0.1;
  double tcg_theta = 1.0;

  void validate() const;  // throws InvalidInput
};

enum class SolveStatus { converged, iteration_limit, step_failure, numerical_failure };

std::string_view to_string(SolveStatus s);

struct SolveResult {
  FactorPoint point;
  double value;
  double grad_norm;
  int iterations;
  SolveStatus status;
};

struct IterationRecord {
  int iteration;
  double value;
  double grad_norm;
  double delta;
  double ratio;
  int inner_iterations;
  bool accepted;
};

using TraceSink = std::function<void(const IterationRecord&)>;

// Linear operator on the horizontal space at a fixed base point.
using HessianOperator = std::function<TangentVector(const TangentVector&)>;

struct TcgResult {
  TangentVector step;
  TangentVector hess_step;  // H[step], used for the model value
  bool hit_boundary = false;
  int inner_iterations = 0;
};

// Steihaug-Toint truncated CG on the horizontal space in the metric at x.
// Returns a step with metric norm <= delta; throws NumericalFailure if the
// Hessian returns non-finite values.
TcgResult tcg_subproblem(const FactorPoint& x, const TangentVector& rgrad,
                         const HessianOperator& hess, double delta,
                         const TrustRegionConfig& cfg);

// Quadratic model decrease m(0) - m(step).
double model_decrease(const FactorPoint& x, const TangentVector& rgrad,
                      const TcgResult& tcg);

// Riemannian trust-region minimization of `cost` starting at x0.
SolveResult tr_solve(const CostFunctions& cost, const FactorPoint& x0,
                     const TrustRegionConfig& cfg, const TraceSink& trace = {});

// Variant taking raw factors. A rank-deficient start is perturbed once by
// 1e-8-scaled Gaussian noise drawn from `seed`; if that still fails the
// RankDeficiency propagates.
SolveResult tr_solve(const CostFunctions& cost, const Matrix& u0, const Matrix& v0,
                     const TrustRegionConfig& cfg, std::uint64_t seed,
                     const TraceSink& trace = {});

}  // namespace icopt
