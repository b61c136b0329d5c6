#include "icopt/trust_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "icopt/errors.hpp"

namespace icopt {

namespace {

constexpr int kMaxHalvings = 10;

HessianOperator make_hessian(const CostFunctions& cost, const FactorPoint& x,
                             const TangentVector& egrad) {
  return [&cost, &x, egrad](const TangentVector& xi) {
    return rhess_apply(x, xi, egrad, cost.egrad_directional(x, xi));
  };
}

}  // namespace

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iteration_limit: return "iteration-limit";
    case SolveStatus::step_failure: return "step-failure";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

void TrustRegionConfig::validate() const {
  if (max_iterations < 1 || !(grad_norm_tol > 0) || !(delta0 > 0) || !(delta_max > 0) ||
      tcg_max_inner < 0 || !(tcg_kappa > 0) || !(tcg_theta > 0)) {
    throw InvalidInput("TrustRegionConfig: parameters must be positive");
  }
  if (!(rho_accept > 0 && rho_accept < 1)) {
    throw InvalidInput("TrustRegionConfig: rho_accept must lie in (0, 1)");
  }
  if (delta0 > delta_max) throw InvalidInput("TrustRegionConfig: delta0 > delta_max");
}

TcgResult tcg_subproblem(const FactorPoint& x, const TangentVector& rgrad,
                         const HessianOperator& hess, double delta,
                         const TrustRegionConfig& cfg) {
  if (!(delta > 0)) throw InvalidInput("tcg_subproblem: delta must be > 0");
  const int k = x.dim();
  const int r = x.rank();
  const int max_inner = cfg.tcg_max_inner > 0 ? cfg.tcg_max_inner : 2 * k * r;

  TcgResult out{TangentVector::zero(k, r), TangentVector::zero(k, r), false, 0};

  TangentVector res = rgrad;
  double r_r = metric(x, res, res);
  const double norm_r0 = std::sqrt(r_r);
  if (norm_r0 == 0.0) return out;
  const double stop = norm_r0 * std::min(std::pow(norm_r0, cfg.tcg_theta), cfg.tcg_kappa);

  TangentVector dir = -1.0 * res;
  double e_e = 0.0;   // <step, step>
  double e_d = 0.0;   // <step, dir>
  double d_d = r_r;   // <dir, dir>

  for (int j = 0; j < max_inner; ++j) {
    const TangentVector hdir = hess(dir);
    if (!hdir.all_finite()) throw NumericalFailure("tcg_subproblem: non-finite Hessian");
    out.inner_iterations = j + 1;
    const double d_hd = metric(x, dir, hdir);
    const double alpha = r_r / d_hd;
    const double e_e_new = e_e + 2.0 * alpha * e_d + alpha * alpha * d_d;

    if (d_hd <= 0.0 || e_e_new >= delta * delta) {
      // Move to the boundary along dir: ||step + tau dir|| = delta.
      const double tau =
          (-e_d + std::sqrt(std::max(0.0, e_d * e_d + d_d * (delta * delta - e_e)))) / d_d;
      out.step += tau * dir;
      out.hess_step += tau * hdir;
      out.hit_boundary = true;
      break;
    }

    e_e = e_e_new;
    out.step += alpha * dir;
    out.hess_step += alpha * hdir;
    res += alpha * hdir;
    // Keep the residual on the horizontal space.
    res = project_horizontal(x, res);
    const double r_r_new = metric(x, res, res);
    if (std::sqrt(r_r_new) <= stop) break;

    const double beta = r_r_new / r_r;
    dir = beta * dir - res;
    dir = project_horizontal(x, dir);
    e_d = beta * (e_d + alpha * d_d);
    d_d = r_r_new + beta * beta * d_d;
    r_r = r_r_new;
  }
  return out;
}

double model_decrease(const FactorPoint& x, const TangentVector& rgrad,
                      const TcgResult& tcg) {
  return -(metric(x, rgrad, tcg.step) + 0.5 * metric(x, tcg.hess_step, tcg.step));
}

SolveResult tr_solve(const CostFunctions& cost, const FactorPoint& x0,
                     const TrustRegionConfig& cfg, const TraceSink& trace) {
  cfg.validate();
  FactorPoint x = x0;
  double fx = cost.value(x);
  if (!std::isfinite(fx)) {
    return {x, fx, std::numeric_limits<double>::infinity(), 0,
            SolveStatus::numerical_failure};
  }
  TangentVector egrad = cost.egrad(x);
  TangentVector rgrad = egrad_to_rgrad(x, egrad);
  double gnorm = metric_norm(x, rgrad);
  double delta = cfg.delta0;

  int iter = 0;
  for (;;) {
    if (!std::isfinite(gnorm)) {
      return {x, fx, gnorm, iter, SolveStatus::numerical_failure};
    }
    if (gnorm <= cfg.grad_norm_tol) return {x, fx, gnorm, iter, SolveStatus::converged};
    if (iter >= cfg.max_iterations) {
      return {x, fx, gnorm, iter, SolveStatus::iteration_limit};
    }
    ++iter;

    TcgResult tcg;
    try {
      tcg = tcg_subproblem(x, rgrad, make_hessian(cost, x, egrad), delta, cfg);
    } catch (const NumericalFailure&) {
      return {x, fx, gnorm, iter, SolveStatus::numerical_failure};
    }

    std::optional<FactorPoint> candidate;
    for (int h = 0; h <= kMaxHalvings && !candidate; ++h) {
      try {
        candidate.emplace(retract(x, tcg.step));
      } catch (const RetractionFailure&) {
        if (h == kMaxHalvings) break;
        tcg.step *= 0.5;
        tcg.hess_step *= 0.5;
        tcg.hit_boundary = false;
      }
    }
    if (!candidate) return {x, fx, gnorm, iter, SolveStatus::step_failure};

    const double f_new = cost.value(*candidate);
    if (!std::isfinite(f_new)) {
      return {x, fx, gnorm, iter, SolveStatus::numerical_failure};
    }
    // Guard the ratio against round-off once f is at machine-precision level.
    const double reg = std::max(1.0, std::abs(fx)) * std::numeric_limits<double>::epsilon() * 1e3;
    const double ratio = (fx - f_new + reg) / (model_decrease(x, rgrad, tcg) + reg);

    if (ratio < 0.25) {
      delta *= 0.25;
    } else if (ratio > 0.75 && tcg.hit_boundary) {
      delta = std::min(2.0 * delta, cfg.delta_max);
    }

    const bool accepted = ratio > cfg.rho_accept && f_new <= fx;
    if (accepted) {
      x = std::move(*candidate);
      fx = f_new;
      egrad = cost.egrad(x);
      rgrad = egrad_to_rgrad(x, egrad);
      gnorm = metric_norm(x, rgrad);
    }
    if (trace) trace({iter, fx, gnorm, delta, ratio, tcg.inner_iterations, accepted});

    // A radius this small cannot move the iterate any more.
    if (delta < 1e-14 * std::max(1.0, std::sqrt(metric(x, TangentVector{x.u(), x.v()},
                                                        TangentVector{x.u(), x.v()})))) {
      return {x, fx, gnorm, iter, SolveStatus::step_failure};
    }
  }
}

SolveResult tr_solve(const CostFunctions& cost, const Matrix& u0, const Matrix& v0,
                     const TrustRegionConfig& cfg, std::uint64_t seed,
                     const TraceSink& trace) {
  std::optional<FactorPoint> x0;
  try {
    x0.emplace(u0, v0);
  } catch (const RankDeficiency&) {
    const Matrix du = 1e-8 * random_gaussian(static_cast<int>(u0.rows()),
                                             static_cast<int>(u0.cols()), seed);
    const Matrix dv = 1e-8 * random_gaussian(static_cast<int>(v0.rows()),
                                             static_cast<int>(v0.cols()), mix_seed(seed, 1));
    x0.emplace(u0 + du, v0 + dv);
  }
  return tr_solve(cost, *x0, cfg, trace);
}

}  // namespace icopt
