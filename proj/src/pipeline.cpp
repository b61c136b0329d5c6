#include "icopt/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <thread>

#include "icopt/errors.hpp"

namespace icopt {

void PipelineConfig::validate() const {
  if (restarts < 1 || threads < 1) throw InvalidInput("PipelineConfig: counts must be >= 1");
  if (!(rho >= 0) || !(eps > 0) || !(feasibility_tol > 0) || !(refine_grad_tol > 0)) {
    throw InvalidInput("PipelineConfig: rho >= 0 and tolerances > 0 required");
  }
  tr.validate();
}

std::uint64_t restart_seed(std::uint64_t seed, int r, int restart) {
  return mix_seed(mix_seed(seed, static_cast<std::uint64_t>(r)),
                  static_cast<std::uint64_t>(restart));
}

void initial_factors(int k, int r, std::uint64_t seed, Matrix& u0, Matrix& v0) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(r));
  u0 = scale * random_gaussian(k, r, seed);
  v0 = scale * random_gaussian(k, r, mix_seed(seed, 1));
  // Start with diag(X0) >= 0: a diagonal entry that has to pass through zero
  // drags X towards singularity, where the fixed-rank iterate stalls.
  const Vector d = (u0.array() * v0.array()).rowwise().sum();
  for (int i = 0; i < k; ++i) {
    if (d(i) < 0) u0.row(i) *= -1.0;
  }
  // At full rank the sign of det X is fixed along any path on the manifold,
  // and the unit-diagonal optimum I has det > 0.
  if (r == k && u0.determinant() * v0.determinant() < 0) v0.col(0) *= -1.0;
}

PatternResult find_pattern(int k, int r, const PipelineConfig& cfg, std::uint64_t seed,
                           const TraceSink& trace) {
  if (k < 1 || r < 1 || r > k) throw InvalidInput("find_pattern: need 1 <= r <= K");
  cfg.validate();
  Matrix u0;
  Matrix v0;
  initial_factors(k, r, seed, u0, v0);
  const RegularizedObjective obj(k, cfg.rho, cfg.eps);
  SolveResult res = tr_solve(make_cost(obj), u0, v0, cfg.tr, mix_seed(seed, 2), trace);
  if (res.status == SolveStatus::numerical_failure) {
    throw NumericalFailure("find_pattern: regularized solve failed");
  }
  SparsityPattern p = extract_pattern(res.point.product(), cfg.eps);
  return {res.point, std::move(p), std::move(res)};
}

IndexCodingSolution refine(const SparsityPattern& pattern, const FactorPoint& warm_start,
                           const PipelineConfig& cfg, const TraceSink& trace) {
  if (pattern.dim() != warm_start.dim()) throw InvalidInput("refine: dimension mismatch");
  TrustRegionConfig tr = cfg.tr;
  tr.grad_norm_tol = std::min(tr.grad_norm_tol, cfg.refine_grad_tol);
  const RefinementObjective obj(pattern);
  const SolveResult res = tr_solve(make_cost(obj), warm_start, tr, trace);
  return finalize_solution(res.point.u(), res.point.v(), pattern, cfg.feasibility_tol,
                           SolverTag::riemannian);
}

IndexCodingSolution solve_one(int k, int r, const PipelineConfig& cfg) {
  if (k < 1 || r < 1 || r > k) throw InvalidInput("solve_one: need 1 <= r <= K");
  cfg.validate();
  std::optional<IndexCodingSolution> best;
  for (int i = 0; i < cfg.restarts; ++i) {
    IndexCodingSolution sol;
    TraceSink t1;
    TraceSink t2;
    if (cfg.trace) {
      t1 = [&cfg, r, i](const IterationRecord& rec) { cfg.trace(r, i, 1, rec); };
      t2 = [&cfg, r, i](const IterationRecord& rec) { cfg.trace(r, i, 2, rec); };
    }
    try {
      const PatternResult stage1 = find_pattern(k, r, cfg, restart_seed(cfg.seed, r, i), t1);
      sol = refine(stage1.pattern, stage1.point, cfg, t2);
    } catch (const NumericalFailure&) {
      continue;
    } catch (const RankDeficiency&) {
      continue;
    }
    sol.restart = i;
    if (!best || better_solution(sol, *best)) best = std::move(sol);
  }
  if (!best) throw PipelineError("solve_one: every restart failed numerically");
  return *best;
}

TradeoffCurve sweep_ranks(const std::vector<int>& ranks, const RankSolver& solve,
                          SolverTag tag, int threads) {
  const std::size_t n = ranks.size();
  std::vector<IndexCodingSolution> sols(n);
  std::vector<double> seconds(n, 0.0);
  std::vector<bool> failed(n, false);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        sols[i] = solve(ranks[i]);
      } catch (const PipelineError&) {
        failed[i] = true;
      }
      seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  TradeoffCurve curve;
  int envelope = -1;
  for (std::size_t i = 0; i < n; ++i) {
    CurveEntry e{ranks[i], 0, false, tag, envelope, seconds[i], failed[i]};
    if (!failed[i]) {
      e.side_info_amount = sols[i].side_info_amount;
      e.feasible = sols[i].feasible;
      if (e.feasible && (envelope < 0 || e.side_info_amount < envelope)) {
        envelope = e.side_info_amount;
      }
    }
    e.envelope = envelope;
    curve.entries.push_back(e);
    curve.solutions.push_back(std::move(sols[i]));
  }
  return curve;
}

namespace {
std::vector<int> all_ranks(int k) {
  std::vector<int> r(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) r[static_cast<std::size_t>(i)] = i + 1;
  return r;
}
}  // namespace

TradeoffCurve sweep(int k, const PipelineConfig& cfg) {
  if (k < 1) throw InvalidInput("sweep: K must be >= 1");
  cfg.validate();
  return sweep_ranks(all_ranks(k), [&](int r) { return solve_one(k, r, cfg); },
                     SolverTag::riemannian, cfg.threads);
}

TradeoffCurve sweep_altmin(int k, const AltMinConfig& cfg, int threads) {
  if (k < 1) throw InvalidInput("sweep: K must be >= 1");
  cfg.validate();
  return sweep_ranks(all_ranks(k), [&](int r) { return altmin_solve(k, r, cfg); },
                     SolverTag::altmin, threads);
}

}  // namespace icopt
