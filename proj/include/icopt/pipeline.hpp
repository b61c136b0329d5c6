#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "icopt/altmin.hpp"
#include "icopt/solution.hpp"
#include "icopt/trust_region.hpp"

namespace icopt {

struct PipelineConfig {
  double rho = 1e-3;
  double eps = 1e-2;
  int restarts = 10;
  std::uint64_t seed = 7;
  TrustRegionConfig tr;
  double feasibility_tol = 1e-6;
  // Gradient tolerance for the completion stage. Tighter than tr.grad_norm_tol
  // so that entries at pattern zeros end up far below feasibility_tol.
  double refine_grad_tol = 1e-12;
  // Worker threads for sweeps; results do not depend on it.
  int threads = 1;
  // Optional per-iteration records, tagged with rank, restart and stage (1 or
  // 2). Invoked from worker threads when threads > 1.
  std::function<void(int rank, int restart, int stage, const IterationRecord&)> trace;

  void validate() const;
};

struct PatternResult {
  FactorPoint point;
  SparsityPattern pattern;
  SolveResult stage;
};

// Gaussian factors scaled by 1/sqrt(r), with rows of U sign-flipped so that
// diag(U V^T) >= 0. At r = K the first column of V is then negated if needed
// to make det(U V^T) > 0, which may undo some of the diagonal signs.
void initial_factors(int k, int r, std::uint64_t seed, Matrix& u0, Matrix& v0);

// Stage 1: trust-region on the regularized cost from a seeded Gaussian start,
// then threshold |X_ij| > eps.
PatternResult find_pattern(int k, int r, const PipelineConfig& cfg, std::uint64_t seed,
                           const TraceSink& trace = {});

// Stage 2: rank-r completion of `pattern` from `warm_start`, diagonal repair
// and feasibility verdict.
IndexCodingSolution refine(const SparsityPattern& pattern, const FactorPoint& warm_start,
                           const PipelineConfig& cfg, const TraceSink& trace = {});

// Seed used by restart `restart` at rank r.
std::uint64_t restart_seed(std::uint64_t seed, int r, int restart);

// Best (feasible, sparsest, earliest) of cfg.restarts find_pattern -> refine runs.
IndexCodingSolution solve_one(int k, int r, const PipelineConfig& cfg);

struct CurveEntry {
  int rank;
  int side_info_amount;
  bool feasible;
  SolverTag solver;
  // min over r' <= r of feasible side_info_amount; -1 until a feasible rank.
  int envelope;
  double seconds;
  bool failed = false;  // every restart failed numerically
};

struct TradeoffCurve {
  std::vector<CurveEntry> entries;
  std::vector<IndexCodingSolution> solutions;
};

using RankSolver = std::function<IndexCodingSolution(int rank)>;

// Runs `solve` for each rank (possibly on `threads` workers) and assembles the
// curve in rank order with its lower envelope.
TradeoffCurve sweep_ranks(const std::vector<int>& ranks, const RankSolver& solve,
                          SolverTag tag, int threads);

TradeoffCurve sweep(int k, const PipelineConfig& cfg);
TradeoffCurve sweep_altmin(int k, const AltMinConfig& cfg, int threads = 1);

}  // namespace icopt
