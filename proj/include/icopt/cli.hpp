#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "icopt/index_code.hpp"
#include "icopt/pipeline.hpp"

namespace icopt::cli {

enum class SolverChoice { riemannian, altmin, both };
enum class OutputFormat { csv, json };

struct RunConfig {
  int k = 16;
  std::vector<int> ranks;  // empty means 1..K
  SolverChoice solver = SolverChoice::riemannian;
  std::uint64_t seed = 7;
  PipelineConfig pipeline;
  AltMinConfig altmin;
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  bool verbose = false;

  std::vector<int> resolved_ranks() const;
  void validate() const;  // throws InvalidInput
};

// Parses "a..b" or a single integer.
std::vector<int> parse_rank_range(const std::string& text);

// Applies a JSON config document onto cfg (keys mirror RunConfig).
void apply_config_json(const std::string& text, RunConfig& cfg);

struct SweepResult {
  std::optional<TradeoffCurve> riemannian;
  std::optional<TradeoffCurve> altmin;
};

SweepResult run_sweep(const RunConfig& cfg, std::ostream* log = nullptr);

// Header `rank,sparsity_riemannian,sparsity_altmin,feasible_riemannian,
// feasible_altmin,envelope_riemannian`; columns of absent solvers omitted.
std::string sweep_csv(const SweepResult& result);
std::string sweep_json(const SweepResult& result);
std::string sweep_manifest(const RunConfig& cfg, const SweepResult& result);

std::string solution_json(const IndexCodingSolution& sol);

struct VerifyReport {
  bool passed = false;
  AlignmentVerdict alignment;
  int numerical_rank = 0;
  int declared_rank = 0;
  double decode_error = 0.0;
  std::string text;
};

struct VerifyOptions {
  double tol = 1e-6;
  double decode_tol = 1e-8;
  int trials = 1000;
  std::uint64_t seed = 7;
  std::optional<std::string> side_info_json;
};

// Throws InvalidInput when the document cannot be parsed.
VerifyReport verify_solution_json(const std::string& text, const VerifyOptions& opts);

// Entry point for the `icopt` executable. Exit codes: 0 success,
// 1 verification failure, 2 usage or I/O error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace icopt::cli
