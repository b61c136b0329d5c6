#include "icopt/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "icopt/errors.hpp"
#include "icopt/index_code.hpp"

namespace icopt::cli {

namespace {

using json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string solver_name(SolverChoice s) {
  switch (s) {
    case SolverChoice::riemannian: return "riemannian";
    case SolverChoice::altmin: return "altmin";
    case SolverChoice::both: return "both";
  }
  return "?";
}

SolverChoice parse_solver(const std::string& s) {
  if (s == "riemannian") return SolverChoice::riemannian;
  if (s == "altmin") return SolverChoice::altmin;
  if (s == "both") return SolverChoice::both;
  throw InvalidInput("unknown solver '" + s + "' (riemannian, altmin, both)");
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw InvalidInput("unknown format '" + s + "' (csv, json)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

double round_sig12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

// Config document.

void apply_tr(const json& j, TrustRegionConfig& tr) {
  for (const auto& [key, val] : j.items()) {
    if (key == "max_iterations") tr.max_iterations = val.get<int>();
    else if (key == "grad_norm_tol") tr.grad_norm_tol = val.get<double>();
    else if (key == "delta0") tr.delta0 = val.get<double>();
    else if (key == "delta_max") tr.delta_max = val.get<double>();
    else if (key == "rho_accept") tr.rho_accept = val.get<double>();
    else if (key == "tcg_max_inner") tr.tcg_max_inner = val.get<int>();
    else if (key == "tcg_kappa") tr.tcg_kappa = val.get<double>();
    else if (key == "tcg_theta") tr.tcg_theta = val.get<double>();
    else throw InvalidInput("unknown config key pipeline.tr." + key);
  }
}

void apply_pipeline(const json& j, PipelineConfig& p) {
  for (const auto& [key, val] : j.items()) {
    if (key == "rho") p.rho = val.get<double>();
    else if (key == "eps") p.eps = val.get<double>();
    else if (key == "restarts") p.restarts = val.get<int>();
    else if (key == "feasibility_tol") p.feasibility_tol = val.get<double>();
    else if (key == "refine_grad_tol") p.refine_grad_tol = val.get<double>();
    else if (key == "threads") p.threads = val.get<int>();
    else if (key == "tr") apply_tr(val, p.tr);
    else throw InvalidInput("unknown config key pipeline." + key);
  }
}

void apply_altmin(const json& j, AltMinConfig& a) {
  for (const auto& [key, val] : j.items()) {
    if (key == "max_outer") a.max_outer = val.get<int>();
    else if (key == "zero_tol") a.zero_tol = val.get<double>();
    else if (key == "stall_tol") a.stall_tol = val.get<double>();
    else if (key == "restarts") a.restarts = val.get<int>();
    else throw InvalidInput("unknown config key altmin." + key);
  }
}

json tr_to_json(const TrustRegionConfig& tr) {
  return json{{"max_iterations", tr.max_iterations}, {"grad_norm_tol", tr.grad_norm_tol},
              {"delta0", tr.delta0},                 {"delta_max", tr.delta_max},
              {"rho_accept", tr.rho_accept},         {"tcg_max_inner", tr.tcg_max_inner},
              {"tcg_kappa", tr.tcg_kappa},           {"tcg_theta", tr.tcg_theta}};
}

json config_to_json(const RunConfig& cfg) {
  const PipelineConfig& p = cfg.pipeline;
  const AltMinConfig& a = cfg.altmin;
  return json{{"K", cfg.k},
              {"ranks", cfg.resolved_ranks()},
              {"solver", solver_name(cfg.solver)},
              {"seed", cfg.seed},
              {"pipeline",
               {{"rho", p.rho},
                {"eps", p.eps},
                {"restarts", p.restarts},
                {"feasibility_tol", p.feasibility_tol},
                {"refine_grad_tol", p.refine_grad_tol},
                {"threads", p.threads},
                {"tr", tr_to_json(p.tr)}}},
              {"altmin",
               {{"max_outer", a.max_outer},
                {"zero_tol", a.zero_tol},
                {"stall_tol", a.stall_tol},
                {"restarts", a.restarts}}},
              {"output_path", cfg.output_path},
              {"format", cfg.format == OutputFormat::csv ? "csv" : "json"}};
}

// Sweep tables.

struct Row {
  int rank;
  const CurveEntry* riem;
  const CurveEntry* alt;
};

std::vector<Row> rows_of(const SweepResult& r) {
  const TradeoffCurve* base = r.riemannian ? &*r.riemannian : r.altmin ? &*r.altmin : nullptr;
  std::vector<Row> rows;
  if (!base) return rows;
  for (std::size_t i = 0; i < base->entries.size(); ++i) {
    rows.push_back({base->entries[i].rank,
                    r.riemannian ? &r.riemannian->entries[i] : nullptr,
                    r.altmin ? &r.altmin->entries[i] : nullptr});
  }
  return rows;
}

std::string entry_status(const CurveEntry& e) {
  if (e.failed) return "failed";
  return e.feasible ? "feasible" : "infeasible";
}

}  // namespace

std::vector<int> RunConfig::resolved_ranks() const {
  if (!ranks.empty()) return ranks;
  std::vector<int> r;
  for (int i = 1; i <= k; ++i) r.push_back(i);
  return r;
}

void RunConfig::validate() const {
  if (k < 1) throw InvalidInput("K must be >= 1");
  for (int r : ranks) {
    if (r < 1 || r > k) throw InvalidInput("ranks must lie in 1..K");
  }
  pipeline.validate();
  altmin.validate();
}

std::vector<int> parse_rank_range(const std::string& text) {
  const auto parse_int = [&](const std::string& s) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s, &pos);
    } catch (const std::exception&) {
      throw InvalidInput("bad rank range '" + text + "'");
    }
    if (pos != s.size()) throw InvalidInput("bad rank range '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  int a = 0;
  int b = 0;
  if (dots == std::string::npos) {
    a = b = parse_int(text);
  } else {
    a = parse_int(text.substr(0, dots));
    b = parse_int(text.substr(dots + 2));
  }
  if (a < 1 || b < a) throw InvalidInput("bad rank range '" + text + "'");
  std::vector<int> out;
  for (int r = a; r <= b; ++r) out.push_back(r);
  return out;
}

void apply_config_json(const std::string& text, RunConfig& cfg) {
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw InvalidInput("config must be a JSON object");
    for (const auto& [key, val] : j.items()) {
      if (key == "K") {
        cfg.k = val.get<int>();
      } else if (key == "ranks") {
        cfg.ranks = val.is_string() ? parse_rank_range(val.get<std::string>())
                                    : val.get<std::vector<int>>();
      } else if (key == "solver") {
        cfg.solver = parse_solver(val.get<std::string>());
      } else if (key == "seed") {
        cfg.seed = val.get<std::uint64_t>();
      } else if (key == "pipeline") {
        apply_pipeline(val, cfg.pipeline);
      } else if (key == "altmin") {
        apply_altmin(val, cfg.altmin);
      } else if (key == "output_path") {
        cfg.output_path = val.get<std::string>();
      } else if (key == "format") {
        cfg.format = parse_format(val.get<std::string>());
      } else if (key == "verbose") {
        cfg.verbose = val.get<bool>();
      } else {
        throw InvalidInput("unknown config key " + key);
      }
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

SweepResult run_sweep(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const std::vector<int> ranks = cfg.resolved_ranks();
  PipelineConfig pc = cfg.pipeline;
  pc.seed = cfg.seed;
  AltMinConfig ac = cfg.altmin;
  ac.seed = cfg.seed;

  std::mutex log_mu;
  if (log && cfg.verbose) {
    pc.trace = [log, &log_mu](int rank, int restart, int stage, const IterationRecord& rec) {
      const json j{{"rank", rank},         {"restart", restart},
                   {"stage", stage},       {"iteration", rec.iteration},
                   {"value", rec.value},   {"grad_norm", rec.grad_norm},
                   {"delta", rec.delta},   {"ratio", rec.ratio},
                   {"inner", rec.inner_iterations}, {"accepted", rec.accepted}};
      const std::lock_guard lock(log_mu);
      *log << j.dump() << '\n';
    };
  }

  SweepResult out;
  const int k = cfg.k;
  if (cfg.solver != SolverChoice::altmin) {
    out.riemannian = sweep_ranks(ranks, [&](int r) { return solve_one(k, r, pc); },
                                 SolverTag::riemannian, pc.threads);
  }
  if (cfg.solver != SolverChoice::riemannian) {
    out.altmin = sweep_ranks(ranks, [&](int r) { return altmin_solve(k, r, ac); },
                             SolverTag::altmin, pc.threads);
  }
  if (log && cfg.verbose) {
    for (const Row& row : rows_of(out)) {
      *log << "rank " << row.rank;
      if (row.riem) {
        *log << " riemannian s=" << row.riem->side_info_amount << ' ' << entry_status(*row.riem)
             << ' ' << row.riem->seconds << 's';
      }
      if (row.alt) {
        *log << " altmin s=" << row.alt->side_info_amount << ' ' << entry_status(*row.alt) << ' '
             << row.alt->seconds << 's';
      }
      *log << '\n';
    }
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  const bool r = result.riemannian.has_value();
  const bool a = result.altmin.has_value();
  os << "rank";
  if (r) os << ",sparsity_riemannian";
  if (a) os << ",sparsity_altmin";
  if (r) os << ",feasible_riemannian";
  if (a) os << ",feasible_altmin";
  if (r) os << ",envelope_riemannian";
  os << '\n';
  const auto sparsity = [](const CurveEntry& e) {
    return e.failed ? std::string() : std::to_string(e.side_info_amount);
  };
  for (const Row& row : rows_of(result)) {
    os << row.rank;
    if (r) os << ',' << sparsity(*row.riem);
    if (a) os << ',' << sparsity(*row.alt);
    if (r) os << ',' << (row.riem->feasible ? "true" : "false");
    if (a) os << ',' << (row.alt->feasible ? "true" : "false");
    if (r) {
      os << ',';
      if (row.riem->envelope >= 0) os << row.riem->envelope;
    }
    os << '\n';
  }
  return os.str();
}

std::string sweep_json(const SweepResult& result) {
  json rows = json::array();
  const auto sparsity = [](const CurveEntry& e) {
    return e.failed ? json(nullptr) : json(e.side_info_amount);
  };
  for (const Row& row : rows_of(result)) {
    json j{{"rank", row.rank}};
    if (row.riem) j["sparsity_riemannian"] = sparsity(*row.riem);
    if (row.alt) j["sparsity_altmin"] = sparsity(*row.alt);
    if (row.riem) j["feasible_riemannian"] = row.riem->feasible;
    if (row.alt) j["feasible_altmin"] = row.alt->feasible;
    if (row.riem) {
      j["envelope_riemannian"] = row.riem->envelope >= 0 ? json(row.riem->envelope) : json(nullptr);
    }
    rows.push_back(std::move(j));
  }
  return json{{"rows", std::move(rows)}}.dump(2) + "\n";
}

std::string sweep_manifest(const RunConfig& cfg, const SweepResult& result) {
  json per_rank = json::array();
  double total_riem = 0.0;
  double total_alt = 0.0;
  const auto describe = [](const CurveEntry& e, const IndexCodingSolution& sol) {
    json j{{"status", entry_status(e)}, {"seconds", e.seconds}};
    if (!e.failed) {
      j["side_info_amount"] = e.side_info_amount;
      j["residual"] = sol.residual;
      j["best_restart"] = sol.restart;
    }
    return j;
  };
  const std::vector<Row> rows = rows_of(result);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    json j{{"rank", row.rank}};
    const int restarts = std::max(row.riem ? cfg.pipeline.restarts : 0,
                                  row.alt ? cfg.altmin.restarts : 0);
    json seeds = json::array();
    for (int s = 0; s < restarts; ++s) seeds.push_back(restart_seed(cfg.seed, row.rank, s));
    j["restart_seeds"] = std::move(seeds);
    if (row.riem) {
      j["riemannian"] = describe(*row.riem, result.riemannian->solutions[i]);
      total_riem += row.riem->seconds;
    }
    if (row.alt) {
      j["altmin"] = describe(*row.alt, result.altmin->solutions[i]);
      total_alt += row.alt->seconds;
    }
    per_rank.push_back(std::move(j));
  }
  json totals = json::object();
  if (result.riemannian) totals["riemannian"] = total_riem;
  if (result.altmin) totals["altmin"] = total_alt;
  const json m{{"config", config_to_json(cfg)},
               {"seed", cfg.seed},
               {"ranks", std::move(per_rank)},
               {"total_seconds", std::move(totals)}};
  return m.dump(2) + "\n";
}

std::string solution_json(const IndexCodingSolution& sol) {
  const int k = static_cast<int>(sol.x.rows());
  json x = json::array();
  json pattern = json::array();
  for (int i = 0; i < k; ++i) {
    json xr = json::array();
    json pr = json::array();
    for (int j = 0; j < k; ++j) {
      xr.push_back(round_sig12(sol.x(i, j)));
      pr.push_back(sol.pattern.at(i, j) ? 1 : 0);
    }
    x.push_back(std::move(xr));
    pattern.push_back(std::move(pr));
  }
  json sets = json::array();
  const SideInformation side = pattern_to_side_info(sol.pattern);
  for (const auto& s : side.sets()) {
    json row = json::array();
    for (int j : s) row.push_back(j + 1);
    sets.push_back(std::move(row));
  }
  const Rate rate = achievable_rate(sol.rank, k);
  const json j{{"K", k},
               {"rank", sol.rank},
               {"side_info_amount", sol.side_info_amount},
               {"feasible", sol.feasible},
               {"X", std::move(x)},
               {"pattern", std::move(pattern)},
               {"side_info_sets", std::move(sets)},
               {"sum_rate", rate.sum},
               {"per_user_rate", rate.per_user},
               {"solver", std::string(to_string(sol.solver))},
               {"residual", sol.residual}};
  return j.dump(2) + "\n";
}

VerifyReport verify_solution_json(const std::string& text, const VerifyOptions& opts) {
  int k = 0;
  int declared_rank = 0;
  Matrix x;
  std::optional<SideInformation> side;
  std::optional<int> declared_amount;
  try {
    const json j = json::parse(text);
    k = j.at("K").get<int>();
    declared_rank = j.at("rank").get<int>();
    if (k < 1 || declared_rank < 1 || declared_rank > k) {
      throw InvalidInput("solution: need K >= 1 and 1 <= rank <= K");
    }
    const json& xs = j.at("X");
    if (!xs.is_array() || static_cast<int>(xs.size()) != k) {
      throw InvalidInput("solution: X must have K rows");
    }
    x.resize(k, k);
    for (int i = 0; i < k; ++i) {
      const json& row = xs[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != k) {
        throw InvalidInput("solution: X must be K x K");
      }
      for (int c = 0; c < k; ++c) x(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    // The declared amount describes the solution's own sets; an external
    // side-information file may offer more than the code uses.
    if (!opts.side_info_json && j.contains("side_info_amount") &&
        j["side_info_amount"].is_number_integer()) {
      declared_amount = j["side_info_amount"].get<int>();
    }
    if (opts.side_info_json) {
      side = SideInformation::from_json(*opts.side_info_json);
    } else if (j.contains("side_info_sets")) {
      side = SideInformation::from_json(json{{"K", k}, {"sets", j["side_info_sets"]}}.dump());
    } else if (j.contains("pattern")) {
      const auto rows = j["pattern"].get<std::vector<std::vector<int>>>();
      if (static_cast<int>(rows.size()) != k) throw InvalidInput("solution: pattern must be K x K");
      SparsityPattern p(k);
      for (int i = 0; i < k; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != k) {
          throw InvalidInput("solution: pattern must be K x K");
        }
        for (int c = 0; c < k; ++c) {
          if (i != c) p.set(i, c, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0);
        }
      }
      side = pattern_to_side_info(p);
    } else {
      throw InvalidInput("solution: needs side_info_sets or pattern");
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("solution: ") + e.what());
  }
  require_finite(x, "solution X");
  if (side->dim() != k) throw InvalidInput("side information has the wrong K");

  VerifyReport rep;
  rep.declared_rank = declared_rank;
  rep.alignment = verify_alignment(x, side_info_to_pattern(*side), opts.tol);
  rep.numerical_rank = numerical_rank(x);
  const bool rank_ok = rep.numerical_rank >= 1 && rep.numerical_rank <= declared_rank;
  bool decode_ok = false;
  std::string decode_note;
  if (rep.numerical_rank >= 1) {
    try {
      rep.decode_error = decode_simulation(code_from_matrix(x, rep.numerical_rank), *side,
                                           opts.trials, opts.seed);
      decode_ok = rep.decode_error <= opts.decode_tol;
    } catch (const InvalidInput& e) {
      rep.decode_error = std::numeric_limits<double>::infinity();
      decode_note = std::string(" (") + e.what() + ")";
    }
  } else {
    rep.decode_error = std::numeric_limits<double>::infinity();
    decode_note = " (zero matrix)";
  }
  const bool amount_ok = !declared_amount || *declared_amount == side->amount();
  rep.passed = rep.alignment.passed && rank_ok && decode_ok && amount_ok;

  std::ostringstream os;
  os.precision(6);
  os << std::scientific;
  os << "alignment: " << (rep.alignment.passed ? "PASS" : "FAIL")
     << " max_residual=" << rep.alignment.max_residual;
  if (rep.alignment.row >= 0) {
    os << " at (" << rep.alignment.row + 1 << "," << rep.alignment.col + 1 << ")";
  }
  os << " tol=" << opts.tol << '\n';
  os << "rank: " << (rank_ok ? "PASS" : "FAIL") << " numerical_rank=" << rep.numerical_rank
     << " declared=" << declared_rank << '\n';
  os << "decode: " << (decode_ok ? "PASS" : "FAIL") << " max_rel_error=" << rep.decode_error
     << " trials=" << opts.trials << decode_note << '\n';
  if (declared_amount) {
    os << "side_info_amount: " << (amount_ok ? "PASS" : "FAIL") << " declared=" << *declared_amount
       << " actual=" << side->amount() << '\n';
  }
  os << "verdict: " << (rep.passed ? "PASS" : "FAIL") << '\n';
  rep.text = os.str();
  return rep;
}

namespace {

struct Flags {
  int k = 0;
  int rank = 0;
  std::string ranks;
  std::string solver;
  std::uint64_t seed = 0;
  double rho = 0;
  double eps = 0;
  int restarts = 0;
  int threads = 0;
  std::string out;
  std::string format;
  std::string config;
  bool verbose = false;
};

struct Opts {
  CLI::Option* k = nullptr;
  CLI::Option* rank = nullptr;
  CLI::Option* ranks = nullptr;
  CLI::Option* solver = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* rho = nullptr;
  CLI::Option* eps = nullptr;
  CLI::Option* restarts = nullptr;
  CLI::Option* threads = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* config = nullptr;
};

void add_common(CLI::App* cmd, Flags& f, Opts& o) {
  o.k = cmd->add_option("--K", f.k, "Number of users (default 16)");
  o.solver = cmd->add_option("--solver", f.solver, "riemannian, altmin or both")
                 ->check(CLI::IsMember({"riemannian", "altmin", "both"}));
  o.seed = cmd->add_option("--seed", f.seed, "Master seed (default 7)");
  o.rho = cmd->add_option("--rho", f.rho, "Regularization weight (default 0.001)");
  o.eps = cmd->add_option("--eps", f.eps, "Smoothing and threshold (default 0.01)");
  o.restarts = cmd->add_option("--restarts", f.restarts, "Restarts per rank for each solver");
  o.threads = cmd->add_option("--threads", f.threads, "Worker threads over ranks");
  o.out = cmd->add_option("--out", f.out, "Output path ('-' for stdout)");
  o.config = cmd->add_option("--config", f.config, "JSON config mirroring RunConfig");
  cmd->add_flag("--verbose", f.verbose, "Per-iteration trace on stderr");
}

// Defaults, then the config file, then explicit flags.
RunConfig build_config(const Flags& f, const Opts& o) {
  RunConfig cfg;
  if (o.config->count()) apply_config_json(read_file(f.config), cfg);
  if (o.k->count()) cfg.k = f.k;
  if (o.ranks && o.ranks->count()) cfg.ranks = parse_rank_range(f.ranks);
  if (o.rank && o.rank->count()) cfg.ranks = {f.rank};
  if (o.solver->count()) cfg.solver = parse_solver(f.solver);
  if (o.seed->count()) cfg.seed = f.seed;
  if (o.rho->count()) cfg.pipeline.rho = f.rho;
  if (o.eps->count()) cfg.pipeline.eps = f.eps;
  if (o.restarts->count()) cfg.pipeline.restarts = cfg.altmin.restarts = f.restarts;
  if (o.threads->count()) cfg.pipeline.threads = f.threads;
  if (o.out->count()) cfg.output_path = f.out;
  if (o.format && o.format->count()) cfg.format = parse_format(f.format);
  if (f.verbose) cfg.verbose = true;
  return cfg;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

int cmd_sweep(RunConfig cfg, std::ostream& out, std::ostream& err) {
  if (cfg.output_path.empty()) {
    cfg.output_path = cfg.format == OutputFormat::csv ? "tradeoff.csv" : "tradeoff.json";
  }
  cfg.validate();
  // Fail on an unwritable path before spending minutes on the sweep.
  if (cfg.output_path != "-") {
    std::ofstream probe(cfg.output_path, std::ios::app);
    if (!probe) throw IoError("cannot write " + cfg.output_path);
  }
  const SweepResult res = run_sweep(cfg, &err);
  emit(cfg.output_path,
       cfg.format == OutputFormat::csv ? sweep_csv(res) : sweep_json(res), out);
  if (cfg.output_path != "-") {
    const std::string manifest =
        std::filesystem::path(cfg.output_path).replace_extension(".manifest.json").string();
    write_file(manifest, sweep_manifest(cfg, res));
  }
  return 0;
}

int cmd_solve(RunConfig cfg, std::ostream& out, std::ostream& err) {
  if (cfg.ranks.size() != 1) throw InvalidInput("solve needs --rank");
  if (cfg.solver == SolverChoice::both) throw InvalidInput("solve takes a single --solver");
  if (cfg.output_path.empty()) cfg.output_path = "solution.json";
  cfg.validate();
  const int r = cfg.ranks.front();
  std::string text;
  try {
    IndexCodingSolution sol;
    if (cfg.solver == SolverChoice::riemannian) {
      PipelineConfig pc = cfg.pipeline;
      pc.seed = cfg.seed;
      sol = solve_one(cfg.k, r, pc);
    } else {
      AltMinConfig ac = cfg.altmin;
      ac.seed = cfg.seed;
      sol = altmin_solve(cfg.k, r, ac);
    }
    text = solution_json(sol);
    if (cfg.verbose) {
      err << "rank " << r << ' ' << to_string(sol.solver) << " s=" << sol.side_info_amount
          << (sol.feasible ? " feasible" : " infeasible") << " residual=" << sol.residual << '\n';
    }
  } catch (const PipelineError& e) {
    err << "warning: " << e.what() << '\n';
    text = json{{"K", cfg.k},          {"rank", r},
                {"side_info_amount", nullptr}, {"feasible", false},
                {"X", nullptr},        {"pattern", nullptr},
                {"side_info_sets", nullptr},   {"sum_rate", achievable_rate(r, cfg.k).sum}}
               .dump(2) +
           "\n";
  }
  emit(cfg.output_path, text, out);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse low-rank linear index codes on the fixed-rank manifold", "icopt"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  Flags sf;
  Opts so;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Tradeoff curve over a range of ranks");
  add_common(sweep_cmd, sf, so);
  so.ranks = sweep_cmd->add_option("--ranks", sf.ranks, "Rank range a..b (default 1..K)");
  so.format = sweep_cmd->add_option("--format", sf.format, "csv or json")
                  ->check(CLI::IsMember({"csv", "json"}));

  Flags vf;
  Opts vo;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Single-rank solve written as JSON");
  add_common(solve_cmd, vf, vo);
  vo.rank = solve_cmd->add_option("--rank", vf.rank, "Target rank")->required();

  std::string verify_path;
  std::string side_path;
  VerifyOptions vopts;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Re-check a solution JSON");
  verify_cmd->add_option("solution", verify_path, "Solution file from `solve`")->required();
  verify_cmd->add_option("--tol", vopts.tol, "Alignment tolerance (default 1e-6)");
  verify_cmd->add_option("--decode-tol", vopts.decode_tol,
                         "Decode relative-error tolerance (default 1e-8)");
  verify_cmd->add_option("--trials", vopts.trials, "Decode trials (default 1000)");
  verify_cmd->add_option("--seed", vopts.seed, "Decode simulation seed (default 7)");
  verify_cmd->add_option("--side-info", side_path, "Side-information JSON to check against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*sweep_cmd) return cmd_sweep(build_config(sf, so), out, err);
    if (*solve_cmd) return cmd_solve(build_config(vf, vo), out, err);
    if (vopts.trials < 1) throw InvalidInput("--trials must be >= 1");
    if (!side_path.empty()) vopts.side_info_json = read_file(side_path);
    const VerifyReport rep = verify_solution_json(read_file(verify_path), vopts);
    out << rep.text;
    return rep.passed ? 0 : 1;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace icopt::cli
