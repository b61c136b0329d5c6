#include "icopt/index_code.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "icopt/errors.hpp"

namespace icopt {

SideInformation::SideInformation(int k, std::vector<std::vector<int>> sets)
    : k_(k), sets_(std::move(sets)) {
  if (k < 1) throw InvalidInput("SideInformation: K must be >= 1");
  if (static_cast<int>(sets_.size()) != k) {
    throw InvalidInput("SideInformation: need exactly K sets");
  }
  for (int i = 0; i < k; ++i) {
    auto& s = sets_[static_cast<std::size_t>(i)];
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw InvalidInput("SideInformation: duplicate index");
    }
    for (int j : s) {
      if (j < 0 || j >= k) throw InvalidInput("SideInformation: index out of range");
      if (j == i) throw InvalidInput("SideInformation: receiver cannot hold its own message");
    }
  }
}

int SideInformation::amount() const {
  int n = 0;
  for (const auto& s : sets_) n += static_cast<int>(s.size());
  return n;
}

std::string SideInformation::to_json() const {
  nlohmann::ordered_json j;
  j["K"] = k_;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : sets_) {
    auto one = nlohmann::ordered_json::array();
    for (int v : s) one.push_back(v + 1);
    arr.push_back(one);
  }
  j["sets"] = arr;
  return j.dump();
}

SideInformation SideInformation::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("side information: ") + e.what());
  }
  if (!j.is_object() || !j.contains("K") || !j.contains("sets") ||
      !j["K"].is_number_integer() || !j["sets"].is_array()) {
    throw InvalidInput("side information: expected {\"K\": int, \"sets\": [[int...]...]}");
  }
  const int k = j["K"].get<int>();
  std::vector<std::vector<int>> sets;
  for (const auto& s : j["sets"]) {
    if (!s.is_array()) throw InvalidInput("side information: sets must be arrays");
    std::vector<int> one;
    for (const auto& v : s) {
      if (!v.is_number_integer()) throw InvalidInput("side information: indices must be ints");
      one.push_back(v.get<int>() - 1);
    }
    sets.push_back(std::move(one));
  }
  return SideInformation(k, std::move(sets));
}

IndexCode code_from_factors(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.cols() < 1) {
    throw InvalidInput("code_from_factors: factor shapes differ");
  }
  return {static_cast<int>(u.cols()), v, u};
}

IndexCode code_from_matrix(const Matrix& x, int n) {
  if (x.rows() != x.cols() || n < 1 || n > x.rows()) {
    throw InvalidInput("code_from_matrix: need square X and 1 <= N <= K");
  }
  require_finite(x, "code_from_matrix");
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector s = svd.singularValues().head(n);
  const Matrix u = svd.matrixU().leftCols(n) * s.asDiagonal();
  const Matrix v = svd.matrixV().leftCols(n);
  return code_from_factors(u, v);
}

SideInformation pattern_to_side_info(const SparsityPattern& p) {
  const int k = p.dim();
  std::vector<std::vector<int>> sets(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (j != i && p.at(i, j)) sets[static_cast<std::size_t>(i)].push_back(j);
  return SideInformation(k, std::move(sets));
}

SparsityPattern side_info_to_pattern(const SideInformation& side) {
  SparsityPattern p(side.dim());
  for (int i = 0; i < side.dim(); ++i)
    for (int j : side.sets()[static_cast<std::size_t>(i)]) p.set(i, j, true);
  return p;
}

int side_info_amount(const SparsityPattern& p) { return p.nnz() - p.dim(); }

Rate achievable_rate(int rank, int k) {
  if (rank < 1) throw InvalidInput("achievable_rate: rank must be >= 1");
  if (k < 1) throw InvalidInput("achievable_rate: K must be >= 1");
  return {1.0 / rank, static_cast<double>(k) / rank};
}

AlignmentVerdict verify_alignment(const Matrix& x, const SparsityPattern& p, double tol) {
  if (x.rows() != p.dim() || x.cols() != p.dim()) {
    throw InvalidInput("verify_alignment: shape mismatch");
  }
  AlignmentVerdict v;
  const auto consider = [&](double residual, int i, int j) {
    if (v.row < 0 || residual > v.max_residual || std::isnan(residual)) {
      v.max_residual = residual;
      v.row = i;
      v.col = j;
    }
  };
  for (int i = 0; i < p.dim(); ++i) {
    for (int j = 0; j < p.dim(); ++j) {
      if (i == j) {
        consider(std::abs(x(i, i) - 1.0), i, j);
      } else if (!p.at(i, j)) {
        consider(std::abs(x(i, j)), i, j);
      }
    }
  }
  v.passed = v.max_residual <= tol;
  if (v.passed) {
    v.row = -1;
    v.col = -1;
  }
  return v;
}

double decode_simulation(const IndexCode& code, const SideInformation& side, int trials,
                         std::uint64_t seed) {
  const int k = code.users();
  if (side.dim() != k || code.decoders.rows() != k || code.decoders.cols() != code.n ||
      code.precoders.cols() != code.n) {
    throw InvalidInput("decode_simulation: code and side information disagree on K or N");
  }
  if (trials < 1) throw InvalidInput("decode_simulation: trials must be >= 1");
  Vector gain(k);
  for (int i = 0; i < k; ++i) {
    gain(i) = code.decoders.row(i).dot(code.precoders.row(i));
    if (!(std::abs(gain(i)) >= 1e-12)) {
      throw InvalidInput("decode_simulation: degenerate code, u_k^T v_k ~ 0");
    }
  }
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    GaussianStream g(mix_seed(seed, static_cast<std::uint64_t>(t)));
    Vector s(k);
    for (int i = 0; i < k; ++i) s(i) = g.next();
    const Vector z = code.precoders.transpose() * s;
    for (int i = 0; i < k; ++i) {
      Vector clean = z;
      for (int j : side.sets()[static_cast<std::size_t>(i)]) clean -= code.precoders.row(j).transpose() * s(j);
      const double s_hat = code.decoders.row(i).dot(clean) / gain(i);
      worst = std::max(worst, std::abs(s_hat - s(i)) / std::max(1.0, std::abs(s(i))));
    }
  }
  return worst;
}

}  // namespace icopt
