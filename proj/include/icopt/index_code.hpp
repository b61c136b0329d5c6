#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icopt/manifold.hpp"
#include "icopt/objectives.hpp"

namespace icopt {

// Side-information sets V_1..V_K (0-based indices in memory; the JSON
// document uses 1-based indices). Invariant: i is never in V_i.
class SideInformation {
 public:
  SideInformation(int k, std::vector<std::vector<int>> sets);

  int dim() const { return k_; }
  const std::vector<std::vector<int>>& sets() const { return sets_; }
  int amount() const;

  // {"K": int, "sets": [[int...]...]} with 1-based indices.
  std::string to_json() const;
  static SideInformation from_json(const std::string& text);  // throws InvalidInput

  bool operator==(const SideInformation&) const = default;

 private:
  int k_;
  std::vector<std::vector<int>> sets_;  // each sorted ascending
};

// Scalar linear code over N channel uses. Row i of `decoders` is u_i, row j
// of `precoders` is v_j.
struct IndexCode {
  int n;
  Matrix precoders;
  Matrix decoders;

  int users() const { return static_cast<int>(precoders.rows()); }
  Matrix alignment_matrix() const { return decoders * precoders.transpose(); }
};

IndexCode code_from_factors(const Matrix& u, const Matrix& v);
inline IndexCode code_from_factors(const FactorPoint& x) { return code_from_factors(x.u(), x.v()); }

// Rank-`n` code whose alignment matrix is the truncated SVD of X.
IndexCode code_from_matrix(const Matrix& x, int n);

SideInformation pattern_to_side_info(const SparsityPattern& p);
SparsityPattern side_info_to_pattern(const SideInformation& side);

// nnz(P) - K
int side_info_amount(const SparsityPattern& p);

struct Rate {
  double per_user;  // 1 / rank
  double sum;       // K / rank
};
Rate achievable_rate(int rank, int k = 1);

struct AlignmentVerdict {
  bool passed = true;
  double max_residual = 0.0;  // worst violation over all checked positions
  int row = -1;               // location of the worst violation (0-based)
  int col = -1;
};

// Passes iff |X_kk - 1| <= tol for all k and |X_ki| <= tol wherever P_ki = 0.
AlignmentVerdict verify_alignment(const Matrix& x, const SparsityPattern& p, double tol);

// Max over trials and users of |s_hat_k - s_k| / max(1, |s_k|) when each user
// decodes with its side information. Throws InvalidInput when some
// |u_k^T v_k| < 1e-12.
double decode_simulation(const IndexCode& code, const SideInformation& side, int trials,
                         std::uint64_t seed);

}  // namespace icopt
