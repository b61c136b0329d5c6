#pragma once

#include <cstdint>
#include <string_view>

#include "icopt/objectives.hpp"

namespace icopt {

enum class SolverTag { riemannian, altmin };

std::string_view to_string(SolverTag t);

// A candidate index code X = U V^T for one rank. `pattern` marks the entries
// of X above the feasibility tolerance that the solver was allowed to use;
// side_info_amount = nnz(pattern) - K.
struct IndexCodingSolution {
  Matrix x;
  Matrix u;
  Matrix v;
  SparsityPattern pattern{1};
  int rank = 0;
  int side_info_amount = 0;
  bool feasible = false;
  SolverTag solver = SolverTag::riemannian;
  double residual = 0.0;  // worst alignment violation
  int restart = 0;        // which restart produced it
};

// Scales row i of U by 1 / X_ii so that diag(U V^T) = 1 exactly (up to
// rounding). Leaves U untouched and returns false if some |X_ii| < tol.
bool renormalize_diagonal(Matrix& u, const Matrix& v, double tol);

// Renormalizes, keeps the entries of `allowed` whose magnitude exceeds tol,
// and decides feasibility with verify_alignment at tol.
IndexCodingSolution finalize_solution(Matrix u, Matrix v, const SparsityPattern& allowed,
                                      double tol, SolverTag tag);

// True if a is a better answer than b: feasible beats infeasible, then fewer
// side-information entries, then smaller residual, then earlier restart.
bool better_solution(const IndexCodingSolution& a, const IndexCodingSolution& b);

}  // namespace icopt
