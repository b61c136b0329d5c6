#include "icopt/solution.hpp"

#include <cmath>

#include "icopt/errors.hpp"
#include "icopt/index_code.hpp"

namespace icopt {

std::string_view to_string(SolverTag t) {
  return t == SolverTag::riemannian ? "riemannian" : "altmin";
}

bool renormalize_diagonal(Matrix& u, const Matrix& v, double tol) {
  const Vector d = (u.array() * v.array()).rowwise().sum();
  if (!(d.cwiseAbs().minCoeff() >= tol)) return false;
  for (Eigen::Index i = 0; i < u.rows(); ++i) u.row(i) /= d(i);
  return true;
}

IndexCodingSolution finalize_solution(Matrix u, Matrix v, const SparsityPattern& allowed,
                                      double tol, SolverTag tag) {
  if (u.rows() != allowed.dim() || v.rows() != allowed.dim() || u.cols() != v.cols()) {
    throw InvalidInput("finalize_solution: shape mismatch");
  }
  IndexCodingSolution sol;
  const bool diag_ok = renormalize_diagonal(u, v, tol);
  sol.x = u * v.transpose();
  sol.u = std::move(u);
  sol.v = std::move(v);
  sol.rank = static_cast<int>(sol.u.cols());
  sol.solver = tag;

  SparsityPattern p(allowed.dim());
  for (int i = 0; i < p.dim(); ++i)
    for (int j = 0; j < p.dim(); ++j)
      if (i != j && allowed.at(i, j) && std::abs(sol.x(i, j)) > tol) p.set(i, j, true);
  sol.pattern = p;
  sol.side_info_amount = side_info_amount(p);

  const AlignmentVerdict verdict = verify_alignment(sol.x, p, tol);
  sol.residual = verdict.max_residual;
  sol.feasible = diag_ok && verdict.passed;
  return sol;
}

bool better_solution(const IndexCodingSolution& a, const IndexCodingSolution& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.feasible) {
    if (a.side_info_amount != b.side_info_amount) return a.side_info_amount < b.side_info_amount;
  } else if (a.residual != b.residual) {
    return a.residual < b.residual;
  }
  return a.restart < b.restart;
}

}  // namespace icopt
