#include "icopt/simplex.hpp"

#include <cmath>
#include <vector>

#include "icopt/errors.hpp"

namespace icopt {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

class Tableau {
 public:
  Tableau(const Matrix& a, const Vector& b) : m_(a.rows()), n_(a.cols()) {
    t_ = Matrix::Zero(m_, n_ + m_);
    rhs_ = b;
    t_.leftCols(n_) = a;
    t_.rightCols(m_).setIdentity();
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (rhs_(i) < 0) {
        t_.row(i) *= -1.0;
        rhs_(i) *= -1.0;
      }
    }
    basis_.resize(static_cast<std::size_t>(m_));
    for (Eigen::Index i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = n_ + i;
    allowed_.assign(static_cast<std::size_t>(n_ + m_), true);
  }

  // Bland's rule descent on cost vector `cost` (length n + m).
  void optimize(const Vector& cost, int& pivots, int max_pivots) {
    for (;;) {
      const Vector rc = reduced_costs(cost);
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < t_.cols(); ++j) {
        if (allowed_[static_cast<std::size_t>(j)] && !is_basic(j) && rc(j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double aij = t_(i, enter);
        if (aij <= kPivotTol) continue;
        const double ratio = rhs_(i) / aij;
        if (leave < 0 || ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) throw NumericalFailure("simplex: LP is unbounded");
      if (++pivots > max_pivots) throw NumericalFailure("simplex: pivot budget exhausted");
      pivot(leave, enter);
    }
  }

  Vector reduced_costs(const Vector& cost) const {
    Vector cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
    return cost - (cb.transpose() * t_).transpose();
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    const double p = t_(row, col);
    t_.row(row) /= p;
    rhs_(row) /= p;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f == 0.0) continue;
      t_.row(i) -= f * t_.row(row);
      rhs_(i) -= f * rhs_(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // After phase 1: pivot basic artificials out, or drop redundant rows.
  void expel_artificials() {
    for (Eigen::Index i = 0; i < m_;) {
      if (basis_[static_cast<std::size_t>(i)] < n_) {
        ++i;
        continue;
      }
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
        ++i;
      } else {
        remove_row(i);
      }
    }
    for (std::size_t j = static_cast<std::size_t>(n_); j < allowed_.size(); ++j) {
      allowed_[j] = false;
    }
  }

  void freeze(Eigen::Index j) { allowed_[static_cast<std::size_t>(j)] = false; }
  bool is_basic(Eigen::Index j) const {
    for (auto b : basis_)
      if (b == j) return true;
    return false;
  }

  Vector solution() const {
    Vector x = Vector::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index b = basis_[static_cast<std::size_t>(i)];
      if (b < n_) x(b) = rhs_(i);
    }
    return x;
  }

  Eigen::Index cols() const { return t_.cols(); }

 private:
  void remove_row(Eigen::Index i) {
    const Eigen::Index last = m_ - 1;
    if (i != last) {
      t_.row(i) = t_.row(last);
      rhs_(i) = rhs_(last);
      basis_[static_cast<std::size_t>(i)] = basis_[static_cast<std::size_t>(last)];
    }
    t_.conservativeResize(last, Eigen::NoChange);
    rhs_.conservativeResize(last);
    basis_.pop_back();
    m_ = last;
  }

  Eigen::Index m_;
  Eigen::Index n_;
  Matrix t_;
  Vector rhs_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> allowed_;
};

}  // namespace

LpSolution solve_standard_lp(const Matrix& a, const Vector& b, const Vector& c,
                             const Vector& tie_break, int max_pivots) {
  if (a.rows() != b.size() || a.cols() != c.size() ||
      (tie_break.size() != 0 && tie_break.size() != c.size())) {
    throw InvalidInput("solve_standard_lp: shape mismatch");
  }
  require_finite(a, "solve_standard_lp A");
  const Eigen::Index n = a.cols();
  const Eigen::Index m = a.rows();
  Tableau tab(a, b);
  int pivots = 0;

  Vector phase1 = Vector::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.optimize(phase1, pivots, max_pivots);
  const Vector x1 = tab.solution();
  const double infeas = (a * x1 - b).cwiseAbs().sum();
  if (infeas > 1e-8 * std::max(1.0, b.cwiseAbs().sum())) {
    throw InfeasibleRow("simplex: LP is infeasible");
  }
  tab.expel_artificials();

  Vector cost = Vector::Zero(tab.cols());
  cost.head(n) = c;
  tab.optimize(cost, pivots, max_pivots);

  if (tie_break.size() != 0) {
    const Vector rc = tab.reduced_costs(cost);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!tab.is_basic(j) && rc(j) > kCostTol) tab.freeze(j);
    }
    Vector second = Vector::Zero(tab.cols());
    second.head(n) = tie_break;
    tab.optimize(second, pivots, max_pivots);
  }

  LpSolution out;
  out.x = tab.solution().cwiseMax(0.0);
  out.objective = c.dot(out.x);
  out.pivots = pivots;
  return out;
}

}  // namespace icopt
