#pragma once

#include "icopt/linalg.hpp"

namespace icopt {

struct LpSolution {
  Vector x;
  double objective = 0.0;
  int pivots = 0;
};

// Dense two-phase tableau simplex for
//
//   minimize c^T x  subject to  A x = b,  x >= 0
//
// using Bland's rule throughout. If `tie_break` is non-empty, a third phase
// minimizes tie_break^T x over the optimal face of the primary objective
// (nonbasic columns with positive reduced cost are frozen at zero).
//
// Throws InvalidInput on shape errors, InfeasibleRow when phase 1 leaves a
// positive residual, NumericalFailure when the LP is unbounded or the pivot
// budget is exhausted.
LpSolution solve_standard_lp(const Matrix& a, const Vector& b, const Vector& c,
                             const Vector& tie_break = Vector(), int max_pivots = 20000);

}  // namespace icopt
