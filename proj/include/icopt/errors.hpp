#pragma once

#include <stdexcept>
#include <string>

namespace icopt {

// Malformed arguments: shape mismatches, non-finite entries, out-of-domain
// parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A Gram matrix or factor lost numerical full rank.
class RankDeficiency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Retraction produced a rank-deficient factor; callers shrink the step.
class RetractionFailure : public RankDeficiency {
 public:
  using RankDeficiency::RankDeficiency;
};

// Non-finite objective/model values or an LP that would not terminate.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Row LP with a zero anchor has no feasible point.
class InfeasibleRow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace icopt
