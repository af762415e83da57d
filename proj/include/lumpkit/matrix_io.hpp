#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "lumpkit/markov.hpp"

namespace lumpkit {

// Matrix text format: a line `dim <n>` followed by n rows of n decimals.
// `#` starts a comment; blank lines are ignored.

/// Raw square matrix. Throws ParseError with the offending line.
Eigen::MatrixXd read_matrix(std::istream& in);

struct StochasticInput {
  TransitionMatrix t;
  double max_adjustment = 0.0;  ///< largest |row sum - 1| before renormalising
};

inline constexpr double kStochasticInputTolerance = 1e-6;

/// Reads a transition matrix. Rows must be nonnegative and sum to 1 within
/// `tol`; they are then rescaled to sum to 1 exactly.
StochasticInput read_transition_matrix(std::istream& in, double tol = kStochasticInputTolerance);
StochasticInput read_transition_matrix_file(const std::string& path, double tol = kStochasticInputTolerance);

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);

}  // namespace lumpkit
