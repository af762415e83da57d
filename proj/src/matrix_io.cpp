#include "lumpkit/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "lumpkit/errors.hpp"

namespace lumpkit {

Eigen::MatrixXd read_matrix(std::istream& in) {
  std::optional<Eigen::Index> dim;
  Eigen::MatrixXd m;
  Eigen::Index row = 0;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (!dim) {
      long long n = -1;
      std::string extra;
      if (first != "dim" || !(fields >> n) || n <= 0 || (fields >> extra)) {
        throw ParseError("expected header 'dim <n>'", lineno);
      }
      dim = static_cast<Eigen::Index>(n);
      m = Eigen::MatrixXd::Zero(*dim, *dim);
      continue;
    }
    if (row == *dim) throw ParseError("more than " + std::to_string(*dim) + " rows", lineno);
    std::istringstream values(line);
    Eigen::Index col = 0;
    std::string token;
    while (values >> token) {
      if (col == *dim) throw ParseError("row has more than " + std::to_string(*dim) + " entries", lineno);
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || !std::isfinite(x)) throw ParseError("bad number '" + token + "'", lineno);
      m(row, col++) = x;
    }
    if (col != *dim) {
      throw ParseError("row has " + std::to_string(col) + " entries, expected " + std::to_string(*dim), lineno);
    }
    ++row;
  }
  if (!dim) throw ParseError("missing header 'dim <n>'");
  if (row != *dim) throw ParseError("expected " + std::to_string(*dim) + " rows, found " + std::to_string(row));
  return m;
}

StochasticInput read_transition_matrix(std::istream& in, double tol) {
  Eigen::MatrixXd m = read_matrix(in);
  double adjustment = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if ((m.row(i).array() < 0.0).any()) throw ParseError("row " + std::to_string(i) + " has a negative entry");
    const double sum = m.row(i).sum();
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream msg;
      msg << "row " << i << " sums to " << std::setprecision(12) << sum;
      throw ParseError(msg.str());
    }
    adjustment = std::max(adjustment, std::abs(sum - 1.0));
    m.row(i) /= sum;
  }
  return {TransitionMatrix(SparseMatrix::from_dense(m)), adjustment};
}

StochasticInput read_transition_matrix_file(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return read_transition_matrix(in, tol);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << "dim " << m.rows() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

}  // namespace lumpkit
