#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lumpkit/dynamics.hpp"
#include "lumpkit/lumping.hpp"
#include "lumpkit/sparse.hpp"

namespace lumpkit {

/// Row-stochastic matrix T.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  /// Throws std::invalid_argument unless `m` is square with entries in [0, 1]
  /// and every row summing to 1 within `tol`.
  explicit TransitionMatrix(SparseMatrix m, double tol = 1e-12);
  static TransitionMatrix from_lumped(const LumpedMatrix& lumped, double tol = 1e-12);

  std::size_t dim() const { return m_.rows(); }
  const SparseMatrix& matrix() const { return m_; }
  double at(std::size_t u, std::size_t v) const { return m_.at(u, v); }
  SparseMatrix::RowView row(std::size_t u) const { return m_.row(u); }
  operator const SparseMatrix&() const { return m_; }

 private:
  SparseMatrix m_;
};

struct Uniformized {
  TransitionMatrix t;
  double lambda = 1.0;
};

/// T = I + Q / lambda with lambda the largest exit rate (1 for the zero generator).
Uniformized uniformize(const GeneratorMatrix& q);

/// Strongly connected components of the positive-entry digraph that have no
/// outgoing edges. A chain is irreducible iff this is one class covering all states.
std::vector<std::vector<std::size_t>> closed_classes(const SparseMatrix& t);
bool is_irreducible(const SparseMatrix& t);

enum class StationaryMethod { automatic, dense, power };

struct StationaryOptions {
  StationaryMethod method = StationaryMethod::automatic;
  std::size_t dense_limit = 4096;  ///< automatic uses a dense solve up to this dimension
  double residual_tol = 1e-10;     ///< target for ||pi T - pi||_1
  std::size_t max_iterations = 10'000'000;
};

struct StationaryDist {
  std::vector<double> pi;
  double residual = 0.0;
  StationaryMethod method = StationaryMethod::dense;
  std::size_t iterations = 0;
};

/// Unique pi with pi T = pi, sum pi = 1. Throws ReducibleChainError if T is
/// not irreducible. The power method iterates the lazy chain (I + T)/2, which
/// shares pi with T and converges for periodic T as well.
StationaryDist stationary(const TransitionMatrix& t, const StationaryOptions& options = {});

/// ||p T - p||_1
double stationarity_residual(const SparseMatrix& t, std::span<const double> p);

/// t^_{uv} = w_v / sum_{x in [v]} w_x * t~_{eta(u), eta(v)}.
TransitionMatrix pi_lift(const LumpedMatrix& lumped, const StatePartition& partition, std::span<const double> w);

/// t^_{uv} = t_{uv} / sum_{x in [v]} t_{ux} * t~_{eta(u), eta(v)}, or
/// t~_{eta(u), eta(v)} / |[v]| when u puts no mass on [v].
TransitionMatrix p_lift(const LumpedMatrix& lumped, const StatePartition& partition, const TransitionMatrix& t);

/// sum_u pi_u sum_v t_{uv} log(t_{uv} / t^_{uv}), natural log, 0 log 0 = 0.
/// Throws AbsoluteContinuityError when pi_u t_{uv} > 0 but t^_{uv} = 0.
double kl_rate(const TransitionMatrix& t, const TransitionMatrix& lifted, std::span<const double> pi);

/// KL rates of T against both liftings of its w-weighted aggregation,
/// evaluated on the support of T without materialising the lifted matrices.
struct LiftingKL {
  double pi_lifting = 0.0;
  double p_lifting = 0.0;
};
LiftingKL lifting_kl(const TransitionMatrix& t, const StatePartition& partition, std::span<const double> w);

/// rho(i, j) = W_i W_j / F_ij with W the class weights and
/// F_ij = sum_{p in i, q in j} pi_p t_pq. Undefined where F_ij = 0.
struct RhoTable {
  Eigen::MatrixXd rho;
  Eigen::MatrixXd flow;
  std::vector<double> class_weight;
  std::size_t size() const { return class_weight.size(); }
  bool defined(std::size_t i, std::size_t j) const {
    return flow(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0;
  }
};
RhoTable rho_table(const TransitionMatrix& t, const StatePartition& partition, std::span<const double> pi);

/// Share of the coarse pair's flow carried by one fine cross-section.
struct CrossSectionWeight {
  std::size_t fine_from;
  std::size_t fine_to;
  double weight;
};
/// Averaging weights W for coarse pair (i, j) over the fine cross-sections
/// inside it. They sum to 1 whenever the coarse flow is positive.
std::vector<CrossSectionWeight> averaging_weights(const RhoTable& coarse_rho, const RhoTable& fine_rho,
                                                  const StatePartition& coarse, const StatePartition& fine,
                                                  std::size_t i, std::size_t j);

/// Recursion check for rho across a refinement. For each coarse pair (i, j)
/// with positive flow, compares
///   lhs = sum_{x in i, y in j} pi_x t_xy rho_fine(x, y)   and   rhs = rho_coarse(i, j) F_ij.
/// The identity lhs = rhs needs every fine cross-section of the pair to have
/// positive flow; pairs that contain a zero-flow (undefined rho) cross-section
/// are excluded from `max_residual` and instead must satisfy lhs <= rhs.
struct RhoRecursion {
  double max_residual = 0.0;   ///< max |lhs - rhs| over checked pairs
  double max_excess = 0.0;     ///< max (lhs - rhs) over excluded pairs, expected <= 0
  std::size_t checked_pairs = 0;
  std::size_t excluded_pairs = 0;
};
/// Throws std::invalid_argument if `fine` does not refine `coarse`.
RhoRecursion check_rho_recursion(const TransitionMatrix& t, const StatePartition& coarse,
                                 const StatePartition& fine, std::span<const double> pi);

/// p(t) = sum_n Poisson(n; lambda t) p0 T^n, truncated once the Poisson tail
/// falls below tol.
std::vector<double> transient_distribution(const GeneratorMatrix& q, std::span<const double> p0, double time,
                                           double tol = 1e-12);

}  // namespace lumpkit
