#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lumpkit/dynamics.hpp"
#include "lumpkit/graph.hpp"
#include "lumpkit/sparse.hpp"

namespace lumpkit {

inline constexpr double kDefaultDynkinTolerance = 1e-9;

/// Partition of the state space 0..dim-1 with partition function eta.
/// Classes are numbered in order of their smallest member state, so the same
/// grouping always yields the same eta.
class StatePartition {
 public:
  StatePartition() = default;

  /// Groups states with equal labels; `provenance` records where the
  /// partition came from ("population", "aut", "k=2", "custom", ...).
  static StatePartition from_labels(std::span<const std::size_t> labels, std::string provenance = "custom");
  /// Throws std::invalid_argument unless `classes` is a disjoint cover of 0..dim-1.
  static StatePartition from_classes(std::size_t dim, const std::vector<std::vector<std::size_t>>& classes,
                                     std::string provenance = "custom");
  static StatePartition identity(std::size_t dim);
  static StatePartition whole(std::size_t dim);

  std::size_t dim() const { return eta_.size(); }
  std::size_t num_classes() const { return classes_.size(); }
  std::size_t class_of(std::size_t state) const { return eta_[state]; }
  std::span<const std::size_t> eta() const { return eta_; }
  const std::vector<std::vector<std::size_t>>& classes() const { return classes_; }
  const std::string& provenance() const { return provenance_; }

  bool same_grouping(const StatePartition& other) const { return eta_ == other.eta_; }

 private:
  std::vector<std::size_t> eta_;
  std::vector<std::vector<std::size_t>> classes_;
  std::string provenance_;
};

enum class MatrixKind { generator, stochastic };

/// Aggregated M x M matrix.
struct LumpedMatrix {
  Eigen::MatrixXd values;
  MatrixKind kind = MatrixKind::stochastic;
  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
};

/// States with equal population counts share a class; M = C(N+K-1, K-1).
StatePartition population_partition(std::size_t num_vertices, std::size_t num_local_states,
                                     std::size_t max_states = kDefaultMaxStates);

/// Orbits of the group generated by `perms` acting by (f.x)_i = x_{f(i)}.
StatePartition orbit_partition_group(std::span<const Permutation> perms, std::size_t num_vertices,
                                     std::size_t num_local_states, std::size_t max_states = kDefaultMaxStates);

/// Orbits of the class-preserving group of `classes` (the direct product of
/// the symmetric groups on each vertex class): two states share a class iff
/// they carry the same multiset of local states on every vertex class.
StatePartition orbit_partition_classes(const VertexPartition& classes, std::size_t num_local_states,
                                       std::size_t max_states = kDefaultMaxStates);

/// Product over vertex classes of C(|c|+K-1, K-1).
std::size_t orbit_count_classes(const VertexPartition& classes, std::size_t num_local_states);

/// Every fine class lies inside one coarse class. Throws on dim mismatch.
bool is_refinement(const StatePartition& fine, const StatePartition& coarse);

struct DynkinResult {
  bool exact = true;
  double max_deviation = 0.0;
};

/// For each ordered class pair (i, j), i != j, compares the row mass into
/// class j across all states of class i.
DynkinResult dynkin_check(const SparseMatrix& matrix, const StatePartition& partition,
                          double tol = kDefaultDynkinTolerance);
DynkinResult dynkin_check(const GeneratorMatrix& q, const StatePartition& partition,
                          double tol = kDefaultDynkinTolerance);

/// Entry (i, j) is the class-j row mass of the smallest state in class i.
/// Throws LumpabilityError if Dynkin's criterion fails beyond `tol`.
LumpedMatrix lump_exact(const SparseMatrix& matrix, MatrixKind kind, const StatePartition& partition,
                        double tol = kDefaultDynkinTolerance);
LumpedMatrix lump_exact(const GeneratorMatrix& q, const StatePartition& partition,
                        double tol = kDefaultDynkinTolerance);

/// Weighted aggregation of a row-stochastic matrix:
/// t~_{ij} = sum_{u in i} w_u sum_{v in j} t_{uv} / sum_{u in i} w_u.
/// Throws std::invalid_argument if a class has zero total weight.
LumpedMatrix lump_weighted(const SparseMatrix& t, const StatePartition& partition, std::span<const double> w);

/// Sum of a state-space vector over each class.
std::vector<double> aggregate(std::span<const double> p, const StatePartition& partition);

/// 1 - M / dim.
double compression(const StatePartition& partition);

// Partition files. Default format: one line per class listing 0-based state
// indices. Alternative: a first line `eta` followed by `state class` lines.
// `#` starts a comment in both formats.
StatePartition read_partition(std::istream& in, std::size_t dim);
StatePartition read_partition_file(const std::string& path, std::size_t dim);
void write_partition(std::ostream& out, const StatePartition& partition);

}  // namespace lumpkit
