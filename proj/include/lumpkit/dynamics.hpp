#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lumpkit/graph.hpp"
#include "lumpkit/sparse.hpp"

namespace lumpkit {

using LocalState = std::uint32_t;

inline constexpr std::size_t kDefaultMaxStates = std::size_t{1} << 20;
inline constexpr std::size_t kDefaultMaxNonzeros = std::size_t{1} << 20;

/// K^N global states, indexed in K-radix with vertex 0 most significant:
/// index = sum_j x_j K^(N-1-j).
class StateSpace {
 public:
  /// Throws CapacityError if K^N exceeds max_states.
  StateSpace(std::size_t num_vertices, std::size_t num_local_states,
             std::size_t max_states = kDefaultMaxStates);

  std::size_t size() const { return size_; }
  std::size_t num_vertices() const { return weight_.size(); }
  std::size_t num_local_states() const { return k_; }

  std::size_t encode(std::span<const LocalState> locals) const;
  std::vector<LocalState> decode(std::size_t index) const;
  LocalState local(std::size_t index, Vertex v) const {
    return static_cast<LocalState>((index / weight_[v]) % k_);
  }
  std::size_t with_local(std::size_t index, Vertex v, LocalState value) const {
    return index - local(index, v) * weight_[v] + value * weight_[v];
  }

 private:
  std::size_t k_ = 0;
  std::size_t size_ = 1;
  std::vector<std::size_t> weight_;  // K^(N-1-v)
};

/// Population counts of a sequence of local states; counts[a] is the
/// multiplicity of state a.
using CountVector = std::vector<std::uint32_t>;
/// std::nullopt stands for the summary of an empty neighbourhood.
using NeighbourSummary = std::optional<CountVector>;

/// Throws std::out_of_range if an entry is not below K.
NeighbourSummary summary_counts(std::span<const LocalState> states, std::size_t num_local_states);

/// Local states of i's neighbours in ascending neighbour order; empty for an
/// isolated vertex.
std::vector<LocalState> neighbor_config(const Graph& g, std::span<const LocalState> x, Vertex i);

/// Local intensity function gamma(from, to, summary) on K local states.
class LocalDynamics {
 public:
  using RateFunction =
      std::function<double(LocalState from, LocalState to, const NeighbourSummary& summary)>;

  LocalDynamics(std::string name, std::size_t num_local_states, RateFunction rate);

  const std::string& name() const { return name_; }
  std::size_t num_local_states() const { return k_; }

  /// Zero when from == to. Throws std::domain_error for negative or non-finite
  /// rates and std::out_of_range for states not below K.
  double rate(LocalState from, LocalState to, const NeighbourSummary& summary) const;

 private:
  std::string name_;
  std::size_t k_;
  RateFunction rate_;
};

/// States 0 = susceptible, 1 = infected. S->I at a * (#infected neighbours) + eps,
/// I->S at b.
LocalDynamics sis_dynamics(double a, double b, double eps = 0.0);

enum class ChunkStrategy { random_useful, edf, ldf };
ChunkStrategy parse_chunk_strategy(std::string_view name);

/// Pull-based live streaming. Local state u encodes a buffer of length L with
/// buffer index j (1-based) in bit j-1. Useful chunks from a neighbour v are
/// U(u, v) = {j : u_j = 0, v_j = 1}; random_useful picks uniformly from U, edf
/// the largest j in U, ldf the smallest. Only picks with j > 1 download
/// (index 1 is filled by the server alone). Download of j happens at
/// a * sum_v count(v) [v_j = 1] s(j, u, v); playback shifts every chunk one
/// index up at shift_rate (omitted when the buffer is empty); the server fills
/// index 1 at server_rate.
struct P2PParams {
  std::size_t buffer_length = 2;
  double contact_rate = 1.0;
  double shift_rate = 1.0;
  double server_rate = 1.0;
  ChunkStrategy strategy = ChunkStrategy::random_useful;
};
LocalDynamics p2p_dynamics(const P2PParams& params);

/// One rule of user-defined dynamics. Contributes
/// base + sum_c per_count[c] * counts[c] to gamma(from, to, counts) when it
/// applies. A rule with `isolated_only` applies only to empty neighbourhoods;
/// a rule with a pattern applies only when every specified count matches.
struct RateRule {
  LocalState from = 0;
  LocalState to = 0;
  double base = 0.0;
  std::vector<double> per_count;
  std::optional<std::vector<std::optional<std::uint32_t>>> pattern;
  bool isolated_only = false;
};
LocalDynamics table_dynamics(std::size_t num_local_states, std::vector<RateRule> rules);

/// Q with off-diagonal entries stored sparsely and the diagonal derived so
/// every row sums to zero.
class GeneratorMatrix {
 public:
  GeneratorMatrix() = default;
  /// Throws std::invalid_argument on diagonal or negative entries.
  GeneratorMatrix(std::size_t dim, std::vector<Triplet> off_diagonal);
  /// Takes the off-diagonal part of `dense`; the diagonal is recomputed.
  static GeneratorMatrix from_dense(const Eigen::MatrixXd& dense);

  std::size_t dim() const { return off_.rows(); }
  const SparseMatrix& off_diagonal() const { return off_; }
  double exit_rate(std::size_t x) const { return exit_[x]; }
  double diagonal(std::size_t x) const { return -exit_[x]; }
  double rate(std::size_t x, std::size_t y) const { return x == y ? diagonal(x) : off_.at(x, y); }

  /// Sparse Q including the diagonal.
  SparseMatrix full() const;
  Eigen::MatrixXd to_dense() const { return full().to_dense(); }

 private:
  SparseMatrix off_;
  std::vector<double> exit_;
};

struct BuildLimits {
  std::size_t max_states = kDefaultMaxStates;
  std::size_t max_nonzeros = kDefaultMaxNonzeros;
};

/// q_{x,y} = gamma(x_i, y_i, c(n_i(x))) when x and y differ only at vertex i.
GeneratorMatrix build_generator(const Graph& g, const LocalDynamics& dynamics,
                                const BuildLimits& limits = {});

}  // namespace lumpkit
