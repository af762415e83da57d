#include "lumpkit/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "lumpkit/errors.hpp"

namespace lumpkit {

StateSpace::StateSpace(std::size_t num_vertices, std::size_t num_local_states, std::size_t max_states)
    : k_(num_local_states), weight_(num_vertices) {
  if (num_local_states < 1) throw std::invalid_argument("need at least one local state");
  for (std::size_t v = num_vertices; v-- > 0;) {
    weight_[v] = size_;
    if (size_ > max_states / k_) {
      throw CapacityError("state space " + std::to_string(k_) + "^" + std::to_string(num_vertices) +
                          " exceeds cap of " + std::to_string(max_states) + " states");
    }
    size_ *= k_;
  }
  if (size_ > max_states) throw CapacityError("state space exceeds cap");
}

std::size_t StateSpace::encode(std::span<const LocalState> locals) const {
  if (locals.size() != weight_.size()) throw std::invalid_argument("state has wrong length");
  std::size_t index = 0;
  for (std::size_t v = 0; v < locals.size(); ++v) {
    if (locals[v] >= k_) throw std::out_of_range("local state out of range");
    index += locals[v] * weight_[v];
  }
  return index;
}

std::vector<LocalState> StateSpace::decode(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("state index out of range");
  std::vector<LocalState> locals(weight_.size());
  for (Vertex v = 0; v < weight_.size(); ++v) locals[v] = local(index, v);
  return locals;
}

NeighbourSummary summary_counts(std::span<const LocalState> states, std::size_t num_local_states) {
  if (states.empty()) return std::nullopt;
  CountVector counts(num_local_states, 0);
  for (LocalState s : states) {
    if (s >= num_local_states) throw std::out_of_range("local state out of range");
    ++counts[s];
  }
  return counts;
}

std::vector<LocalState> neighbor_config(const Graph& g, std::span<const LocalState> x, Vertex i) {
  if (i >= g.num_vertices()) throw std::out_of_range("vertex out of range");
  if (x.size() != g.num_vertices()) throw std::invalid_argument("state length does not match graph");
  std::vector<LocalState> out;
  for (Vertex j : g.neighbors(i)) out.push_back(x[j]);
  return out;
}

// --- LocalDynamics ---------------------------------------------------------

LocalDynamics::LocalDynamics(std::string name, std::size_t num_local_states, RateFunction rate)
    : name_(std::move(name)), k_(num_local_states), rate_(std::move(rate)) {
  if (k_ < 1) throw std::invalid_argument("dynamics needs at least one local state");
  if (!rate_) throw std::invalid_argument("dynamics needs a rate function");
}

double LocalDynamics::rate(LocalState from, LocalState to, const NeighbourSummary& summary) const {
  if (from >= k_ || to >= k_) throw std::out_of_range("local state out of range");
  if (from == to) return 0.0;
  const double r = rate_(from, to, summary);
  if (!std::isfinite(r) || r < 0.0) {
    throw std::domain_error(name_ + ": rate must be finite and nonnegative");
  }
  return r;
}

LocalDynamics sis_dynamics(double a, double b, double eps) {
  if (a < 0.0 || b < 0.0 || eps < 0.0) throw std::invalid_argument("SIS rates must be nonnegative");
  return LocalDynamics("sis", 2, [a, b, eps](LocalState from, LocalState to, const NeighbourSummary& s) {
    if (from == 0 && to == 1) return a * (s ? (*s)[1] : 0) + eps;
    if (from == 1 && to == 0) return b;
    return 0.0;
  });
}

ChunkStrategy parse_chunk_strategy(std::string_view name) {
  if (name == "random_useful") return ChunkStrategy::random_useful;
  if (name == "edf") return ChunkStrategy::edf;
  if (name == "ldf") return ChunkStrategy::ldf;
  throw std::invalid_argument("unknown chunk strategy '" + std::string(name) + "'");
}

namespace {

// s(j, u, v): probability that a peer with buffer u fetches index j (1-based)
// on contacting a peer with buffer v.
double chunk_selection(ChunkStrategy strategy, std::size_t j, LocalState u, LocalState v) {
  const LocalState useful = v & ~u;
  const LocalState bit = LocalState{1} << (j - 1);
  if ((useful & bit) == 0) return 0.0;
  switch (strategy) {
    case ChunkStrategy::random_useful:
      return 1.0 / std::popcount(useful);
    case ChunkStrategy::edf:
      return std::bit_width(useful) == j ? 1.0 : 0.0;
    case ChunkStrategy::ldf:
      return static_cast<std::size_t>(std::countr_zero(useful)) + 1 == j ? 1.0 : 0.0;
  }
  return 0.0;
}

}  // namespace

LocalDynamics p2p_dynamics(const P2PParams& params) {
  const std::size_t L = params.buffer_length;
  if (L < 1 || L > 16) throw std::invalid_argument("buffer length must lie in 1..16");
  if (params.contact_rate < 0.0 || params.shift_rate < 0.0 || params.server_rate < 0.0) {
    throw std::invalid_argument("P2P rates must be nonnegative");
  }
  const std::size_t K = std::size_t{1} << L;
  const LocalState mask = static_cast<LocalState>(K - 1);
  return LocalDynamics("p2p", K, [params, K, mask](LocalState u, LocalState to,
                                                   const NeighbourSummary& s) {
    double rate = 0.0;
    const LocalState shifted = static_cast<LocalState>((u << 1) & mask);
    if (u != 0 && to == shifted) rate += params.shift_rate;
    if ((u & 1u) == 0 && to == (u | 1u)) rate += params.server_rate;
    const LocalState added = to & ~u;
    if (s && (to & u) == u && std::popcount(added) == 1 && added != 1u) {
      const auto j = static_cast<std::size_t>(std::countr_zero(added)) + 1;
      double sum = 0.0;
      for (std::size_t v = 0; v < K; ++v) {
        const auto count = (*s)[v];
        if (count == 0 || ((v >> (j - 1)) & 1u) == 0) continue;
        sum += count * chunk_selection(params.strategy, j, u, static_cast<LocalState>(v));
      }
      rate += params.contact_rate * sum;
    }
    return rate;
  });
}

LocalDynamics table_dynamics(std::size_t num_local_states, std::vector<RateRule> rules) {
  for (const auto& r : rules) {
    if (r.from >= num_local_states || r.to >= num_local_states) {
      throw std::invalid_argument("rule refers to a local state out of range");
    }
    if (r.from == r.to) throw std::invalid_argument("rule must change the local state");
    if (!r.per_count.empty() && r.per_count.size() != num_local_states) {
      throw std::invalid_argument("per_count must have one entry per local state");
    }
    if (r.pattern && r.pattern->size() != num_local_states) {
      throw std::invalid_argument("pattern must have one entry per local state");
    }
    if (r.base < 0.0 || std::any_of(r.per_count.begin(), r.per_count.end(), [](double c) { return c < 0.0; })) {
      throw std::invalid_argument("rule rates must be nonnegative");
    }
  }
  return LocalDynamics("table", num_local_states,
                       [rules = std::move(rules)](LocalState from, LocalState to, const NeighbourSummary& s) {
                         double rate = 0.0;
                         for (const auto& r : rules) {
                           if (r.from != from || r.to != to) continue;
                           if (r.isolated_only && s) continue;
                           if (r.pattern) {
                             if (!s) continue;
                             bool match = true;
                             for (std::size_t c = 0; c < r.pattern->size(); ++c) {
                               const auto& want = (*r.pattern)[c];
                               if (want && *want != (*s)[c]) match = false;
                             }
                             if (!match) continue;
                           }
                           rate += r.base;
                           if (s) {
                             for (std::size_t c = 0; c < r.per_count.size(); ++c) rate += r.per_count[c] * (*s)[c];
                           }
                         }
                         return rate;
                       });
}

// --- GeneratorMatrix -------------------------------------------------------

GeneratorMatrix::GeneratorMatrix(std::size_t dim, std::vector<Triplet> off_diagonal) {
  for (const auto& t : off_diagonal) {
    if (t.row == t.col) throw std::invalid_argument("generator triplets must be off-diagonal");
    if (!(t.value >= 0.0) || !std::isfinite(t.value)) {
      throw std::invalid_argument("off-diagonal generator entries must be finite and nonnegative");
    }
  }
  off_ = SparseMatrix(dim, dim, std::move(off_diagonal));
  exit_.resize(dim);
  for (std::size_t x = 0; x < dim; ++x) exit_[x] = off_.row_sum(x);
}

GeneratorMatrix GeneratorMatrix::from_dense(const Eigen::MatrixXd& dense) {
  if (dense.rows() != dense.cols()) throw std::invalid_argument("generator must be square");
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      if (i != j && dense(i, j) != 0.0) {
        t.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), dense(i, j)});
      }
    }
  }
  return GeneratorMatrix(static_cast<std::size_t>(dense.rows()), std::move(t));
}

SparseMatrix GeneratorMatrix::full() const {
  auto t = off_.triplets();
  for (std::size_t x = 0; x < dim(); ++x) t.push_back({x, x, -exit_[x]});
  return SparseMatrix(dim(), dim(), std::move(t));
}

GeneratorMatrix build_generator(const Graph& g, const LocalDynamics& dynamics, const BuildLimits& limits) {
  const std::size_t K = dynamics.num_local_states();
  const StateSpace space(g.num_vertices(), K, limits.max_states);
  std::vector<Triplet> entries;
  std::vector<LocalState> x(g.num_vertices(), 0);
  for (std::size_t index = 0; index < space.size(); ++index) {
    for (Vertex i = 0; i < g.num_vertices(); ++i) {
      const auto summary = summary_counts(neighbor_config(g, x, i), K);
      for (LocalState b = 0; b < K; ++b) {
        if (b == x[i]) continue;
        const double r = dynamics.rate(x[i], b, summary);
        if (r == 0.0) continue;
        if (entries.size() >= limits.max_nonzeros) {
          throw CapacityError("generator exceeds nonzero budget of " + std::to_string(limits.max_nonzeros));
        }
        entries.push_back({index, space.with_local(index, i, b), r});
      }
    }
    // Advance x to the next index (vertex N-1 least significant).
    for (std::size_t v = x.size(); v-- > 0;) {
      if (++x[v] < K) break;
      x[v] = 0;
    }
  }
  return GeneratorMatrix(space.size(), std::move(entries));
}

}  // namespace lumpkit
