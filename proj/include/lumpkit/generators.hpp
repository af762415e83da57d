#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "lumpkit/graph.hpp"

namespace lumpkit {

/// Seeded random source for graph generation and sampling.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the C++ standard.
/// Uniform variates are derived from raw engine output here rather than via
/// <random> distributions, whose algorithms are implementation-defined, so a
/// given seed produces the same graphs on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on {0, ..., n-1} by rejection; n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

enum class GraphKind { complete, star, cycle, path, erdos_renyi, barabasi_albert, watts_strogatz };

/// `n` is the vertex count for every kind. `p` is the edge probability (ER) or
/// rewiring probability (WS); `m` the attachment count (BA); `degree` the even
/// ring-lattice degree (WS).
struct GraphParams {
  std::size_t n = 0;
  double p = 0.0;
  std::size_t m = 0;
  std::size_t degree = 0;
};

GraphKind parse_graph_kind(std::string_view name);
std::string to_string(GraphKind kind);

Graph complete_graph(std::size_t n);
/// Vertex 0 is the centre, 1..n-1 are leaves.
Graph star_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);

/// Each pair u < v, in lexicographic order, is an edge iff uniform01() < p.
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Vertices 0..m-1 start as a clique. Each later vertex attaches m edges to
/// distinct earlier vertices, drawn one at a time with probability
/// proportional to current degree among those not yet chosen (uniform if all
/// remaining degrees are zero). Edge count is C(m,2) + (n-m)m.
Graph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

/// Ring lattice where each vertex links to degree/2 neighbours on each side.
/// Lattice edges (u, u+j) are visited for j = 1..degree/2, u = 0..n-1; each is
/// rewired with probability p to (u, w), w uniform among vertices that are
/// neither u nor current neighbours of u. If no such w exists the edge stays.
Graph watts_strogatz(std::size_t n, std::size_t degree, double p, std::uint64_t seed);

/// Dispatch on kind; throws std::invalid_argument on invalid parameters.
Graph generate(GraphKind kind, const GraphParams& params, std::uint64_t seed);

}  // namespace lumpkit
