#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace lumpkit {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Hop distance used for vertices in a different connected component.
inline constexpr std::uint32_t kInfiniteDistance = std::numeric_limits<std::uint32_t>::max();

/// Undirected simple graph on vertices 0..n-1. Immutable once constructed.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}

  /// Throws std::invalid_argument on self-loops, duplicates (in either
  /// orientation) and out-of-range endpoints.
  Graph(std::size_t n, std::span<const Edge> edges);

  std::size_t num_vertices() const { return adj_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  bool empty() const { return adj_.empty(); }

  bool adjacent(Vertex u, Vertex v) const;
  std::span<const Vertex> neighbors(Vertex u) const;
  std::size_t degree(Vertex u) const { return neighbors(u).size(); }

  /// Edges as (u, v) with u < v, lexicographically sorted.
  std::vector<Edge> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::vector<Vertex>> adj_;  // sorted
  std::size_t num_edges_ = 0;
};

/// A bijection on 0..n-1, stored as its image array.
class Permutation {
 public:
  Permutation() = default;
  /// Throws std::invalid_argument unless `image` is a bijection.
  explicit Permutation(std::vector<Vertex> image);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return image_.size(); }
  Vertex operator()(Vertex i) const { return image_[i]; }
  std::span<const Vertex> image() const { return image_; }

  Permutation inverse() const;
  /// (*this ∘ other)(i) = (*this)(other(i)).
  Permutation compose(const Permutation& other) const;
  bool is_identity() const;

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<Vertex> image_;
};

/// Disjoint cover of 0..n-1. Classes are kept in canonical order: sorted by
/// smallest member, members ascending.
class VertexPartition {
 public:
  VertexPartition() = default;

  /// Groups vertices with equal labels. Labels are arbitrary integers.
  static VertexPartition from_labels(std::span<const std::size_t> labels);
  static VertexPartition from_classes(std::size_t n, const std::vector<std::vector<Vertex>>& classes);
  static VertexPartition single_class(std::size_t n);
  static VertexPartition discrete(std::size_t n);

  std::size_t num_vertices() const { return class_of_.size(); }
  std::size_t num_classes() const { return classes_.size(); }
  std::size_t class_of(Vertex v) const { return class_of_[v]; }
  const std::vector<std::vector<Vertex>>& classes() const { return classes_; }

  /// Every class of *this is contained in a class of `coarser`.
  bool refines(const VertexPartition& coarser) const;

  bool operator==(const VertexPartition&) const = default;

 private:
  std::vector<std::size_t> class_of_;
  std::vector<std::vector<Vertex>> classes_;
};

/// BFS hop distances from `u`; unreachable vertices get kInfiniteDistance.
std::vector<std::uint32_t> distances(const Graph& g, Vertex u);

struct Diameter {
  std::uint32_t hops = 0;  ///< max over connected pairs
  bool connected = true;
  bool infinite() const { return !connected; }
};

/// Throws std::invalid_argument on the empty graph.
Diameter diameter(const Graph& g);

/// N_k(u) = {v : d(u, v) <= k}, ascending.
std::vector<Vertex> k_neighborhood(const Graph& g, Vertex u, std::size_t k);

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> to_original;  ///< new label -> old label
  std::vector<Vertex> to_new;       ///< old label -> new label, kNoVertex if absent
};

/// Subgraph induced by `vertices`; new labels follow ascending old labels.
InducedSubgraph induced_subgraph(const Graph& g, std::span<const Vertex> vertices);

/// Relabels g so that vertex i becomes p(i).
Graph relabel(const Graph& g, const Permutation& p);

/// True iff an edge-preserving bijection g1 -> g2 maps r1 to r2.
bool rooted_isomorphic(const Graph& g1, Vertex r1, const Graph& g2, Vertex r2);

/// Classes of k-local symmetry. k = 0 yields the single-class partition.
VertexPartition local_symmetry_partition(const Graph& g, std::size_t k);

struct AutomorphismLimits {
  std::size_t max_vertices = 16;
  std::size_t max_group_size = 1'000'000;
};

/// All of Aut(G), sorted. Throws CapacityError beyond the limits.
std::vector<Permutation> automorphisms(const Graph& g, const AutomorphismLimits& limits = {});

/// Orbits of Aut(G) on vertices. Searches for one witness automorphism per
/// candidate pair rather than enumerating the group.
VertexPartition automorphism_vertex_orbits(const Graph& g, const AutomorphismLimits& limits = {});

}  // namespace lumpkit
