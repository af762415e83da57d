// Backtracking isomorphism search shared by rooted isomorphism, Aut(G)
// enumeration and vertex-orbit computation.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>

#include "lumpkit/errors.hpp"
#include "lumpkit/graph.hpp"

namespace lumpkit {

namespace {

using Colouring = std::vector<std::size_t>;

// Iterated 1-dimensional colour refinement. New colour ids are assigned in
// sorted signature order, so the result only depends on the isomorphism class
// of (g, initial colouring).
Colouring refine_colours(const Graph& g, Colouring colours) {
  const std::size_t n = g.num_vertices();
  std::size_t num_colours = 0;
  {
    auto sorted = colours;
    std::sort(sorted.begin(), sorted.end());
    num_colours = static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  }
  while (true) {
    std::vector<std::vector<std::size_t>> signature(n);
    for (Vertex v = 0; v < n; ++v) {
      auto& sig = signature[v];
      sig.push_back(colours[v]);
      for (Vertex w : g.neighbors(v)) sig.push_back(colours[w]);
      std::sort(sig.begin() + 1, sig.end());
    }
    std::map<std::vector<std::size_t>, std::size_t> ids;
    for (const auto& sig : signature) ids.emplace(sig, 0);
    std::size_t next = 0;
    for (auto& [sig, id] : ids) id = next++;
    Colouring refined(n);
    for (Vertex v = 0; v < n; ++v) refined[v] = ids.at(signature[v]);
    colours = std::move(refined);
    if (ids.size() == num_colours) return colours;
    num_colours = ids.size();
  }
}

std::vector<std::uint8_t> adjacency_matrix(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint8_t> m(n * n, 0);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v : g.neighbors(u)) m[u * n + v] = 1;
  }
  return m;
}

class Matcher {
 public:
  Matcher(const Graph& a, const Graph& b, Colouring colour_a, Colouring colour_b)
      : a_(a), b_(b), n_(a.num_vertices()), colour_a_(std::move(colour_a)),
        colour_b_(std::move(colour_b)), adj_a_(adjacency_matrix(a)), adj_b_(adjacency_matrix(b)) {}

  // Calls visit(mapping) for every colour-preserving isomorphism a -> b
  // (respecting `fixed`) until visit returns false. Returns false if stopped.
  template <class Visit>
  bool search(std::optional<Edge> fixed, Visit&& visit) {
    if (n_ != b_.num_vertices() || a_.num_edges() != b_.num_edges()) return true;
    if (fixed && colour_a_[fixed->first] != colour_b_[fixed->second]) return true;
    build_order(fixed);
    mapping_.assign(n_, kNoVertex);
    used_.assign(n_, 0);
    fixed_ = fixed;
    return extend(0, visit);
  }

 private:
  void build_order(std::optional<Edge> fixed) {
    std::map<std::size_t, std::size_t> class_size;
    for (auto c : colour_a_) ++class_size[c];
    order_.clear();
    anchor_.clear();
    std::vector<std::uint8_t> placed(n_, 0);
    std::vector<std::size_t> placed_neighbours(n_, 0);
    for (std::size_t step = 0; step < n_; ++step) {
      Vertex best = kNoVertex;
      if (step == 0 && fixed) {
        best = fixed->first;
      } else {
        for (Vertex v = 0; v < n_; ++v) {
          if (placed[v]) continue;
          if (best == kNoVertex || placed_neighbours[v] > placed_neighbours[best] ||
              (placed_neighbours[v] == placed_neighbours[best] &&
               class_size[colour_a_[v]] < class_size[colour_a_[best]])) {
            best = v;
          }
        }
      }
      Vertex anchor = kNoVertex;
      for (Vertex w : a_.neighbors(best)) {
        if (placed[w]) {
          anchor = w;
          break;
        }
      }
      order_.push_back(best);
      anchor_.push_back(anchor);
      placed[best] = 1;
      for (Vertex w : a_.neighbors(best)) ++placed_neighbours[w];
    }
  }

  bool consistent(std::size_t depth, Vertex v, Vertex w) const {
    if (used_[w] || colour_a_[v] != colour_b_[w]) return false;
    for (std::size_t e = 0; e < depth; ++e) {
      const Vertex u = order_[e];
      if (adj_a_[u * n_ + v] != adj_b_[mapping_[u] * n_ + w]) return false;
    }
    return true;
  }

  template <class Visit>
  bool extend(std::size_t depth, Visit& visit) {
    if (depth == n_) return visit(std::span<const Vertex>(mapping_));
    const Vertex v = order_[depth];
    auto try_candidate = [&](Vertex w) {
      if (!consistent(depth, v, w)) return true;
      mapping_[v] = w;
      used_[w] = 1;
      const bool keep_going = extend(depth + 1, visit);
      used_[w] = 0;
      mapping_[v] = kNoVertex;
      return keep_going;
    };
    if (depth == 0 && fixed_) return try_candidate(fixed_->second);
    if (anchor_[depth] != kNoVertex) {
      for (Vertex w : b_.neighbors(mapping_[anchor_[depth]])) {
        if (!try_candidate(w)) return false;
      }
      return true;
    }
    for (Vertex w = 0; w < n_; ++w) {
      if (!try_candidate(w)) return false;
    }
    return true;
  }

  const Graph& a_;
  const Graph& b_;
  std::size_t n_;
  Colouring colour_a_, colour_b_;
  std::vector<std::uint8_t> adj_a_, adj_b_;
  std::vector<Vertex> order_, anchor_, mapping_;
  std::vector<std::uint8_t> used_;
  std::optional<Edge> fixed_;
};

// Colours for g seeded by k = 1 local symmetry and then refined.
Colouring automorphism_colouring(const Graph& g) {
  const auto seed = local_symmetry_partition(g, 1);
  Colouring colours(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) colours[v] = seed.class_of(v);
  return refine_colours(g, std::move(colours));
}

void check_limits(const Graph& g, const AutomorphismLimits& limits) {
  if (g.num_vertices() > limits.max_vertices) {
    throw CapacityError("automorphism search limited to " + std::to_string(limits.max_vertices) +
                        " vertices, graph has " + std::to_string(g.num_vertices()));
  }
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

bool rooted_isomorphic(const Graph& g1, Vertex r1, const Graph& g2, Vertex r2) {
  if (r1 >= g1.num_vertices() || r2 >= g2.num_vertices()) {
    throw std::out_of_range("root out of range");
  }
  const std::size_t n = g1.num_vertices();
  if (n != g2.num_vertices() || g1.num_edges() != g2.num_edges()) return false;
  if (g1.degree(r1) != g2.degree(r2)) return false;

  // Refine on the disjoint union so colours are comparable across g1 and g2.
  std::vector<Edge> edges = g1.edges();
  for (const auto& [u, v] : g2.edges()) {
    edges.emplace_back(static_cast<Vertex>(u + n), static_cast<Vertex>(v + n));
  }
  const Graph both(2 * n, edges);
  Colouring initial(2 * n, 0);
  initial[r1] = 1;
  initial[r2 + n] = 1;
  const Colouring refined = refine_colours(both, std::move(initial));
  Colouring c1(refined.begin(), refined.begin() + static_cast<std::ptrdiff_t>(n));
  Colouring c2(refined.begin() + static_cast<std::ptrdiff_t>(n), refined.end());
  {
    auto s1 = c1, s2 = c2;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    if (s1 != s2) return false;
  }
  Matcher matcher(g1, g2, std::move(c1), std::move(c2));
  bool found = false;
  matcher.search(Edge{r1, r2}, [&](std::span<const Vertex>) {
    found = true;
    return false;
  });
  return found;
}

VertexPartition local_symmetry_partition(const Graph& g, std::size_t k) {
  const std::size_t n = g.num_vertices();
  if (k == 0) return VertexPartition::single_class(n);

  struct Rooted {
    InducedSubgraph sub;
    Vertex root;
  };
  using Key = std::vector<std::size_t>;
  std::vector<Rooted> rooted;
  std::vector<Key> keys;
  rooted.reserve(n);
  for (Vertex u = 0; u < n; ++u) {
    const auto nb = k_neighborhood(g, u, k);
    InducedSubgraph sub = induced_subgraph(g, nb);
    const Vertex root = sub.to_new[u];
    Key key{sub.graph.num_vertices(), sub.graph.num_edges()};
    std::vector<std::size_t> degrees, dist_profile;
    for (Vertex v = 0; v < sub.graph.num_vertices(); ++v) degrees.push_back(sub.graph.degree(v));
    for (auto d : distances(sub.graph, root)) dist_profile.push_back(d);
    std::sort(degrees.begin(), degrees.end());
    std::sort(dist_profile.begin(), dist_profile.end());
    key.insert(key.end(), degrees.begin(), degrees.end());
    key.insert(key.end(), dist_profile.begin(), dist_profile.end());
    rooted.push_back({std::move(sub), root});
    keys.push_back(std::move(key));
  }

  std::map<Key, std::vector<std::size_t>> reps_by_key;  // key -> class representatives
  std::vector<std::size_t> labels(n);
  for (Vertex u = 0; u < n; ++u) {
    auto& reps = reps_by_key[keys[u]];
    bool placed = false;
    for (std::size_t rep : reps) {
      if (rooted_isomorphic(rooted[rep].sub.graph, rooted[rep].root, rooted[u].sub.graph,
                            rooted[u].root)) {
        labels[u] = rep;
        placed = true;
        break;
      }
    }
    if (!placed) {
      reps.push_back(u);
      labels[u] = u;
    }
  }
  return VertexPartition::from_labels(labels);
}

std::vector<Permutation> automorphisms(const Graph& g, const AutomorphismLimits& limits) {
  check_limits(g, limits);
  const Colouring colours = automorphism_colouring(g);
  Matcher matcher(g, g, colours, colours);
  std::vector<Permutation> out;
  matcher.search(std::nullopt, [&](std::span<const Vertex> mapping) {
    if (out.size() >= limits.max_group_size) {
      throw CapacityError("automorphism group exceeds " + std::to_string(limits.max_group_size) +
                          " elements");
    }
    out.emplace_back(std::vector<Vertex>(mapping.begin(), mapping.end()));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

VertexPartition automorphism_vertex_orbits(const Graph& g, const AutomorphismLimits& limits) {
  check_limits(g, limits);
  const std::size_t n = g.num_vertices();
  const Colouring colours = automorphism_colouring(g);
  Matcher matcher(g, g, colours, colours);
  UnionFind orbits(n);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex u = 0; u < v; ++u) {
      if (orbits.find(u) != u || colours[u] != colours[v]) continue;  // only orbit representatives
      if (orbits.find(v) == u) continue;
      matcher.search(Edge{u, v}, [&](std::span<const Vertex> mapping) {
        for (Vertex i = 0; i < n; ++i) orbits.unite(i, mapping[i]);
        return false;
      });
    }
  }
  std::vector<std::size_t> labels(n);
  for (Vertex v = 0; v < n; ++v) labels[v] = orbits.find(v);
  return VertexPartition::from_labels(labels);
}

}  // namespace lumpkit
