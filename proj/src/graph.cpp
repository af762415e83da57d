#include "lumpkit/graph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>

namespace lumpkit {

namespace {

void check_vertex(const Graph& g, Vertex u) {
  if (u >= g.num_vertices()) {
    throw std::out_of_range("vertex " + std::to_string(u) + " out of range for graph with " +
                            std::to_string(g.num_vertices()) + " vertices");
  }
}

}  // namespace

Graph::Graph(std::size_t n, std::span<const Edge> edges) : adj_(n) {
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") out of range");
    }
    if (u == v) {
      throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    }
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& nb : adj_) {
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
      throw std::invalid_argument("duplicate edge");
    }
  }
  num_edges_ = edges.size();
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  const auto& nb = adj_.at(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::span<const Vertex> Graph::neighbors(Vertex u) const { return adj_.at(u); }

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (Vertex u = 0; u < adj_.size(); ++u) {
    for (Vertex v : adj_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

// --- Permutation -----------------------------------------------------------

Permutation::Permutation(std::vector<Vertex> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (Vertex v : image_) {
    if (v >= image_.size() || seen[v]) {
      throw std::invalid_argument("permutation image is not a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<Vertex> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Vertex>(i);
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<Vertex> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = static_cast<Vertex>(i);
  Permutation p;
  p.image_ = std::move(inv);
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) throw std::invalid_argument("composing permutations of different sizes");
  Permutation p;
  p.image_.resize(size());
  for (std::size_t i = 0; i < size(); ++i) p.image_[i] = image_[other.image_[i]];
  return p;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (image_[i] != i) return false;
  }
  return true;
}

// --- VertexPartition -------------------------------------------------------

VertexPartition VertexPartition::from_labels(std::span<const std::size_t> labels) {
  VertexPartition vp;
  vp.class_of_.resize(labels.size());
  std::map<std::size_t, std::size_t> relabel;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = relabel.try_emplace(labels[v], vp.classes_.size());
    if (inserted) vp.classes_.emplace_back();
    vp.class_of_[v] = it->second;
    vp.classes_[it->second].push_back(static_cast<Vertex>(v));
  }
  return vp;
}

VertexPartition VertexPartition::from_classes(std::size_t n,
                                              const std::vector<std::vector<Vertex>>& classes) {
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> labels(n, kUnset);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].empty()) throw std::invalid_argument("empty vertex class");
    for (Vertex v : classes[c]) {
      if (v >= n) throw std::invalid_argument("vertex class member out of range");
      if (labels[v] != kUnset) throw std::invalid_argument("vertex classes overlap");
      labels[v] = c;
    }
  }
  if (std::find(labels.begin(), labels.end(), kUnset) != labels.end()) {
    throw std::invalid_argument("vertex classes do not cover all vertices");
  }
  return from_labels(labels);
}

VertexPartition VertexPartition::single_class(std::size_t n) {
  std::vector<std::size_t> labels(n, 0);
  return from_labels(labels);
}

VertexPartition VertexPartition::discrete(std::size_t n) {
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i;
  return from_labels(labels);
}

bool VertexPartition::refines(const VertexPartition& coarser) const {
  if (coarser.num_vertices() != num_vertices()) return false;
  for (const auto& cls : classes_) {
    const std::size_t target = coarser.class_of(cls.front());
    for (Vertex v : cls) {
      if (coarser.class_of(v) != target) return false;
    }
  }
  return true;
}

// --- distances -------------------------------------------------------------

std::vector<std::uint32_t> distances(const Graph& g, Vertex u) {
  check_vertex(g, u);
  std::vector<std::uint32_t> dist(g.num_vertices(), kInfiniteDistance);
  std::queue<Vertex> frontier;
  dist[u] = 0;
  frontier.push(u);
  while (!frontier.empty()) {
    const Vertex x = frontier.front();
    frontier.pop();
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] == kInfiniteDistance) {
        dist[y] = dist[x] + 1;
        frontier.push(y);
      }
    }
  }
  return dist;
}

Diameter diameter(const Graph& g) {
  if (g.empty()) throw std::invalid_argument("diameter of the empty graph");
  Diameter d;
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    for (std::uint32_t x : distances(g, u)) {
      if (x == kInfiniteDistance) {
        d.connected = false;
      } else {
        d.hops = std::max(d.hops, x);
      }
    }
  }
  return d;
}

std::vector<Vertex> k_neighborhood(const Graph& g, Vertex u, std::size_t k) {
  const auto dist = distances(g, u);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < dist.size(); ++v) {
    if (dist[v] != kInfiniteDistance && dist[v] <= k) out.push_back(v);
  }
  return out;
}

InducedSubgraph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
  InducedSubgraph sub;
  sub.to_new.assign(g.num_vertices(), kNoVertex);
  for (Vertex v : vertices) check_vertex(g, v);
  sub.to_original.assign(vertices.begin(), vertices.end());
  std::sort(sub.to_original.begin(), sub.to_original.end());
  sub.to_original.erase(std::unique(sub.to_original.begin(), sub.to_original.end()),
                        sub.to_original.end());
  for (std::size_t i = 0; i < sub.to_original.size(); ++i) {
    sub.to_new[sub.to_original[i]] = static_cast<Vertex>(i);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < sub.to_original.size(); ++i) {
    for (Vertex w : g.neighbors(sub.to_original[i])) {
      const Vertex j = sub.to_new[w];
      if (j != kNoVertex && i < j) edges.emplace_back(static_cast<Vertex>(i), j);
    }
  }
  sub.graph = Graph(sub.to_original.size(), edges);
  return sub;
}

Graph relabel(const Graph& g, const Permutation& p) {
  if (p.size() != g.num_vertices()) throw std::invalid_argument("permutation size mismatch");
  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edges()) edges.emplace_back(p(u), p(v));
  return Graph(g.num_vertices(), edges);
}

}  // namespace lumpkit
