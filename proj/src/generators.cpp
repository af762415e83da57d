#include "lumpkit/generators.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace lumpkit {

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index over an empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "complete") return GraphKind::complete;
  if (name == "star") return GraphKind::star;
  if (name == "cycle") return GraphKind::cycle;
  if (name == "path") return GraphKind::path;
  if (name == "erdos_renyi") return GraphKind::erdos_renyi;
  if (name == "barabasi_albert") return GraphKind::barabasi_albert;
  if (name == "watts_strogatz") return GraphKind::watts_strogatz;
  throw std::invalid_argument("unknown graph kind '" + std::string(name) + "'");
}

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::complete: return "complete";
    case GraphKind::star: return "star";
    case GraphKind::cycle: return "cycle";
    case GraphKind::path: return "path";
    case GraphKind::erdos_renyi: return "erdos_renyi";
    case GraphKind::barabasi_albert: return "barabasi_albert";
    case GraphKind::watts_strogatz: return "watts_strogatz";
  }
  return "unknown";
}

namespace {

void require_vertices(std::size_t n) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
}

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0, 1]");
}

Graph from_adjacency_sets(const std::vector<std::set<Vertex>>& adj) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < adj.size(); ++u) {
    for (Vertex v : adj[u]) {
      if (u < v) edges.emplace_back(u, v);
    }
  }
  return Graph(adj.size(), edges);
}

}  // namespace

Graph complete_graph(std::size_t n) {
  require_vertices(n);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, edges);
}

Graph star_graph(std::size_t n) {
  require_vertices(n);
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace_back(0, v);
  return Graph(n, edges);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) edges.emplace_back(u, static_cast<Vertex>((u + 1) % n));
  return Graph(n, edges);
}

Graph path_graph(std::size_t n) {
  require_vertices(n);
  std::vector<Edge> edges;
  for (Vertex u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return Graph(n, edges);
}

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  require_vertices(n);
  require_probability(p);
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (rng.uniform01() < p) edges.emplace_back(u, v);
    }
  }
  return Graph(n, edges);
}

Graph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  require_vertices(n);
  if (m < 1 || m > n) throw std::invalid_argument("barabasi_albert needs 1 <= m <= n");
  Rng rng(seed);
  std::vector<std::set<Vertex>> adj(n);
  for (Vertex u = 0; u < m; ++u) {
    for (Vertex v = u + 1; v < m; ++v) {
      adj[u].insert(v);
      adj[v].insert(u);
    }
  }
  for (Vertex newcomer = static_cast<Vertex>(m); newcomer < n; ++newcomer) {
    std::vector<Vertex> pool(newcomer);
    for (Vertex v = 0; v < newcomer; ++v) pool[v] = v;
    for (std::size_t draw = 0; draw < m; ++draw) {
      std::size_t total = 0;
      for (Vertex v : pool) total += adj[v].size();
      std::size_t pick = 0;
      if (total == 0) {
        pick = rng.uniform_index(pool.size());
      } else {
        std::uint64_t ticket = rng.uniform_index(total);
        while (ticket >= adj[pool[pick]].size()) {
          ticket -= adj[pool[pick]].size();
          ++pick;
        }
      }
      const Vertex target = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      adj[newcomer].insert(target);
      adj[target].insert(newcomer);
    }
  }
  return from_adjacency_sets(adj);
}

Graph watts_strogatz(std::size_t n, std::size_t degree, double p, std::uint64_t seed) {
  require_vertices(n);
  require_probability(p);
  if (degree % 2 != 0 || degree >= n) {
    throw std::invalid_argument("watts_strogatz needs an even degree below n");
  }
  Rng rng(seed);
  std::vector<std::set<Vertex>> adj(n);
  for (Vertex u = 0; u < n; ++u) {
    for (std::size_t j = 1; j <= degree / 2; ++j) {
      const auto v = static_cast<Vertex>((u + j) % n);
      adj[u].insert(v);
      adj[v].insert(u);
    }
  }
  for (std::size_t j = 1; j <= degree / 2; ++j) {
    for (Vertex u = 0; u < n; ++u) {
      const auto v = static_cast<Vertex>((u + j) % n);
      if (!(rng.uniform01() < p)) continue;
      if (!adj[u].contains(v)) continue;  // already rewired away
      std::vector<Vertex> options;
      for (Vertex w = 0; w < n; ++w) {
        if (w != u && !adj[u].contains(w)) options.push_back(w);
      }
      if (options.empty()) continue;
      const Vertex w = options[rng.uniform_index(options.size())];
      adj[u].erase(v);
      adj[v].erase(u);
      adj[u].insert(w);
      adj[w].insert(u);
    }
  }
  return from_adjacency_sets(adj);
}

Graph generate(GraphKind kind, const GraphParams& params, std::uint64_t seed) {
  switch (kind) {
    case GraphKind::complete: return complete_graph(params.n);
    case GraphKind::star: return star_graph(params.n);
    case GraphKind::cycle: return cycle_graph(params.n);
    case GraphKind::path: return path_graph(params.n);
    case GraphKind::erdos_renyi: return erdos_renyi(params.n, params.p, seed);
    case GraphKind::barabasi_albert: return barabasi_albert(params.n, params.m, seed);
    case GraphKind::watts_strogatz: return watts_strogatz(params.n, params.degree, params.p, seed);
  }
  throw std::invalid_argument("unknown graph kind");
}

}  // namespace lumpkit
