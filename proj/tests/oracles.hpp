#pragma once

// Brute-force reference computations for the tests. These deliberately avoid
// the library's algorithms: dense matrices, exhaustive permutation search,
// explicit orbit closure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "lumpkit/graph.hpp"

namespace oracle {

using lumpkit::Graph;
using lumpkit::Permutation;
using lumpkit::Vertex;
using Labels = std::vector<std::size_t>;

inline std::vector<std::vector<char>> adjacency(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
  for (const auto& [u, v] : g.edges()) a[u][v] = a[v][u] = 1;
  return a;
}

// Floyd-Warshall; -1 for unreachable.
inline std::vector<std::vector<int>> all_distances(const Graph& g) {
  const std::size_t n = g.num_vertices();
  const int inf = 1 << 20;
  auto a = adjacency(g);
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][j]) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (auto& row : d)
    for (int& x : row)
      if (x >= inf) x = -1;
  return d;
}

inline std::vector<std::vector<Vertex>> all_permutations(std::size_t n) {
  std::vector<Vertex> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<Vertex>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline bool preserves_edges(const std::vector<std::vector<char>>& a, const std::vector<std::vector<char>>& b,
                            const std::vector<Vertex>& f) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a[i][j] != b[f[i]][f[j]]) return false;
  return true;
}

inline std::vector<std::vector<Vertex>> automorphisms(const Graph& g) {
  const auto a = adjacency(g);
  std::vector<std::vector<Vertex>> out;
  for (const auto& f : all_permutations(g.num_vertices()))
    if (preserves_edges(a, a, f)) out.push_back(f);
  return out;
}

inline bool rooted_isomorphic(const std::vector<std::vector<char>>& a, Vertex ra,
                              const std::vector<std::vector<char>>& b, Vertex rb) {
  if (a.size() != b.size()) return false;
  for (const auto& f : all_permutations(a.size()))
    if (f[ra] == rb && preserves_edges(a, b, f)) return true;
  return false;
}

// Adjacency of G[N_k(u)] with u's position in it.
inline std::pair<std::vector<std::vector<char>>, Vertex> neighbourhood(const Graph& g, Vertex u, std::size_t k) {
  const auto d = all_distances(g);
  const auto a = adjacency(g);
  std::vector<Vertex> members;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (d[u][v] >= 0 && static_cast<std::size_t>(d[u][v]) <= k) members.push_back(v);
  std::vector<std::vector<char>> sub(members.size(), std::vector<char>(members.size(), 0));
  Vertex root = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] == u) root = static_cast<Vertex>(i);
    for (std::size_t j = 0; j < members.size(); ++j) sub[i][j] = a[members[i]][members[j]];
  }
  return {sub, root};
}

// Class label = smallest equivalent vertex.
inline Labels local_symmetry(const Graph& g, std::size_t k) {
  const std::size_t n = g.num_vertices();
  Labels label(n);
  for (Vertex u = 0; u < n; ++u) {
    label[u] = u;
    const auto [au, ru] = neighbourhood(g, u, k);
    for (Vertex v = 0; v < u; ++v) {
      const auto [av, rv] = neighbourhood(g, v, k);
      if (rooted_isomorphic(au, ru, av, rv)) {
        label[u] = label[v];
        break;
      }
    }
  }
  return label;
}

inline Labels aut_vertex_orbits(const Graph& g) {
  Labels label(g.num_vertices());
  std::iota(label.begin(), label.end(), 0);
  for (const auto& f : oracle::automorphisms(g))
    for (Vertex u = 0; u < g.num_vertices(); ++u) label[f[u]] = std::min(label[f[u]], label[u]);
  // One pass suffices: each orbit's minimum is mapped onto every member by some f.
  return label;
}

// --- states ---------------------------------------------------------------

inline std::size_t power(std::size_t k, std::size_t n) {
  std::size_t r = 1;
  while (n--) r *= k;
  return r;
}

inline std::vector<std::uint32_t> decode(std::size_t index, std::size_t n, std::size_t k) {
  std::vector<std::uint32_t> x(n);
  for (std::size_t i = n; i-- > 0;) {
    x[i] = static_cast<std::uint32_t>(index % k);
    index /= k;
  }
  return x;
}

inline std::size_t encode(const std::vector<std::uint32_t>& x, std::size_t k) {
  std::size_t index = 0;
  for (auto v : x) index = index * k + v;
  return index;
}

// (f.x)_i = x_{f(i)}
inline std::size_t act(const std::vector<Vertex>& f, std::size_t index, std::size_t n, std::size_t k) {
  const auto x = decode(index, n, k);
  std::vector<std::uint32_t> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[f[i]];
  return encode(y, k);
}

// Orbit labels (smallest state in orbit) under an explicit list of group
// elements, found by breadth-first closure so the list may be just generators.
inline Labels state_orbits(const std::vector<std::vector<Vertex>>& perms, std::size_t n, std::size_t k) {
  const std::size_t dim = power(k, n);
  Labels label(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    if (label[s] != dim) continue;
    std::deque<std::size_t> queue{s};
    label[s] = s;
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (const auto& f : perms) {
        const std::size_t y = act(f, x, n, k);
        if (label[y] == dim) {
          label[y] = s;
          queue.push_back(y);
        }
      }
    }
  }
  return label;
}

// Transpositions of consecutive members inside each class; these generate the
// class-preserving group.
inline std::vector<std::vector<Vertex>> class_transpositions(const std::vector<std::vector<Vertex>>& classes,
                                                             std::size_t n) {
  std::vector<std::vector<Vertex>> out;
  for (const auto& c : classes) {
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      std::vector<Vertex> f(n);
      std::iota(f.begin(), f.end(), 0);
      std::swap(f[c[i]], f[c[i + 1]]);
      out.push_back(f);
    }
  }
  if (out.empty()) {
    std::vector<Vertex> id(n);
    std::iota(id.begin(), id.end(), 0);
    out.push_back(id);
  }
  return out;
}

inline std::size_t count_classes(const Labels& labels) { return std::set<std::size_t>(labels.begin(), labels.end()).size(); }

// Same grouping: labels induce identical equivalence relations.
template <typename A, typename B>
bool same_grouping(const A& a, const B& b) {
  if (a.size() != b.size()) return false;
  std::map<std::size_t, std::size_t> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [it1, new1] = ab.emplace(a[i], b[i]);
    auto [it2, new2] = ba.emplace(b[i], a[i]);
    if (it1->second != static_cast<std::size_t>(b[i]) || it2->second != static_cast<std::size_t>(a[i])) return false;
  }
  return true;
}

// --- matrices -------------------------------------------------------------

// SIS generator from the rate formula, one flip at a time.
inline Eigen::MatrixXd sis_generator(const Graph& g, double a, double b, double eps) {
  const std::size_t n = g.num_vertices();
  const std::size_t dim = power(2, n);
  const auto adj = adjacency(g);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    const auto x = decode(s, n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      auto y = x;
      y[i] = 1 - x[i];
      double rate = b;
      if (x[i] == 0) {
        int infected = 0;
        for (std::size_t j = 0; j < n; ++j) infected += adj[i][j] && x[j] == 1;
        rate = a * infected + eps;
      }
      q(s, encode(y, 2)) += rate;
    }
    q(s, s) = -(q.row(s).sum());
  }
  return q;
}

inline Eigen::MatrixXd uniformize(const Eigen::MatrixXd& q) {
  double lambda = (-q.diagonal()).maxCoeff();
  if (lambda == 0) lambda = 1;
  return Eigen::MatrixXd::Identity(q.rows(), q.cols()) + q / lambda;
}

// Null vector of T^T - I via full-pivot LU.
inline Eigen::VectorXd stationary(const Eigen::MatrixXd& t) {
  const Eigen::MatrixXd a = t.transpose() - Eigen::MatrixXd::Identity(t.rows(), t.cols());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  Eigen::VectorXd v = lu.kernel().col(0);
  return v / v.sum();
}

inline Eigen::MatrixXd transient(const Eigen::MatrixXd& q, const Eigen::VectorXd& p0, double t) {
  const Eigen::MatrixXd e = (q * t).exp();
  return p0.transpose() * e;
}

inline Eigen::MatrixXd lump_weighted(const Eigen::MatrixXd& t, const Labels& cls, std::size_t m,
                                     const Eigen::VectorXd& w) {
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd den = Eigen::VectorXd::Zero(m);
  for (Eigen::Index u = 0; u < t.rows(); ++u) {
    den(cls[u]) += w(u);
    for (Eigen::Index v = 0; v < t.cols(); ++v) num(cls[u], cls[v]) += w(u) * t(u, v);
  }
  for (std::size_t i = 0; i < m; ++i) num.row(i) /= den(i);
  return num;
}

inline Eigen::MatrixXd pi_lift(const Eigen::MatrixXd& lumped, const Labels& cls, const Eigen::VectorXd& w) {
  const Eigen::Index n = w.size();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index u = 0; u < n; ++u)
    for (Eigen::Index v = 0; v < n; ++v) {
      double wc = 0;
      for (Eigen::Index x = 0; x < n; ++x)
        if (cls[x] == cls[v]) wc += w(x);
      out(u, v) = w(v) / wc * lumped(cls[u], cls[v]);
    }
  return out;
}

inline Eigen::MatrixXd p_lift(const Eigen::MatrixXd& lumped, const Labels& cls, const Eigen::MatrixXd& t) {
  const Eigen::Index n = t.rows();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index u = 0; u < n; ++u)
    for (Eigen::Index v = 0; v < n; ++v) {
      double block = 0;
      double size = 0;
      for (Eigen::Index x = 0; x < n; ++x)
        if (cls[x] == cls[v]) {
          block += t(u, x);
          size += 1;
        }
      out(u, v) = block > 0 ? t(u, v) / block * lumped(cls[u], cls[v]) : lumped(cls[u], cls[v]) / size;
    }
  return out;
}

inline double kl_rate(const Eigen::MatrixXd& t, const Eigen::MatrixXd& that, const Eigen::VectorXd& pi) {
  double s = 0;
  for (Eigen::Index u = 0; u < t.rows(); ++u)
    for (Eigen::Index v = 0; v < t.cols(); ++v)
      if (pi(u) > 0 && t(u, v) > 0) s += pi(u) * t(u, v) * std::log(t(u, v) / that(u, v));
  return s;
}

// Max over class pairs i != j of the spread of row mass into class j across class i.
inline double dynkin_deviation(const Eigen::MatrixXd& m, const Labels& cls) {
  std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> range;
  for (Eigen::Index u = 0; u < m.rows(); ++u) {
    std::map<std::size_t, double> mass;
    for (Eigen::Index v = 0; v < m.cols(); ++v) mass[cls[v]] += m(u, v);
    for (Eigen::Index v = 0; v < m.cols(); ++v) mass.emplace(cls[v], 0.0);
    for (const auto& [j, x] : mass) {
      if (j == cls[u]) continue;
      auto [it, fresh] = range.emplace(std::make_pair(cls[u], j), std::make_pair(x, x));
      if (!fresh) {
        it->second.first = std::min(it->second.first, x);
        it->second.second = std::max(it->second.second, x);
      }
    }
  }
  double dev = 0;
  for (const auto& [key, r] : range) dev = std::max(dev, r.second - r.first);
  return dev;
}

// Both sides of the rho recursion for coarse pair (i, j), summed state by state.
struct RecursionSides {
  double lhs = 0, rhs = 0;
  bool all_fine_positive = true;
};
inline RecursionSides rho_sides(const Eigen::MatrixXd& t, const Eigen::VectorXd& pi, const Labels& coarse,
                                const Labels& fine, std::size_t i, std::size_t j) {
  const Eigen::Index n = t.rows();
  auto weight = [&](const Labels& cls, std::size_t c) {
    double w = 0;
    for (Eigen::Index x = 0; x < n; ++x)
      if (cls[x] == c) w += pi(x);
    return w;
  };
  auto flow = [&](const Labels& cls, std::size_t a, std::size_t b) {
    double f = 0;
    for (Eigen::Index x = 0; x < n; ++x)
      for (Eigen::Index y = 0; y < n; ++y)
        if (cls[x] == a && cls[y] == b) f += pi(x) * t(x, y);
    return f;
  };
  RecursionSides s;
  const double fc = flow(coarse, i, j);
  s.rhs = fc > 0 ? weight(coarse, i) * weight(coarse, j) / fc * fc : 0.0;
  std::set<std::size_t> fi, fj;
  for (Eigen::Index x = 0; x < n; ++x) {
    if (coarse[x] == i) fi.insert(fine[x]);
    if (coarse[x] == j) fj.insert(fine[x]);
  }
  for (std::size_t p : fi)
    for (std::size_t q : fj) {
      const double f = flow(fine, p, q);
      if (f > 0) {
        s.lhs += f * (weight(fine, p) * weight(fine, q) / f);
      } else {
        s.all_fine_positive = false;
      }
    }
  return s;
}

// Minimal transposition count by breadth-first search over S_n.
inline std::size_t transposition_distance(const std::vector<Vertex>& target) {
  const std::size_t n = target.size();
  std::vector<Vertex> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::map<std::vector<Vertex>, std::size_t> dist{{id, 0}};
  std::deque<std::vector<Vertex>> queue{id};
  while (!queue.empty()) {
    auto p = queue.front();
    queue.pop_front();
    if (p == target) return dist[p];
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        auto q = p;
        std::swap(q[a], q[b]);
        if (dist.emplace(q, dist[p] + 1).second) queue.push_back(q);
      }
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace oracle
