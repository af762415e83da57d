#include "lumpkit/markov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lumpkit/errors.hpp"

namespace lumpkit {

TransitionMatrix::TransitionMatrix(SparseMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("transition matrix must be square");
  for (std::size_t u = 0; u < m_.rows(); ++u) {
    double sum = 0.0;
    for (double v : m_.row(u).values) {
      if (!(v >= 0.0) || v > 1.0 + tol) {
        throw std::invalid_argument("transition probability out of [0, 1] in row " + std::to_string(u));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream msg;
      msg << "row " << u << " sums to " << sum << ", not 1";
      throw std::invalid_argument(msg.str());
    }
  }
}

TransitionMatrix TransitionMatrix::from_lumped(const LumpedMatrix& lumped, double tol) {
  if (lumped.kind != MatrixKind::stochastic) throw std::invalid_argument("lumped matrix is not stochastic");
  return TransitionMatrix(SparseMatrix::from_dense(lumped.values), tol);
}

Uniformized uniformize(const GeneratorMatrix& q) {
  double lambda = 0.0;
  for (std::size_t x = 0; x < q.dim(); ++x) lambda = std::max(lambda, q.exit_rate(x));
  if (lambda == 0.0) lambda = 1.0;
  std::vector<Triplet> t;
  t.reserve(q.off_diagonal().nonzeros() + q.dim());
  for (std::size_t x = 0; x < q.dim(); ++x) {
    const auto row = q.off_diagonal().row(x);
    for (std::size_t k = 0; k < row.size(); ++k) t.push_back({x, row.cols[k], row.values[k] / lambda});
    t.push_back({x, x, (lambda - q.exit_rate(x)) / lambda});
  }
  return {TransitionMatrix(SparseMatrix(q.dim(), q.dim(), std::move(t))), lambda};
}

// --- irreducibility --------------------------------------------------------

std::vector<std::vector<std::size_t>> closed_classes(const SparseMatrix& t) {
  const std::size_t n = t.rows();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), component(n, kUnvisited);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  // Iterative Tarjan: frames of (vertex, next edge offset).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, edge] = frames.back();
      const auto row = t.row(v);
      if (edge < row.size()) {
        const std::size_t w = row.cols[edge++];
        if (row.values[edge - 1] <= 0.0) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          component[w] = components.size();
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }

  std::vector<char> closed(components.size(), 1);
  for (std::size_t v = 0; v < n; ++v) {
    const auto row = t.row(v);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row.values[k] > 0.0 && component[row.cols[k]] != component[v]) closed[component[v]] = 0;
    }
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (closed[c]) out.push_back(components[c]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_irreducible(const SparseMatrix& t) {
  const auto closed = closed_classes(t);
  return closed.size() == 1 && closed.front().size() == t.rows();
}

// --- stationary distribution -----------------------------------------------

double stationarity_residual(const SparseMatrix& t, std::span<const double> p) {
  const auto next = t.left_multiply(p);
  double r = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) r += std::abs(next[i] - p[i]);
  return r;
}

namespace {

void normalise(std::vector<double>& p) {
  double sum = 0.0;
  for (double& x : p) {
    x = std::max(x, 0.0);
    sum += x;
  }
  for (double& x : p) x /= sum;
}

std::vector<double> dense_stationary(const SparseMatrix& t) {
  const auto n = static_cast<Eigen::Index>(t.rows());
  Eigen::MatrixXd a = t.to_dense().transpose();
  a.diagonal().array() -= 1.0;
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd x = lu.solve(b);
  for (int refine = 0; refine < 2; ++refine) x += lu.solve(b - a * x);
  std::vector<double> p(x.data(), x.data() + n);
  normalise(p);
  return p;
}

}  // namespace

StationaryDist stationary(const TransitionMatrix& t, const StationaryOptions& options) {
  const auto closed = closed_classes(t.matrix());
  if (closed.size() != 1 || closed.front().size() != t.dim()) {
    std::ostringstream msg;
    msg << "chain is reducible; closed classes:";
    for (const auto& c : closed) {
      msg << " {";
      for (std::size_t k = 0; k < c.size() && k < 8; ++k) msg << (k ? "," : "") << c[k];
      if (c.size() > 8) msg << ",... (" << c.size() << " states)";
      msg << "}";
    }
    throw ReducibleChainError(msg.str(), closed);
  }

  StationaryDist out;
  StationaryMethod method = options.method;
  if (method == StationaryMethod::automatic) {
    method = t.dim() <= options.dense_limit ? StationaryMethod::dense : StationaryMethod::power;
  }
  out.method = method;
  if (method == StationaryMethod::dense) {
    out.pi = dense_stationary(t.matrix());
    out.residual = stationarity_residual(t.matrix(), out.pi);
    return out;
  }

  std::vector<double> p(t.dim(), 1.0 / static_cast<double>(t.dim()));
  const double target = options.residual_tol * 1e-3;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    const auto next = t.matrix().left_multiply(p);
    double residual = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) residual += std::abs(next[i] - p[i]);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.5 * (p[i] + next[i]);
    normalise(p);
    out.iterations = it;
    if (residual <= target) break;
  }
  out.pi = std::move(p);
  out.residual = stationarity_residual(t.matrix(), out.pi);
  if (out.residual > options.residual_tol) {
    std::ostringstream msg;
    msg << "power iteration stopped at residual " << out.residual << " after " << out.iterations << " iterations";
    throw std::runtime_error(msg.str());
  }
  return out;
}

// --- liftings --------------------------------------------------------------

namespace {

std::vector<double> class_weights(const StatePartition& partition, std::span<const double> w) {
  if (w.size() != partition.dim()) throw std::invalid_argument("weight vector length mismatch");
  std::vector<double> out(partition.num_classes(), 0.0);
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (w[s] < 0.0) throw std::invalid_argument("weights must be nonnegative");
    out[partition.class_of(s)] += w[s];
  }
  for (std::size_t c = 0; c < out.size(); ++c) {
    if (!(out[c] > 0.0)) throw std::invalid_argument("class " + std::to_string(c) + " has zero total weight");
  }
  return out;
}

void check_lumped(const LumpedMatrix& lumped, const StatePartition& partition) {
  if (lumped.size() != partition.num_classes()) throw std::invalid_argument("lumped matrix size mismatch");
  if (lumped.kind != MatrixKind::stochastic) throw std::invalid_argument("lifting needs a stochastic lumped matrix");
}

double lumped_entry(const LumpedMatrix& lumped, std::size_t i, std::size_t j) {
  return lumped.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

// Mass of one row of T per class, reusing a dense scratch buffer.
class RowBlocks {
 public:
  explicit RowBlocks(std::size_t classes) : mass_(classes, 0.0) {}
  void load(SparseMatrix::RowView row, const StatePartition& partition) {
    for (std::size_t c : touched_) mass_[c] = 0.0;
    touched_.clear();
    for (std::size_t k = 0; k < row.size(); ++k) {
      const std::size_t c = partition.class_of(row.cols[k]);
      if (mass_[c] == 0.0) touched_.push_back(c);
      mass_[c] += row.values[k];
    }
  }
  double operator[](std::size_t c) const { return mass_[c]; }

 private:
  std::vector<double> mass_;
  std::vector<std::size_t> touched_;
};

}  // namespace

TransitionMatrix pi_lift(const LumpedMatrix& lumped, const StatePartition& partition, std::span<const double> w) {
  check_lumped(lumped, partition);
  const auto weight = class_weights(partition, w);
  std::vector<Triplet> t;
  for (std::size_t u = 0; u < partition.dim(); ++u) {
    const std::size_t i = partition.class_of(u);
    for (std::size_t j = 0; j < partition.num_classes(); ++j) {
      const double tl = lumped_entry(lumped, i, j);
      if (tl == 0.0) continue;
      for (std::size_t v : partition.classes()[j]) {
        if (w[v] > 0.0) t.push_back({u, v, w[v] / weight[j] * tl});
      }
    }
  }
  return TransitionMatrix(SparseMatrix(partition.dim(), partition.dim(), std::move(t)), 1e-9);
}

TransitionMatrix p_lift(const LumpedMatrix& lumped, const StatePartition& partition, const TransitionMatrix& t) {
  check_lumped(lumped, partition);
  if (t.dim() != partition.dim()) throw std::invalid_argument("transition matrix dimension mismatch");
  RowBlocks blocks(partition.num_classes());
  std::vector<Triplet> out;
  for (std::size_t u = 0; u < t.dim(); ++u) {
    const std::size_t i = partition.class_of(u);
    const auto row = t.row(u);
    blocks.load(row, partition);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const std::size_t j = partition.class_of(row.cols[k]);
      out.push_back({u, row.cols[k], row.values[k] / blocks[j] * lumped_entry(lumped, i, j)});
    }
    for (std::size_t j = 0; j < partition.num_classes(); ++j) {
      const double tl = lumped_entry(lumped, i, j);
      if (tl == 0.0 || blocks[j] > 0.0) continue;
      const auto& members = partition.classes()[j];
      for (std::size_t v : members) out.push_back({u, v, tl / static_cast<double>(members.size())});
    }
  }
  return TransitionMatrix(SparseMatrix(t.dim(), t.dim(), std::move(out)), 1e-9);
}

double kl_rate(const TransitionMatrix& t, const TransitionMatrix& lifted, std::span<const double> pi) {
  if (t.dim() != lifted.dim() || pi.size() != t.dim()) throw std::invalid_argument("dimension mismatch");
  double sum = 0.0;
  for (std::size_t u = 0; u < t.dim(); ++u) {
    if (pi[u] == 0.0) continue;
    const auto row = t.row(u);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const std::size_t v = row.cols[k];
      const double p = row.values[k];
      const double q = lifted.at(u, v);
      if (q <= 0.0) {
        throw AbsoluteContinuityError("reference kernel has no mass at (" + std::to_string(u) + ", " +
                                          std::to_string(v) + ")",
                                      u, v);
      }
      sum += pi[u] * p * std::log(p / q);
    }
  }
  return std::max(sum, 0.0);
}

LiftingKL lifting_kl(const TransitionMatrix& t, const StatePartition& partition, std::span<const double> w) {
  const LumpedMatrix lumped = lump_weighted(t, partition, w);
  const auto weight = class_weights(partition, w);
  RowBlocks blocks(partition.num_classes());
  LiftingKL kl;
  for (std::size_t u = 0; u < t.dim(); ++u) {
    if (w[u] == 0.0) continue;
    const std::size_t i = partition.class_of(u);
    const auto row = t.row(u);
    blocks.load(row, partition);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const std::size_t v = row.cols[k];
      const std::size_t j = partition.class_of(v);
      const double p = row.values[k];
      const double tl = lumped_entry(lumped, i, j);
      const double via_pi = w[v] / weight[j] * tl;
      if (via_pi <= 0.0) {
        throw AbsoluteContinuityError("pi-lifting has no mass at (" + std::to_string(u) + ", " +
                                          std::to_string(v) + ")",
                                      u, v);
      }
      kl.pi_lifting += w[u] * p * std::log(p / via_pi);
      kl.p_lifting += w[u] * p * std::log(blocks[j] / tl);
    }
  }
  kl.pi_lifting = std::max(kl.pi_lifting, 0.0);
  kl.p_lifting = std::max(kl.p_lifting, 0.0);
  return kl;
}

// --- rho diagnostics -------------------------------------------------------

RhoTable rho_table(const TransitionMatrix& t, const StatePartition& partition, std::span<const double> pi) {
  if (pi.size() != t.dim() || partition.dim() != t.dim()) throw std::invalid_argument("dimension mismatch");
  const auto m = static_cast<Eigen::Index>(partition.num_classes());
  RhoTable table;
  table.flow = Eigen::MatrixXd::Zero(m, m);
  table.class_weight.assign(partition.num_classes(), 0.0);
  for (std::size_t u = 0; u < t.dim(); ++u) {
    const auto i = static_cast<Eigen::Index>(partition.class_of(u));
    table.class_weight[static_cast<std::size_t>(i)] += pi[u];
    const auto row = t.row(u);
    for (std::size_t k = 0; k < row.size(); ++k) {
      table.flow(i, static_cast<Eigen::Index>(partition.class_of(row.cols[k]))) += pi[u] * row.values[k];
    }
  }
  table.rho = Eigen::MatrixXd::Constant(m, m, std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (table.flow(i, j) > 0.0) {
        table.rho(i, j) = table.class_weight[static_cast<std::size_t>(i)] *
                          table.class_weight[static_cast<std::size_t>(j)] / table.flow(i, j);
      }
    }
  }
  return table;
}

namespace {

// Fine classes grouped by the coarse class that contains them.
std::vector<std::vector<std::size_t>> nested_classes(const StatePartition& coarse, const StatePartition& fine) {
  std::vector<std::vector<std::size_t>> inside(coarse.num_classes());
  for (std::size_t p = 0; p < fine.num_classes(); ++p) {
    inside[coarse.class_of(fine.classes()[p].front())].push_back(p);
  }
  return inside;
}

}  // namespace

std::vector<CrossSectionWeight> averaging_weights(const RhoTable& coarse_rho, const RhoTable& fine_rho,
                                                  const StatePartition& coarse, const StatePartition& fine,
                                                  std::size_t i, std::size_t j) {
  if (!is_refinement(fine, coarse)) throw std::invalid_argument("fine partition does not refine coarse partition");
  const auto inside = nested_classes(coarse, fine);
  const double total = coarse_rho.flow(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  std::vector<CrossSectionWeight> out;
  for (std::size_t p : inside.at(i)) {
    for (std::size_t q : inside.at(j)) {
      const double f = fine_rho.flow(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      out.push_back({p, q, total > 0.0 ? f / total : 0.0});
    }
  }
  return out;
}

RhoRecursion check_rho_recursion(const TransitionMatrix& t, const StatePartition& coarse,
                                 const StatePartition& fine, std::span<const double> pi) {
  if (!is_refinement(fine, coarse)) throw std::invalid_argument("fine partition does not refine coarse partition");
  const RhoTable c = rho_table(t, coarse, pi);
  const RhoTable f = rho_table(t, fine, pi);
  const auto inside = nested_classes(coarse, fine);
  RhoRecursion result;
  for (std::size_t i = 0; i < coarse.num_classes(); ++i) {
    for (std::size_t j = 0; j < coarse.num_classes(); ++j) {
      if (!c.defined(i, j)) continue;
      double lhs = 0.0;
      bool all_defined = true;
      for (std::size_t p : inside[i]) {
        for (std::size_t q : inside[j]) {
          if (!f.defined(p, q)) {
            all_defined = false;
            continue;
          }
          const auto pe = static_cast<Eigen::Index>(p), qe = static_cast<Eigen::Index>(q);
          lhs += f.flow(pe, qe) * f.rho(pe, qe);
        }
      }
      const auto ie = static_cast<Eigen::Index>(i), je = static_cast<Eigen::Index>(j);
      const double rhs = c.rho(ie, je) * c.flow(ie, je);
      if (all_defined) {
        ++result.checked_pairs;
        result.max_residual = std::max(result.max_residual, std::abs(lhs - rhs));
      } else {
        ++result.excluded_pairs;
        result.max_excess = std::max(result.max_excess, lhs - rhs);
      }
    }
  }
  return result;
}

// --- transient -------------------------------------------------------------

std::vector<double> transient_distribution(const GeneratorMatrix& q, std::span<const double> p0, double time,
                                           double tol) {
  if (p0.size() != q.dim()) throw std::invalid_argument("initial distribution length mismatch");
  if (time < 0.0) throw std::invalid_argument("time must be nonnegative");
  std::vector<double> p(p0.begin(), p0.end());
  if (time == 0.0) return p;
  const Uniformized u = uniformize(q);
  const double mean = u.lambda * time;
  const auto max_terms = static_cast<std::size_t>(std::ceil(mean + 40.0 * std::sqrt(mean) + 100.0));
  std::vector<double> result(p.size(), 0.0);
  double cumulative = 0.0;
  for (std::size_t n = 0; n <= max_terms; ++n) {
    const double weight =
        std::exp(-mean + static_cast<double>(n) * std::log(mean) - std::lgamma(static_cast<double>(n) + 1.0));
    for (std::size_t s = 0; s < p.size(); ++s) result[s] += weight * p[s];
    cumulative += weight;
    if (1.0 - cumulative < tol && static_cast<double>(n) >= mean) break;
    p = u.t.matrix().left_multiply(p);
  }
  return result;
}

}  // namespace lumpkit
