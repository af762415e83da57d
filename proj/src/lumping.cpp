#include "lumpkit/lumping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "lumpkit/errors.hpp"

namespace lumpkit {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

void check_square(const SparseMatrix& m, const StatePartition& p) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  if (m.rows() != p.dim()) {
    throw std::invalid_argument("matrix dimension " + std::to_string(m.rows()) +
                                " does not match partition dimension " + std::to_string(p.dim()));
  }
}

// Row mass into each class other than `own`, sorted by class.
std::vector<std::pair<std::size_t, double>> class_masses(const SparseMatrix& m, const StatePartition& p,
                                                         std::size_t state, std::size_t own) {
  std::vector<std::pair<std::size_t, double>> out;
  const auto row = m.row(state);
  for (std::size_t k = 0; k < row.size(); ++k) {
    const std::size_t c = p.class_of(row.cols[k]);
    if (c != own) out.emplace_back(c, row.values[k]);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<std::size_t, double>> merged;
  for (const auto& [c, v] : out) {
    if (!merged.empty() && merged.back().first == c) {
      merged.back().second += v;
    } else {
      merged.emplace_back(c, v);
    }
  }
  return merged;
}

double max_difference(const std::vector<std::pair<std::size_t, double>>& a,
                      const std::vector<std::pair<std::size_t, double>>& b) {
  double worst = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      worst = std::max(worst, std::abs(a[i++].second));
    } else if (i == a.size() || b[j].first < a[i].first) {
      worst = std::max(worst, std::abs(b[j++].second));
    } else {
      worst = std::max(worst, std::abs(a[i++].second - b[j++].second));
    }
  }
  return worst;
}

}  // namespace

// --- StatePartition --------------------------------------------------------

StatePartition StatePartition::from_labels(std::span<const std::size_t> labels, std::string provenance) {
  StatePartition p;
  p.provenance_ = std::move(provenance);
  p.eta_.resize(labels.size());
  std::map<std::size_t, std::size_t> relabel;
  for (std::size_t s = 0; s < labels.size(); ++s) {
    auto [it, inserted] = relabel.try_emplace(labels[s], p.classes_.size());
    if (inserted) p.classes_.emplace_back();
    p.eta_[s] = it->second;
    p.classes_[it->second].push_back(s);
  }
  return p;
}

StatePartition StatePartition::from_classes(std::size_t dim, const std::vector<std::vector<std::size_t>>& classes,
                                            std::string provenance) {
  std::vector<std::size_t> labels(dim, kUnassigned);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].empty()) throw std::invalid_argument("empty state class");
    for (std::size_t s : classes[c]) {
      if (s >= dim) throw std::invalid_argument("state " + std::to_string(s) + " out of range");
      if (labels[s] != kUnassigned) throw std::invalid_argument("state " + std::to_string(s) + " in two classes");
      labels[s] = c;
    }
  }
  for (std::size_t s = 0; s < dim; ++s) {
    if (labels[s] == kUnassigned) throw std::invalid_argument("state " + std::to_string(s) + " not covered");
  }
  return from_labels(labels, std::move(provenance));
}

StatePartition StatePartition::identity(std::size_t dim) {
  std::vector<std::size_t> labels(dim);
  std::iota(labels.begin(), labels.end(), 0);
  return from_labels(labels, "identity");
}

StatePartition StatePartition::whole(std::size_t dim) {
  std::vector<std::size_t> labels(dim, 0);
  return from_labels(labels, "whole");
}

// --- symmetry partitions ---------------------------------------------------

namespace {

StatePartition multiset_partition(const VertexPartition& classes, std::size_t num_local_states,
                                  std::size_t max_states, std::string provenance) {
  const std::size_t n = classes.num_vertices();
  const StateSpace space(n, num_local_states, max_states);
  std::map<std::vector<std::uint32_t>, std::size_t> ids;
  std::vector<std::size_t> labels(space.size());
  std::vector<std::uint32_t> key(classes.num_classes() * num_local_states);
  for (std::size_t x = 0; x < space.size(); ++x) {
    std::fill(key.begin(), key.end(), 0);
    for (Vertex v = 0; v < n; ++v) ++key[classes.class_of(v) * num_local_states + space.local(x, v)];
    labels[x] = ids.try_emplace(key, ids.size()).first->second;
  }
  return StatePartition::from_labels(labels, std::move(provenance));
}

}  // namespace

StatePartition population_partition(std::size_t num_vertices, std::size_t num_local_states,
                                     std::size_t max_states) {
  return multiset_partition(VertexPartition::single_class(num_vertices), num_local_states, max_states,
                            "population");
}

StatePartition orbit_partition_group(std::span<const Permutation> perms, std::size_t num_vertices,
                                     std::size_t num_local_states, std::size_t max_states) {
  for (const auto& f : perms) {
    if (f.size() != num_vertices) throw std::invalid_argument("permutation size does not match vertex count");
  }
  const StateSpace space(num_vertices, num_local_states, max_states);
  DisjointSets sets(space.size());
  std::vector<LocalState> image(num_vertices);
  for (std::size_t x = 0; x < space.size(); ++x) {
    const auto locals = space.decode(x);
    for (const auto& f : perms) {
      for (Vertex i = 0; i < num_vertices; ++i) image[i] = locals[f(i)];
      sets.unite(x, space.encode(image));
    }
  }
  std::vector<std::size_t> labels(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) labels[x] = sets.find(x);
  return StatePartition::from_labels(labels, "group");
}

StatePartition orbit_partition_classes(const VertexPartition& classes, std::size_t num_local_states,
                                       std::size_t max_states) {
  return multiset_partition(classes, num_local_states, max_states, "classes");
}

std::size_t orbit_count_classes(const VertexPartition& classes, std::size_t num_local_states) {
  std::size_t m = 1;
  for (const auto& c : classes.classes()) m *= binomial(c.size() + num_local_states - 1, num_local_states - 1);
  return m;
}

bool is_refinement(const StatePartition& fine, const StatePartition& coarse) {
  if (fine.dim() != coarse.dim()) throw std::invalid_argument("partitions have different dimensions");
  for (const auto& cls : fine.classes()) {
    const std::size_t target = coarse.class_of(cls.front());
    for (std::size_t s : cls) {
      if (coarse.class_of(s) != target) return false;
    }
  }
  return true;
}

// --- Dynkin's criterion and aggregation ------------------------------------

DynkinResult dynkin_check(const SparseMatrix& matrix, const StatePartition& partition, double tol) {
  check_square(matrix, partition);
  DynkinResult result;
  for (std::size_t i = 0; i < partition.num_classes(); ++i) {
    const auto& members = partition.classes()[i];
    const auto reference = class_masses(matrix, partition, members.front(), i);
    for (std::size_t k = 1; k < members.size(); ++k) {
      const auto masses = class_masses(matrix, partition, members[k], i);
      result.max_deviation = std::max(result.max_deviation, max_difference(reference, masses));
    }
  }
  result.exact = result.max_deviation <= tol;
  return result;
}

DynkinResult dynkin_check(const GeneratorMatrix& q, const StatePartition& partition, double tol) {
  return dynkin_check(q.full(), partition, tol);
}

LumpedMatrix lump_exact(const SparseMatrix& matrix, MatrixKind kind, const StatePartition& partition, double tol) {
  const auto check = dynkin_check(matrix, partition, tol);
  if (!check.exact) {
    std::ostringstream msg;
    msg << "partition is not lumpable: Dynkin deviation " << check.max_deviation << " exceeds " << tol;
    throw LumpabilityError(msg.str(), check.max_deviation);
  }
  const auto m = static_cast<Eigen::Index>(partition.num_classes());
  LumpedMatrix out{Eigen::MatrixXd::Zero(m, m), kind};
  for (std::size_t i = 0; i < partition.num_classes(); ++i) {
    const auto row = matrix.row(partition.classes()[i].front());
    for (std::size_t k = 0; k < row.size(); ++k) {
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(partition.class_of(row.cols[k]))) +=
          row.values[k];
    }
  }
  return out;
}

LumpedMatrix lump_exact(const GeneratorMatrix& q, const StatePartition& partition, double tol) {
  return lump_exact(q.full(), MatrixKind::generator, partition, tol);
}

LumpedMatrix lump_weighted(const SparseMatrix& t, const StatePartition& partition, std::span<const double> w) {
  check_square(t, partition);
  if (w.size() != t.rows()) throw std::invalid_argument("weight vector length mismatch");
  const auto m = static_cast<Eigen::Index>(partition.num_classes());
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(m);
  for (std::size_t u = 0; u < t.rows(); ++u) {
    if (w[u] < 0.0) throw std::invalid_argument("weights must be nonnegative");
    const auto i = static_cast<Eigen::Index>(partition.class_of(u));
    mass(i) += w[u];
    const auto row = t.row(u);
    for (std::size_t k = 0; k < row.size(); ++k) {
      flow(i, static_cast<Eigen::Index>(partition.class_of(row.cols[k]))) += w[u] * row.values[k];
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(mass(i) > 0.0)) {
      throw std::invalid_argument("class " + std::to_string(i) + " has zero total weight");
    }
    flow.row(i) /= mass(i);
  }
  return {std::move(flow), MatrixKind::stochastic};
}

std::vector<double> aggregate(std::span<const double> p, const StatePartition& partition) {
  if (p.size() != partition.dim()) throw std::invalid_argument("vector length does not match partition");
  std::vector<double> out(partition.num_classes(), 0.0);
  for (std::size_t s = 0; s < p.size(); ++s) out[partition.class_of(s)] += p[s];
  return out;
}

double compression(const StatePartition& partition) {
  return 1.0 - static_cast<double>(partition.num_classes()) / static_cast<double>(partition.dim());
}

// --- partition files -------------------------------------------------------

StatePartition read_partition(std::istream& in, std::size_t dim) {
  std::string raw;
  std::size_t lineno = 0;
  bool eta_format = false, seen_content = false;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> labels(dim, kUnassigned);
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (!seen_content) {
      seen_content = true;
      if (first == "eta") {
        eta_format = true;
        continue;
      }
    }
    std::vector<long long> values;
    std::istringstream all(line);
    std::string token;
    while (all >> token) {
      std::size_t used = 0;
      long long value = -1;
      try {
        value = std::stoll(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || value < 0) throw ParseError("expected nonnegative integer, got '" + token + "'", lineno);
      values.push_back(value);
    }
    if (eta_format) {
      if (values.size() != 2) throw ParseError("expected 'state class'", lineno);
      const auto s = static_cast<std::size_t>(values[0]);
      if (s >= dim) throw ParseError("state out of range", lineno);
      if (labels[s] != kUnassigned) throw ParseError("state listed twice", lineno);
      labels[s] = static_cast<std::size_t>(values[1]);
    } else {
      classes.emplace_back(values.begin(), values.end());
    }
  }
  try {
    if (eta_format) {
      for (std::size_t s = 0; s < dim; ++s) {
        if (labels[s] == kUnassigned) throw std::invalid_argument("state " + std::to_string(s) + " not covered");
      }
      return StatePartition::from_labels(labels, "file");
    }
    return StatePartition::from_classes(dim, classes, "file");
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

StatePartition read_partition_file(const std::string& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open partition file '" + path + "'");
  return read_partition(in, dim);
}

void write_partition(std::ostream& out, const StatePartition& partition) {
  for (const auto& cls : partition.classes()) {
    for (std::size_t k = 0; k < cls.size(); ++k) out << (k ? " " : "") << cls[k];
    out << '\n';
  }
}

}  // namespace lumpkit
