#include "lumpkit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lumpkit/errors.hpp"
#include "lumpkit/graph_io.hpp"
#include "lumpkit/lumping.hpp"
#include "lumpkit/markov.hpp"
#include "lumpkit/matrix_io.hpp"
#include "lumpkit/perm_metrics.hpp"

namespace lumpkit {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::set<std::uint64_t> seeds;
  std::istringstream parts(text);
  std::string part;
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("seeds", "bad seed '" + s + "'");
    }
    try {
      return static_cast<std::uint64_t>(std::stoull(s));
    } catch (const std::out_of_range&) {
      throw ConfigError("seeds", "seed '" + s + "' out of range");
    }
  };
  while (std::getline(parts, part, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      seeds.insert(number(part));
      continue;
    }
    const auto lo = number(part.substr(0, dots));
    const auto hi = number(part.substr(dots + 2));
    if (lo > hi) throw ConfigError("seeds", "empty range '" + part + "'");
    if (hi - lo >= 1'000'000) throw ConfigError("seeds", "range '" + part + "' too long");
    for (auto s = lo; s <= hi; ++s) seeds.insert(s);
  }
  if (seeds.empty()) throw ConfigError("seeds", "no seeds given");
  return {seeds.begin(), seeds.end()};
}

// --- config ----------------------------------------------------------------

namespace {

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

template <typename T>
void read_field(const json& obj, const std::string& path, const char* key, T& target) {
  if (!obj.contains(key)) return;
  const std::string field = path.empty() ? key : path + "." + key;
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (!obj.at(key).is_number_unsigned()) throw ConfigError(field, "expected a nonnegative integer");
    }
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field, "wrong type");
  }
}

RateRule parse_rule(const json& j, const std::string& path) {
  check_keys(j, path, {"from", "to", "base", "per_count", "pattern", "isolated_only"});
  RateRule r;
  if (!j.contains("from") || !j.contains("to")) throw ConfigError(path, "rule needs 'from' and 'to'");
  read_field(j, path, "from", r.from);
  read_field(j, path, "to", r.to);
  read_field(j, path, "base", r.base);
  read_field(j, path, "per_count", r.per_count);
  read_field(j, path, "isolated_only", r.isolated_only);
  if (j.contains("pattern")) {
    const json& p = j.at("pattern");
    if (!p.is_array()) throw ConfigError(path + ".pattern", "expected an array");
    std::vector<std::optional<std::uint32_t>> pattern;
    for (std::size_t c = 0; c < p.size(); ++c) {
      if (p[c].is_null()) {
        pattern.emplace_back();
      } else if (p[c].is_number_unsigned()) {
        pattern.emplace_back(p[c].get<std::uint32_t>());
      } else {
        throw ConfigError(path + ".pattern[" + std::to_string(c) + "]", "expected a count or null");
      }
    }
    r.pattern = std::move(pattern);
  }
  return r;
}

std::string resolve(const std::string& base_dir, const std::string& file) {
  const fs::path p(file);
  return p.is_absolute() ? file : (fs::path(base_dir) / p).string();
}

}  // namespace

void validate_config(const ExperimentConfig& c) {
  const auto& g = c.graph;
  if (g.file.empty()) {
    if (g.params.n < 1) throw ConfigError("graph.n", "must be at least 1");
    if (!(g.params.p >= 0.0 && g.params.p <= 1.0)) throw ConfigError("graph.p", "must lie in [0, 1]");
    if (g.kind == GraphKind::barabasi_albert && (g.params.m < 1 || g.params.m > g.params.n)) {
      throw ConfigError("graph.m", "must lie in 1..n");
    }
    if (g.kind == GraphKind::watts_strogatz && (g.params.degree % 2 != 0 || g.params.degree >= g.params.n)) {
      throw ConfigError("graph.degree", "must be even and less than n");
    }
    if (g.kind == GraphKind::cycle && g.params.n < 3) throw ConfigError("graph.n", "a cycle needs 3 vertices");
  } else if (!fs::exists(g.file)) {
    throw ConfigError("graph.file", "no such file '" + g.file + "'");
  }
  const auto& d = c.dynamics;
  if (d.name == "sis") {
    if (d.a < 0.0 || d.b < 0.0 || d.eps < 0.0) throw ConfigError("dynamics", "SIS rates must be nonnegative");
  } else if (d.name == "p2p") {
    if (d.p2p.buffer_length < 1 || d.p2p.buffer_length > 16) {
      throw ConfigError("dynamics.buffer_length", "must lie in 1..16");
    }
    if (d.p2p.contact_rate < 0.0 || d.p2p.shift_rate < 0.0 || d.p2p.server_rate < 0.0) {
      throw ConfigError("dynamics", "P2P rates must be nonnegative");
    }
  } else if (d.name == "table") {
    if (d.num_states < 1) throw ConfigError("dynamics.num_states", "must be at least 1");
  } else {
    throw ConfigError("dynamics.name", "unknown dynamics '" + d.name + "'");
  }
  if (c.seeds.empty()) throw ConfigError("seeds", "no seeds given");
  if (!(c.dynkin_tol >= 0.0)) throw ConfigError("tolerances.dynkin", "must be nonnegative");
  if (!(c.residual_tol > 0.0)) throw ConfigError("tolerances.stationary_residual", "must be positive");
  if (c.jobs < 1) throw ConfigError("jobs", "must be at least 1");
}

ExperimentConfig parse_config(const std::string& json_text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  check_keys(root, "",
             {"graph", "dynamics", "k_max", "weight_mode", "seeds", "tolerances", "limits", "output_dir", "jobs"});
  ExperimentConfig c;

  if (root.contains("graph")) {
    const json& g = root.at("graph");
    check_keys(g, "graph", {"kind", "n", "p", "m", "degree", "file"});
    std::string kind;
    read_field(g, "graph", "kind", kind);
    if (!kind.empty()) {
      try {
        c.graph.kind = parse_graph_kind(kind);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("graph.kind", e.what());
      }
    }
    read_field(g, "graph", "n", c.graph.params.n);
    read_field(g, "graph", "p", c.graph.params.p);
    read_field(g, "graph", "m", c.graph.params.m);
    read_field(g, "graph", "degree", c.graph.params.degree);
    read_field(g, "graph", "file", c.graph.file);
    if (!c.graph.file.empty()) c.graph.file = resolve(base_dir, c.graph.file);
  }

  if (root.contains("dynamics")) {
    const json& d = root.at("dynamics");
    check_keys(d, "dynamics",
               {"name", "a", "b", "eps", "buffer_length", "contact_rate", "shift_rate", "server_rate", "strategy",
                "num_states", "rules"});
    auto& dyn = c.dynamics;
    read_field(d, "dynamics", "name", dyn.name);
    read_field(d, "dynamics", "a", dyn.a);
    read_field(d, "dynamics", "b", dyn.b);
    read_field(d, "dynamics", "eps", dyn.eps);
    read_field(d, "dynamics", "buffer_length", dyn.p2p.buffer_length);
    read_field(d, "dynamics", "contact_rate", dyn.p2p.contact_rate);
    read_field(d, "dynamics", "shift_rate", dyn.p2p.shift_rate);
    read_field(d, "dynamics", "server_rate", dyn.p2p.server_rate);
    std::string strategy;
    read_field(d, "dynamics", "strategy", strategy);
    if (!strategy.empty()) {
      try {
        dyn.p2p.strategy = parse_chunk_strategy(strategy);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("dynamics.strategy", e.what());
      }
    }
    read_field(d, "dynamics", "num_states", dyn.num_states);
    if (d.contains("rules")) {
      const json& rules = d.at("rules");
      if (!rules.is_array()) throw ConfigError("dynamics.rules", "expected an array");
      for (std::size_t i = 0; i < rules.size(); ++i) {
        dyn.rules.push_back(parse_rule(rules[i], "dynamics.rules[" + std::to_string(i) + "]"));
      }
    }
  }

  read_field(root, "", "k_max", c.k_max);
  if (root.contains("weight_mode")) {
    std::string mode;
    read_field(root, "", "weight_mode", mode);
    try {
      c.weight_mode = parse_weight_mode(mode);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("weight_mode", e.what());
    }
  }
  if (root.contains("seeds")) {
    const json& s = root.at("seeds");
    if (s.is_string()) {
      c.seeds = parse_seeds(s.get<std::string>());
    } else if (s.is_number_unsigned()) {
      c.seeds = {s.get<std::uint64_t>()};
    } else if (s.is_array()) {
      std::set<std::uint64_t> seeds;
      for (const auto& x : s) {
        if (!x.is_number_unsigned()) throw ConfigError("seeds", "expected nonnegative integers");
        seeds.insert(x.get<std::uint64_t>());
      }
      c.seeds.assign(seeds.begin(), seeds.end());
    } else {
      throw ConfigError("seeds", "expected a list, an integer or a range string");
    }
  }
  if (root.contains("tolerances")) {
    const json& t = root.at("tolerances");
    check_keys(t, "tolerances", {"dynkin", "stationary_residual"});
    read_field(t, "tolerances", "dynkin", c.dynkin_tol);
    read_field(t, "tolerances", "stationary_residual", c.residual_tol);
  }
  if (root.contains("limits")) {
    const json& l = root.at("limits");
    check_keys(l, "limits", {"max_states", "max_nonzeros", "aut_group"});
    read_field(l, "limits", "max_states", c.limits.max_states);
    read_field(l, "limits", "max_nonzeros", c.limits.max_nonzeros);
    read_field(l, "limits", "aut_group", c.aut_limit);
  }
  read_field(root, "", "output_dir", c.output_dir);
  if (!c.output_dir.empty()) c.output_dir = resolve(base_dir, c.output_dir);
  read_field(root, "", "jobs", c.jobs);
  validate_config(c);
  return c;
}

ExperimentConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  const fs::path parent = fs::path(path).parent_path();
  return parse_config(text.str(), parent.empty() ? "." : parent.string());
}

Graph make_graph(const GraphSpec& spec, std::uint64_t seed) {
  if (!spec.file.empty()) return read_edge_list_file(spec.file);
  return generate(spec.kind, spec.params, seed);
}

LocalDynamics make_dynamics(const DynamicsSpec& spec) {
  if (spec.name == "sis") return sis_dynamics(spec.a, spec.b, spec.eps);
  if (spec.name == "p2p") return p2p_dynamics(spec.p2p);
  if (spec.name == "table") return table_dynamics(spec.num_states, spec.rules);
  throw ConfigError("dynamics.name", "unknown dynamics '" + spec.name + "'");
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

namespace {

bool seeded(const GraphSpec& spec) {
  if (!spec.file.empty()) return false;
  return spec.kind == GraphKind::erdos_renyi || spec.kind == GraphKind::barabasi_albert ||
         spec.kind == GraphKind::watts_strogatz;
}

// Seeds that yield distinct graphs; deterministic graphs need only one.
std::vector<std::uint64_t> graph_seeds(const ExperimentConfig& c) {
  if (seeded(c.graph)) return c.seeds;
  return {c.seeds.front()};
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

// --- graph -----------------------------------------------------------------

int cmd_graph(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  const bool show_seed = seeded(config.graph);
  for (std::uint64_t seed : graph_seeds(config)) {
    const Graph g = make_graph(config.graph, seed);
    if (show_seed) out << "seed " << seed << '\n';
    out << "vertices " << g.num_vertices() << '\n';
    out << "edges " << g.num_edges() << '\n';
    if (g.empty()) continue;
    const Diameter d = diameter(g);
    out << "diameter " << d.hops << (d.connected ? "" : " disconnected") << '\n';
    try {
      const auto aut = automorphisms(g, {AutomorphismLimits{}.max_vertices, config.aut_limit});
      out << "aut_order " << aut.size() << '\n';
    } catch (const CapacityError& e) {
      out << "aut_order unavailable\n";
      err << "aut: " << e.what() << '\n';
    }
    try {
      out << "aut_vertex_orbits " << automorphism_vertex_orbits(g).num_classes() << '\n';
    } catch (const CapacityError& e) {
      out << "aut_vertex_orbits unavailable\n";
    }
    out << "k vertex_classes\n";
    VertexPartition prev;
    std::size_t stable_from = 1;
    for (std::size_t k = 1; k <= std::max<std::size_t>(g.num_vertices(), 1); ++k) {
      VertexPartition p = local_symmetry_partition(g, k);
      out << k << ' ' << p.num_classes() << '\n';
      if (k > 1 && p == prev) break;
      stable_from = k;
      prev = std::move(p);
    }
    out << "stable_from " << stable_from << '\n';
  }
  return 0;
}

// --- kl --------------------------------------------------------------------

namespace {

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<KLReport> curve;
  std::string error;
};

std::string csv_row(std::uint64_t seed, const KLReport& r) {
  return std::to_string(seed) + ',' + std::to_string(r.k) + ',' + std::to_string(r.num_classes) + ',' +
         format_number(r.compression) + ',' + format_number(r.kl_pi) + ',' + format_number(r.kl_p) + ',' +
         (r.exact ? "1" : "0");
}

constexpr const char* kCsvHeader = "seed,k,M_k,compression,kl_pi,kl_P,exact";

}  // namespace

int cmd_kl(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  const LocalDynamics dynamics = make_dynamics(config.dynamics);
  KLCurveOptions options;
  options.k_max = config.k_max;
  options.weight_mode = config.weight_mode;
  options.dynkin_tol = config.dynkin_tol;
  options.limits = config.limits;
  options.stationary.residual_tol = config.residual_tol;

  std::vector<SeedRun> runs;
  for (std::uint64_t s : config.seeds) runs.push_back({s, {}, {}});
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < runs.size();) {
      try {
        runs[i].curve = kl_curve(make_graph(config.graph, runs[i].seed), dynamics, options);
      } catch (const std::exception& e) {
        runs[i].error = e.what();
      }
    }
  };
  const std::size_t jobs = std::min(config.jobs, runs.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (config.weight_mode == WeightMode::uniform) err << "note: KL weighted by the uniform vector, not pi\n";
  std::ostringstream csv;
  csv << kCsvHeader << '\n';
  std::size_t failed = 0;
  for (const auto& run : runs) {
    if (!run.error.empty()) {
      ++failed;
      csv << run.seed << ",,,,,,error\n";
      err << "seed " << run.seed << ": " << run.error << '\n';
      continue;
    }
    for (std::size_t i = 0; i < run.curve.size(); ++i) {
      const KLReport& r = run.curve[i];
      csv << csv_row(run.seed, r) << '\n';
      const bool bad_row = !(r.compression >= 0.0 && r.compression < 1.0) || r.kl_pi < 0.0 || r.kl_p < 0.0;
      const bool bad_order = i > 0 && (r.num_classes < run.curve[i - 1].num_classes ||
                                       r.compression > run.curve[i - 1].compression);
      if (bad_row || bad_order) err << "warning: seed " << run.seed << " k=" << r.k << " fails row checks\n";
    }
  }
  out << csv.str();

  if (!config.output_dir.empty()) {
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    write_file(dir / "kl.csv", csv.str());
    std::size_t longest = 0;
    for (const auto& run : runs) {
      if (!run.error.empty()) continue;
      longest = std::max(longest, run.curve.size());
      std::ostringstream detail;
      detail << "k,M_k,vertex_classes,compression,kl_pi,kl_P,exact,dynkin_deviation,rho_residual,"
                "rho_excluded_pairs,stabilized\n";
      for (const auto& r : run.curve) {
        detail << r.k << ',' << r.num_classes << ',' << r.vertex_classes << ',' << format_number(r.compression)
               << ',' << format_number(r.kl_pi) << ',' << format_number(r.kl_p) << ',' << (r.exact ? 1 : 0) << ','
               << format_number(r.dynkin_deviation) << ',' << format_number(r.rho_residual) << ','
               << r.rho_excluded_pairs << ',' << (r.stabilized ? 1 : 0) << '\n';
      }
      write_file(dir / ("kl_seed_" + std::to_string(run.seed) + ".csv"), detail.str());
    }
    // Mean over seeds; a curve that stopped early keeps its last row, which
    // is what every later order would reproduce.
    std::ostringstream mean;
    mean << "k,seeds,M_k,compression,kl_pi,kl_P\n";
    const std::size_t ok = runs.size() - failed;
    for (std::size_t k = 1; k <= longest && ok > 0; ++k) {
      double m = 0, c = 0, pi = 0, p = 0;
      for (const auto& run : runs) {
        if (!run.error.empty()) continue;
        const KLReport& r = run.curve[std::min(k, run.curve.size()) - 1];
        m += static_cast<double>(r.num_classes);
        c += r.compression;
        pi += r.kl_pi;
        p += r.kl_p;
      }
      const double n = static_cast<double>(ok);
      mean << k << ',' << ok << ',' << format_number(m / n) << ',' << format_number(c / n) << ','
           << format_number(pi / n) << ',' << format_number(p / n) << '\n';
    }
    write_file(dir / "kl_mean.csv", mean.str());
    std::ostringstream summary;
    summary << "dynamics " << dynamics.name() << '\n'
            << "weights " << to_string(config.weight_mode) << '\n'
            << "seeds " << runs.size() << '\n'
            << "failed " << failed << '\n';
    for (const auto& run : runs) {
      if (!run.error.empty()) summary << "error seed " << run.seed << ": " << run.error << '\n';
    }
    write_file(dir / "summary.txt", summary.str());
  }
  return failed == runs.size() ? 1 : 0;
}

// --- matrix / check --------------------------------------------------------

Lifting parse_lifting(const std::string& name) {
  if (name == "pi") return Lifting::pi;
  if (name == "P" || name == "p") return Lifting::p;
  if (name == "both") return Lifting::both;
  throw std::invalid_argument("unknown lifting '" + name + "' (expected pi, P or both)");
}

int cmd_matrix(const MatrixCommand& command, std::ostream& out, std::ostream& err) {
  const StochasticInput input = read_transition_matrix_file(command.matrix_file);
  if (input.max_adjustment > 0.0) {
    err << "note: rows renormalised, largest adjustment " << format_number(input.max_adjustment) << '\n';
  }
  const TransitionMatrix& t = input.t;
  std::vector<double> w;
  if (command.weight_mode == WeightMode::stationary) {
    w = stationary(t).pi;
  } else {
    w.assign(t.dim(), 1.0 / static_cast<double>(t.dim()));
    err << "note: KL weighted by the uniform vector, not pi\n";
  }
  out << "partition,M,lifting,kl\n";
  for (const auto& path : command.partition_files) {
    const StatePartition partition = read_partition_file(path, t.dim());
    const LiftingKL kl = lifting_kl(t, partition, w);
    if (command.lifting != Lifting::p) {
      out << path << ',' << partition.num_classes() << ",pi," << format_number(kl.pi_lifting) << '\n';
    }
    if (command.lifting != Lifting::pi) {
      out << path << ',' << partition.num_classes() << ",P," << format_number(kl.p_lifting) << '\n';
    }
  }
  return 0;
}

int cmd_check(const std::string& matrix_file, const std::string& partition_file, double tol, std::ostream& out,
              std::ostream&) {
  std::ifstream in(matrix_file);
  if (!in) throw ParseError("cannot open matrix file '" + matrix_file + "'");
  const Eigen::MatrixXd m = read_matrix(in);
  const StatePartition partition = read_partition_file(partition_file, static_cast<std::size_t>(m.rows()));
  const DynkinResult r = dynkin_check(SparseMatrix::from_dense(m), partition, tol);
  out << (r.exact ? "exact" : "inexact") << " max_deviation=" << format_number(r.max_deviation) << '\n';
  return r.exact ? 0 : 1;
}

// --- permdist --------------------------------------------------------------

int cmd_permdist(const ExperimentConfig& config, std::size_t enumerate_limit, std::size_t samples,
                 std::ostream& out, std::ostream& err) {
  out << "seed,set,order,mean_distance,mode\n";
  for (std::uint64_t seed : graph_seeds(config)) {
    const Graph g = make_graph(config.graph, seed);
    VertexPartition prev;
    for (std::size_t k = 1; k <= std::max<std::size_t>(g.num_vertices(), 1); ++k) {
      VertexPartition p = local_symmetry_partition(g, k);
      if (k > 1 && p == prev) break;
      const std::uint64_t order = class_group_order(p);
      const PermSetReport r = class_group_distance(p, enumerate_limit, samples, seed);
      out << seed << ",psi_" << k << ','
          << (order == std::numeric_limits<std::uint64_t>::max() ? std::string("overflow") : std::to_string(order))
          << ',' << format_number(r.mean_distance) << ',' << (r.sampled ? "sampled" : "exact") << '\n';
      prev = std::move(p);
    }
    try {
      const auto aut = automorphisms(g, {AutomorphismLimits{}.max_vertices, config.aut_limit});
      const PermSetReport r = set_distance(aut);
      out << seed << ",aut," << aut.size() << ',' << format_number(r.mean_distance) << ",exact\n";
    } catch (const CapacityError& e) {
      err << "aut: " << e.what() << '\n';
    }
  }
  return 0;
}

}  // namespace lumpkit
