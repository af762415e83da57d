// lumpkit command-line driver: graph, kl, matrix, check, permdist.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lumpkit/errors.hpp"
#include "lumpkit/experiment.hpp"

namespace {

using namespace lumpkit;

struct Overrides {
  std::string config;
  std::optional<std::string> kind, graph_file, dynamics, strategy, weights, seeds, output_dir;
  std::optional<std::size_t> n, m, degree, buffer_length, k_max, max_states, max_nonzeros, aut_limit, jobs;
  std::optional<double> p, a, b, eps, contact_rate, shift_rate, server_rate, dynkin_tol, residual_tol;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config, "JSON experiment config")->check(CLI::ExistingFile);
    app->add_option("--graph", kind, "complete|star|cycle|path|erdos_renyi|barabasi_albert|watts_strogatz");
    app->add_option("--graph-file", graph_file, "edge-list file")->check(CLI::ExistingFile);
    app->add_option("-n,--n", n, "vertex count");
    app->add_option("-p,--p", p, "edge or rewiring probability");
    app->add_option("-m,--m", m, "attachment count");
    app->add_option("--degree", degree, "ring-lattice degree");
    app->add_option("--dynamics", dynamics, "sis|p2p|table");
    app->add_option("--a", a, "SIS infection rate per infected neighbour");
    app->add_option("--b", b, "SIS recovery rate");
    app->add_option("--eps", eps, "SIS spontaneous infection rate");
    app->add_option("--buffer-length", buffer_length, "P2P buffer length");
    app->add_option("--contact-rate", contact_rate, "P2P contact rate");
    app->add_option("--shift-rate", shift_rate, "P2P playback shift rate");
    app->add_option("--server-rate", server_rate, "P2P server rate");
    app->add_option("--strategy", strategy, "random_useful|edf|ldf");
    app->add_option("--k-max", k_max, "largest order k (0: until stable)");
    app->add_option("--weights", weights, "stationary|uniform");
    app->add_option("--seed", seeds, "seeds, e.g. 3 or 1..20 or 1,5,7..9");
    app->add_option("--dynkin-tol", dynkin_tol, "Dynkin tolerance (default 1e-9)");
    app->add_option("--residual-tol", residual_tol, "stationary residual tolerance (default 1e-10)");
    app->add_option("--max-states", max_states, "state-space cap (default 2^20)");
    app->add_option("--max-nonzeros", max_nonzeros, "generator nonzero cap (default 2^20)");
    app->add_option("--aut-limit", aut_limit, "largest automorphism group to enumerate");
    app->add_option("-o,--output-dir", output_dir, "directory for CSV files");
    app->add_option("-j,--jobs", jobs, "seeds processed concurrently");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c = config.empty() ? ExperimentConfig{} : read_config_file(config);
    if (kind) {
      c.graph.kind = parse_graph_kind(*kind);
      c.graph.file.clear();
    }
    if (graph_file) c.graph.file = *graph_file;
    if (n) c.graph.params.n = *n;
    if (p) c.graph.params.p = *p;
    if (m) c.graph.params.m = *m;
    if (degree) c.graph.params.degree = *degree;
    if (dynamics) c.dynamics.name = *dynamics;
    if (a) c.dynamics.a = *a;
    if (b) c.dynamics.b = *b;
    if (eps) c.dynamics.eps = *eps;
    if (buffer_length) c.dynamics.p2p.buffer_length = *buffer_length;
    if (contact_rate) c.dynamics.p2p.contact_rate = *contact_rate;
    if (shift_rate) c.dynamics.p2p.shift_rate = *shift_rate;
    if (server_rate) c.dynamics.p2p.server_rate = *server_rate;
    if (strategy) c.dynamics.p2p.strategy = parse_chunk_strategy(*strategy);
    if (k_max) c.k_max = *k_max;
    if (weights) c.weight_mode = parse_weight_mode(*weights);
    if (seeds) c.seeds = parse_seeds(*seeds);
    if (dynkin_tol) c.dynkin_tol = *dynkin_tol;
    if (residual_tol) c.residual_tol = *residual_tol;
    if (max_states) c.limits.max_states = *max_states;
    if (max_nonzeros) c.limits.max_nonzeros = *max_nonzeros;
    if (aut_limit) c.aut_limit = *aut_limit;
    if (output_dir) c.output_dir = *output_dir;
    if (jobs) c.jobs = *jobs;
    validate_config(c);
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry-based lumping of Markovian agent-based models on graphs"};
  app.require_subcommand(1);

  Overrides graph_opts, kl_opts, perm_opts;
  auto* graph_cmd = app.add_subcommand("graph", "vertex partitions, automorphisms and diameter");
  graph_opts.attach(graph_cmd);
  auto* kl_cmd = app.add_subcommand("kl", "KL curves over k as CSV");
  kl_opts.attach(kl_cmd);

  MatrixCommand matrix;
  std::string lifting = "both", matrix_weights = "stationary";
  auto* matrix_cmd = app.add_subcommand("matrix", "KL rates of a transition matrix against partition liftings");
  matrix_cmd->add_option("matrix", matrix.matrix_file, "matrix file")->required()->check(CLI::ExistingFile);
  matrix_cmd->add_option("partitions", matrix.partition_files, "partition files")
      ->required()
      ->check(CLI::ExistingFile);
  matrix_cmd->add_option("--lifting", lifting, "pi|P|both");
  matrix_cmd->add_option("--weights", matrix_weights, "stationary|uniform");

  std::string check_matrix, check_partition;
  double check_tol = kDefaultDynkinTolerance;
  auto* check_cmd = app.add_subcommand("check", "Dynkin criterion for a matrix and partition");
  check_cmd->add_option("matrix", check_matrix, "matrix file")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("partition", check_partition, "partition file")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--tol", check_tol, "absolute tolerance (default 1e-9)");

  std::size_t enumerate_limit = 100'000, samples = 10'000;
  auto* perm_cmd = app.add_subcommand("permdist", "mean Cayley distance of Psi_k and Aut(G)");
  perm_opts.attach(perm_cmd);
  perm_cmd->add_option("--enumerate-limit", enumerate_limit, "largest group enumerated exactly");
  perm_cmd->add_option("--samples", samples, "samples when the group is larger");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*graph_cmd) return cmd_graph(graph_opts.resolve(), std::cout, std::cerr);
    if (*kl_cmd) return cmd_kl(kl_opts.resolve(), std::cout, std::cerr);
    if (*matrix_cmd) {
      matrix.lifting = parse_lifting(lifting);
      matrix.weight_mode = parse_weight_mode(matrix_weights);
      return cmd_matrix(matrix, std::cout, std::cerr);
    }
    if (*check_cmd) return cmd_check(check_matrix, check_partition, check_tol, std::cout, std::cerr);
    if (*perm_cmd) return cmd_permdist(perm_opts.resolve(), enumerate_limit, samples, std::cout, std::cerr);
  } catch (const ReducibleChainError& e) {
    std::cerr << "error: " << e.what() << "\nhint: rerun with --weights uniform\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
