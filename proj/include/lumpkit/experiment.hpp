#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lumpkit/dynamics.hpp"
#include "lumpkit/generators.hpp"
#include "lumpkit/kl_curve.hpp"

namespace lumpkit {

// Invalid configuration; `field` is the JSON path of the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct GraphSpec {
  GraphKind kind = GraphKind::erdos_renyi;
  GraphParams params{8, 0.3, 2, 2};
  std::string file;  ///< edge-list path; overrides kind/params when set
};

struct DynamicsSpec {
  std::string name = "sis";
  double a = 0.5, b = 0.5, eps = 1e-3;
  P2PParams p2p;
  std::size_t num_states = 2;  ///< table dynamics
  std::vector<RateRule> rules;
};

struct ExperimentConfig {
  GraphSpec graph;
  DynamicsSpec dynamics;
  std::size_t k_max = 0;
  WeightMode weight_mode = WeightMode::stationary;
  std::vector<std::uint64_t> seeds{1};
  double dynkin_tol = kDefaultDynkinTolerance;
  double residual_tol = 1e-10;
  BuildLimits limits;
  std::size_t aut_limit = 1'000'000;
  std::string output_dir;
  std::size_t jobs = 1;
};

/// Parses "7", "1..20" or "1,4,9..11" into an ascending, duplicate-free list.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

/// Reads a JSON config. Relative file paths are resolved against `base_dir`.
/// Throws ConfigError naming the field.
ExperimentConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");
ExperimentConfig read_config_file(const std::string& path);
/// Range checks shared by the JSON reader and command-line overrides.
void validate_config(const ExperimentConfig& config);

Graph make_graph(const GraphSpec& spec, std::uint64_t seed);
LocalDynamics make_dynamics(const DynamicsSpec& spec);

/// "%.9g"
std::string format_number(double x);

// Commands. Each writes its report to `out`, diagnostics to `err`, and returns
// the process exit code (0 success or exact, 1 inexact or all seeds failed).
// Input errors propagate as exceptions.
int cmd_graph(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_kl(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

enum class Lifting { pi, p, both };
Lifting parse_lifting(const std::string& name);

struct MatrixCommand {
  std::string matrix_file;
  std::vector<std::string> partition_files;
  Lifting lifting = Lifting::both;
  WeightMode weight_mode = WeightMode::stationary;
};
int cmd_matrix(const MatrixCommand& command, std::ostream& out, std::ostream& err);

int cmd_check(const std::string& matrix_file, const std::string& partition_file, double tol, std::ostream& out,
              std::ostream& err);

/// Mean Cayley distance of Psi_k for each k up to stabilisation, and of Aut(G).
int cmd_permdist(const ExperimentConfig& config, std::size_t enumerate_limit, std::size_t samples, std::ostream& out,
                 std::ostream& err);

}  // namespace lumpkit
