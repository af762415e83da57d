#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lumpkit/dynamics.hpp"
#include "lumpkit/graph.hpp"
#include "lumpkit/lumping.hpp"
#include "lumpkit/markov.hpp"

namespace lumpkit {

/// Weights used for aggregation, lifting and the outer KL sum.
enum class WeightMode { stationary, uniform };

WeightMode parse_weight_mode(std::string_view name);
std::string to_string(WeightMode mode);

struct KLReport {
  std::size_t k = 0;
  std::size_t num_classes = 0;  ///< M_k
  double compression = 0.0;     ///< 1 - M_k / K^N
  double kl_pi = 0.0;
  double kl_p = 0.0;
  bool exact = false;  ///< Dynkin deviation <= tolerance
  double dynkin_deviation = 0.0;
  std::size_t vertex_classes = 0;
  bool stabilized = false;  ///< vertex partition equals the one at k-1
  // Recursion check against the previous order (zero at k = 1).
  double rho_residual = 0.0;
  double rho_excess = 0.0;
  std::size_t rho_excluded_pairs = 0;
};

struct KLCurveOptions {
  std::size_t k_max = 0;  ///< 0: run until the vertex partition stabilises
  WeightMode weight_mode = WeightMode::stationary;
  double dynkin_tol = kDefaultDynkinTolerance;
  BuildLimits limits;
  StationaryOptions stationary;
};

/// One report per k = 1, 2, ... Stops after k_max or after the first k whose
/// k-local-symmetry partition equals the one at k-1; that final row repeats
/// the previous values, since the lumping is the same.
/// Throws ReducibleChainError under WeightMode::stationary on reducible chains.
std::vector<KLReport> kl_curve(const Graph& g, const LocalDynamics& dynamics, const KLCurveOptions& options = {});

}  // namespace lumpkit
