#include "lumpkit/kl_curve.hpp"

#include <stdexcept>

namespace lumpkit {

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "stationary") return WeightMode::stationary;
  if (name == "uniform") return WeightMode::uniform;
  throw std::invalid_argument("unknown weight mode '" + std::string(name) + "'");
}

std::string to_string(WeightMode mode) { return mode == WeightMode::stationary ? "stationary" : "uniform"; }

std::vector<KLReport> kl_curve(const Graph& g, const LocalDynamics& dynamics, const KLCurveOptions& options) {
  if (g.empty()) throw std::invalid_argument("graph has no vertices");
  const GeneratorMatrix q = build_generator(g, dynamics, options.limits);
  const Uniformized u = uniformize(q);
  std::vector<double> w;
  if (options.weight_mode == WeightMode::stationary) {
    w = stationary(u.t, options.stationary).pi;
  } else {
    w.assign(q.dim(), 1.0 / static_cast<double>(q.dim()));
  }

  // Order k never needs to exceed n: by then every neighbourhood is a whole component.
  const std::size_t k_max = options.k_max ? options.k_max : g.num_vertices();
  std::vector<KLReport> curve;
  VertexPartition prev_vertices;
  StatePartition prev_states;
  for (std::size_t k = 1; k <= k_max; ++k) {
    VertexPartition vertices = local_symmetry_partition(g, k);
    if (k > 1 && vertices == prev_vertices) {
      KLReport same = curve.back();
      same.k = k;
      same.stabilized = true;
      same.rho_residual = 0.0;
      same.rho_excess = 0.0;
      same.rho_excluded_pairs = 0;
      curve.push_back(same);
      break;
    }
    StatePartition states = orbit_partition_classes(vertices, dynamics.num_local_states(), options.limits.max_states);

    KLReport r;
    r.k = k;
    r.num_classes = states.num_classes();
    r.compression = compression(states);
    r.vertex_classes = vertices.num_classes();
    const LiftingKL kl = lifting_kl(u.t, states, w);
    r.kl_pi = kl.pi_lifting;
    r.kl_p = kl.p_lifting;
    const DynkinResult dynkin = dynkin_check(u.t.matrix(), states, options.dynkin_tol);
    r.exact = dynkin.exact;
    r.dynkin_deviation = dynkin.max_deviation;
    if (k > 1) {
      const RhoRecursion rho = check_rho_recursion(u.t, prev_states, states, w);
      r.rho_residual = rho.max_residual;
      r.rho_excess = rho.max_excess;
      r.rho_excluded_pairs = rho.excluded_pairs;
    }
    curve.push_back(r);
    prev_vertices = std::move(vertices);
    prev_states = std::move(states);
  }
  return curve;
}

}  // namespace lumpkit
