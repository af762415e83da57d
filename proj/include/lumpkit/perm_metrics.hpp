#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lumpkit/generators.hpp"
#include "lumpkit/graph.hpp"

namespace lumpkit {

/// Minimal number of transpositions taking p to the identity: n - #cycles.
std::size_t cayley_distance(const Permutation& p);

struct PermSetReport {
  std::size_t set_size = 0;    ///< group order when enumerated, sample count when sampled
  double mean_distance = 0.0;  ///< mean Cayley distance to the identity
  bool sampled = false;
};

/// Mean Cayley distance over an explicit list. Throws std::invalid_argument if empty.
PermSetReport set_distance(std::span<const Permutation> perms);

/// Order of the class-preserving group (product of |c|!), saturated at UINT64_MAX.
std::uint64_t class_group_order(const VertexPartition& classes);

/// Every permutation mapping each vertex into its own class, sorted.
/// Throws CapacityError if the group order exceeds `limit`.
std::vector<Permutation> class_preserving_permutations(const VertexPartition& classes, std::size_t limit);

/// Uniform element of the class-preserving group: an independent shuffle of each class.
Permutation sample_class_preserving(const VertexPartition& classes, Rng& rng);

/// Enumerates the class-preserving group when its order is at most `limit`,
/// otherwise averages over `samples` uniform draws seeded by `seed`.
PermSetReport class_group_distance(const VertexPartition& classes, std::size_t limit, std::size_t samples,
                                   std::uint64_t seed);

}  // namespace lumpkit
