#include "lumpkit/perm_metrics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "lumpkit/errors.hpp"

namespace lumpkit {

std::size_t cayley_distance(const Permutation& p) {
  const std::size_t n = p.size();
  std::vector<char> seen(n, 0);
  std::size_t cycles = 0;
  for (Vertex i = 0; i < n; ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (Vertex j = i; !seen[j]; j = p(j)) seen[j] = 1;
  }
  return n - cycles;
}

PermSetReport set_distance(std::span<const Permutation> perms) {
  if (perms.empty()) throw std::invalid_argument("permutation set is empty");
  double total = 0.0;
  for (const auto& p : perms) total += static_cast<double>(cayley_distance(p));
  return {perms.size(), total / static_cast<double>(perms.size()), false};
}

std::uint64_t class_group_order(const VertexPartition& classes) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t order = 1;
  for (const auto& c : classes.classes()) {
    for (std::uint64_t f = 2; f <= c.size(); ++f) {
      if (order > kMax / f) return kMax;
      order *= f;
    }
  }
  return order;
}

std::vector<Permutation> class_preserving_permutations(const VertexPartition& classes, std::size_t limit) {
  if (class_group_order(classes) > limit) {
    throw CapacityError("class-preserving group exceeds " + std::to_string(limit) + " elements");
  }
  const std::size_t n = classes.num_vertices();
  std::vector<std::vector<Vertex>> images(classes.classes().begin(), classes.classes().end());
  std::vector<Permutation> out;
  // Odometer over per-class arrangements, each advanced with next_permutation.
  while (true) {
    std::vector<Vertex> image(n);
    for (std::size_t c = 0; c < images.size(); ++c) {
      const auto& members = classes.classes()[c];
      for (std::size_t k = 0; k < members.size(); ++k) image[members[k]] = images[c][k];
    }
    out.emplace_back(std::move(image));
    std::size_t c = 0;
    while (c < images.size() && !std::next_permutation(images[c].begin(), images[c].end())) ++c;
    if (c == images.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

Permutation sample_class_preserving(const VertexPartition& classes, Rng& rng) {
  std::vector<Vertex> image(classes.num_vertices());
  for (const auto& members : classes.classes()) {
    std::vector<Vertex> shuffled = members;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[rng.uniform_index(i)]);
    }
    for (std::size_t k = 0; k < members.size(); ++k) image[members[k]] = shuffled[k];
  }
  return Permutation(std::move(image));
}

PermSetReport class_group_distance(const VertexPartition& classes, std::size_t limit, std::size_t samples,
                                   std::uint64_t seed) {
  if (class_group_order(classes) <= limit) {
    const auto perms = class_preserving_permutations(classes, limit);
    return set_distance(perms);
  }
  if (samples == 0) throw std::invalid_argument("sample count must be positive");
  Rng rng(seed);
  double total = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    total += static_cast<double>(cayley_distance(sample_class_preserving(classes, rng)));
  }
  return {samples, total / static_cast<double>(samples), true};
}

}  // namespace lumpkit
