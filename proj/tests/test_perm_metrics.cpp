#include <gtest/gtest.h>

#include <numeric>

#include "lumpkit/errors.hpp"
#include "lumpkit/generators.hpp"
#include "lumpkit/perm_metrics.hpp"
#include "oracles.hpp"

using namespace lumpkit;

namespace {

Permutation random_permutation(std::size_t n, Rng& rng) {
  std::vector<Vertex> image(n);
  std::iota(image.begin(), image.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(image[i - 1], image[rng.uniform_index(i)]);
  return Permutation(image);
}

}  // namespace

TEST(Cayley, Examples) {
  EXPECT_EQ(cayley_distance(Permutation::identity(5)), 0u);
  EXPECT_EQ(cayley_distance(Permutation(std::vector<Vertex>{1, 0, 2, 3, 4})), 1u);
  const Permutation three_cycle(std::vector<Vertex>{1, 2, 0, 3, 4});
  EXPECT_EQ(cayley_distance(three_cycle), 2u);
  EXPECT_EQ(oracle::transposition_distance({1, 2, 0, 3, 4}), 2u);
}

TEST(Cayley, MatchesBreadthFirstSearch) {
  for (const auto& p : oracle::all_permutations(5)) {
    EXPECT_EQ(cayley_distance(Permutation(p)), oracle::transposition_distance(p));
  }
}

TEST(Cayley, InverseAndSubadditivity) {
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(8);
    const auto p = random_permutation(n, rng), q = random_permutation(n, rng);
    EXPECT_EQ(cayley_distance(p), cayley_distance(p.inverse()));
    EXPECT_LE(cayley_distance(p.compose(q)), cayley_distance(p) + cayley_distance(q));
  }
}

TEST(SetDistance, Examples) {
  const std::vector<Permutation> id{Permutation::identity(4)};
  EXPECT_EQ(set_distance(id).mean_distance, 0.0);
  const auto s3 = automorphisms(cycle_graph(3));
  ASSERT_EQ(s3.size(), 6u);
  EXPECT_NEAR(set_distance(s3).mean_distance, 7.0 / 6.0, 1e-15);
  EXPECT_FALSE(set_distance(s3).sampled);
  EXPECT_THROW(set_distance(std::vector<Permutation>{}), std::invalid_argument);
}

TEST(ClassGroup, EnumerationAndSampling) {
  const auto classes = VertexPartition::from_classes(5, {{0, 4}, {1, 2, 3}});
  EXPECT_EQ(class_group_order(classes), 12u);
  const auto perms = class_preserving_permutations(classes, 100);
  ASSERT_EQ(perms.size(), 12u);
  for (const auto& p : perms)
    for (Vertex v = 0; v < 5; ++v) EXPECT_EQ(classes.class_of(p(v)), classes.class_of(v));
  EXPECT_THROW(class_preserving_permutations(classes, 11), CapacityError);

  // Brute force: filter all of S_5.
  std::size_t brute = 0;
  double total = 0;
  for (const auto& f : oracle::all_permutations(5)) {
    bool keeps = true;
    for (Vertex v = 0; v < 5; ++v) keeps &= classes.class_of(f[v]) == classes.class_of(v);
    if (keeps) {
      ++brute;
      total += static_cast<double>(oracle::transposition_distance(f));
    }
  }
  EXPECT_EQ(brute, 12u);
  const auto exact = class_group_distance(classes, 100, 0, 1);
  EXPECT_FALSE(exact.sampled);
  EXPECT_NEAR(exact.mean_distance, total / 12, 1e-15);

  // Sampling converges to the exact mean.
  const auto sampled = class_group_distance(classes, 5, 20000, 1);
  EXPECT_TRUE(sampled.sampled);
  EXPECT_EQ(sampled.set_size, 20000u);
  EXPECT_NEAR(sampled.mean_distance, exact.mean_distance, 0.05);
  EXPECT_EQ(class_group_distance(classes, 5, 100, 3).mean_distance,
            class_group_distance(classes, 5, 100, 3).mean_distance);
}

TEST(ClassGroup, OrderSaturates) {
  EXPECT_EQ(class_group_order(VertexPartition::single_class(30)), std::numeric_limits<std::uint64_t>::max());
  EXPECT_EQ(class_group_order(VertexPartition::discrete(30)), 1u);
}
