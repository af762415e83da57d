#include <gtest/gtest.h>

#include <numeric>

#include "lumpkit/dynamics.hpp"
#include "lumpkit/errors.hpp"
#include "lumpkit/generators.hpp"
#include "oracles.hpp"

using namespace lumpkit;

TEST(StateSpace, RadixEncoding) {
  const StateSpace space(3, 3);
  EXPECT_EQ(space.size(), 27u);
  EXPECT_EQ(space.encode(std::vector<LocalState>{1, 0, 2}), 1u * 9 + 0 * 3 + 2);
  for (std::size_t i = 0; i < space.size(); ++i) {
    EXPECT_EQ(space.encode(space.decode(i)), i);
    EXPECT_EQ(space.decode(i), oracle::decode(i, 3, 3));
  }
  EXPECT_THROW(StateSpace(21, 2), CapacityError);
  EXPECT_NO_THROW(StateSpace(20, 2));
}

TEST(Dynamics, SummaryCounts) {
  EXPECT_EQ(summary_counts(std::vector<LocalState>{0, 1, 0}, 2), (CountVector{2, 1}));
  EXPECT_FALSE(summary_counts(std::vector<LocalState>{}, 2).has_value());
  EXPECT_EQ(summary_counts(std::vector<LocalState>{2, 0, 2}, 3), summary_counts(std::vector<LocalState>{0, 2, 2}, 3));
  EXPECT_EQ(*summary_counts(std::vector<LocalState>{2, 0, 2}, 3), (CountVector{1, 0, 2}));
  EXPECT_THROW(summary_counts(std::vector<LocalState>{2}, 2), std::out_of_range);
}

TEST(Dynamics, NeighbourConfig) {
  EXPECT_TRUE(neighbor_config(Graph(2), std::vector<LocalState>{0, 1}, 0).empty());
  const Graph star = star_graph(4);
  auto c = neighbor_config(star, std::vector<LocalState>{0, 1, 1, 0}, 0);
  std::sort(c.begin(), c.end());
  EXPECT_EQ(c, (std::vector<LocalState>{0, 1, 1}));
  EXPECT_EQ(neighbor_config(path_graph(2), std::vector<LocalState>{0, 1}, 0), (std::vector<LocalState>{1}));
  EXPECT_THROW(neighbor_config(path_graph(2), std::vector<LocalState>{0, 1}, 2), std::out_of_range);
}

TEST(Dynamics, SisRates) {
  const auto sis = sis_dynamics(0.5, 0.5, 0.0);
  EXPECT_DOUBLE_EQ(sis.rate(0, 1, CountVector{1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(sis.rate(1, 0, CountVector{1, 2}), 0.5);
  EXPECT_DOUBLE_EQ(sis.rate(1, 0, std::nullopt), 0.5);
  EXPECT_DOUBLE_EQ(sis.rate(0, 1, CountVector{3, 0}), 0.0);
  EXPECT_DOUBLE_EQ(sis_dynamics(0.5, 0.5, 0.1).rate(0, 1, std::nullopt), 0.1);
  EXPECT_DOUBLE_EQ(sis.rate(1, 1, CountVector{0, 3}), 0.0);
  EXPECT_THROW(sis_dynamics(-1, 0, 0), std::invalid_argument);
}

TEST(Dynamics, P2PRates) {
  P2PParams params;
  params.buffer_length = 2;
  params.contact_rate = 0.8;
  params.shift_rate = 1.0;
  params.server_rate = 0.3;
  const auto p2p = p2p_dynamics(params);
  EXPECT_EQ(p2p.num_local_states(), 4u);
  // u = empty buffer, single neighbour holding both chunks: index 2 filled at a/2.
  const CountVector one_full{0, 0, 0, 1};
  EXPECT_DOUBLE_EQ(p2p.rate(0b00, 0b10, one_full), 0.8 / 2);
  // Nobody holds index 2.
  EXPECT_DOUBLE_EQ(p2p.rate(0b00, 0b10, CountVector{1, 1, 0, 0}), 0.0);
  // Server fills index 1 regardless of neighbours.
  EXPECT_DOUBLE_EQ(p2p.rate(0b00, 0b01, std::nullopt), 0.3);
  // Shift whenever the buffer is nonempty; index L is played out.
  EXPECT_DOUBLE_EQ(p2p.rate(0b10, 0b00, std::nullopt), 1.0);
  EXPECT_DOUBLE_EQ(p2p.rate(0b11, 0b10, std::nullopt), 1.0);
  EXPECT_DOUBLE_EQ(p2p.rate(0b01, 0b10, std::nullopt), 1.0);

  params.strategy = ChunkStrategy::edf;
  EXPECT_DOUBLE_EQ(p2p_dynamics(params).rate(0b00, 0b10, one_full), 0.8);
  params.strategy = ChunkStrategy::ldf;
  EXPECT_DOUBLE_EQ(p2p_dynamics(params).rate(0b00, 0b10, one_full), 0.0);
  EXPECT_THROW(parse_chunk_strategy("fifo"), std::invalid_argument);
}

TEST(Dynamics, TableRules) {
  RateRule r;
  r.from = 0;
  r.to = 1;
  r.base = 0.1;
  r.per_count = {0.0, 2.0, 0.0};
  const auto dyn = table_dynamics(3, {r});
  EXPECT_DOUBLE_EQ(dyn.rate(0, 1, CountVector{0, 2, 1}), 4.1);
  EXPECT_DOUBLE_EQ(dyn.rate(0, 1, std::nullopt), 0.1);
  EXPECT_DOUBLE_EQ(dyn.rate(1, 2, CountVector{0, 2, 1}), 0.0);
  RateRule bad = r;
  bad.to = 0;
  EXPECT_THROW(table_dynamics(3, {bad}), std::invalid_argument);
}

TEST(Generator, SisSingleEdgeByHand) {
  const auto q = build_generator(path_graph(2), sis_dynamics(1, 1, 0));
  Eigen::MatrixXd expected(4, 4);
  // States SS, SI, IS, II.
  expected << 0, 0, 0, 0,  //
      1, -2, 0, 1,         //
      1, 0, -2, 1,         //
      0, 1, 1, -2;
  EXPECT_TRUE(q.to_dense().isApprox(expected));
  EXPECT_DOUBLE_EQ(q.rate(1, 3), 1.0);
  EXPECT_DOUBLE_EQ(q.rate(1, 0), 1.0);
}

TEST(Generator, MatchesDenseOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = erdos_renyi(6, 0.4, seed);
    const auto q = build_generator(g, sis_dynamics(0.7, 0.4, 0.05)).to_dense();
    EXPECT_LT((q - oracle::sis_generator(g, 0.7, 0.4, 0.05)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Generator, StructuralInvariants) {
  const Graph g = barabasi_albert(6, 2, 3);
  P2PParams params;
  params.buffer_length = 2;
  for (const auto& dyn : {sis_dynamics(0.5, 0.5, 1e-3), p2p_dynamics(params)}) {
    const auto q = build_generator(g, dyn, {1 << 14, 1 << 20});
    const std::size_t k = dyn.num_local_states();
    const auto full = q.full();
    for (std::size_t x = 0; x < q.dim(); ++x) {
      EXPECT_NEAR(full.row_sum(x), 0.0, 1e-12);
      const auto row = q.off_diagonal().row(x);
      const auto xs = oracle::decode(x, g.num_vertices(), k);
      for (std::size_t c = 0; c < row.size(); ++c) {
        const auto ys = oracle::decode(row.cols[c], g.num_vertices(), k);
        int differ = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) differ += xs[i] != ys[i];
        EXPECT_EQ(differ, 1);
        if (k == 2) {
          const int sx = std::accumulate(xs.begin(), xs.end(), 0), sy = std::accumulate(ys.begin(), ys.end(), 0);
          EXPECT_EQ(std::abs(sx - sy), 1);
        }
      }
    }
  }
}

TEST(Generator, AbsorbingWithoutSpontaneousInfection) {
  const auto q = build_generator(cycle_graph(4), sis_dynamics(1, 1, 0));
  EXPECT_EQ(q.off_diagonal().row(0).size(), 0u);
  EXPECT_EQ(q.dim(), 16u);
}

TEST(Generator, CapacityLimits) {
  EXPECT_THROW(build_generator(path_graph(5), sis_dynamics(1, 1, 0), {16, 1 << 20}), CapacityError);
  EXPECT_THROW(build_generator(path_graph(5), sis_dynamics(1, 1, 0.1), {1 << 10, 10}), CapacityError);
}

TEST(Generator, NeighbourhoodInvarianceUnderAutomorphisms) {
  Rng rng(5);
  for (const Graph& g : {cycle_graph(6), star_graph(5), path_graph(5)}) {
    const auto aut = automorphisms(g);
    for (int trial = 0; trial < 50; ++trial) {
      const auto& f = aut[rng.uniform_index(aut.size())];
      std::vector<LocalState> z(g.num_vertices());
      for (auto& s : z) s = static_cast<LocalState>(rng.uniform_index(3));
      std::vector<LocalState> fz(z.size());
      for (Vertex i = 0; i < z.size(); ++i) fz[i] = z[f(i)];
      const Permutation finv = f.inverse();
      for (Vertex i = 0; i < z.size(); ++i) {
        EXPECT_EQ(summary_counts(neighbor_config(g, fz, finv(i)), 3), summary_counts(neighbor_config(g, z, i), 3));
      }
    }
  }
}

TEST(Generator, RelabelInvariance) {
  const Graph g = erdos_renyi(5, 0.5, 8);
  const Permutation p(std::vector<Vertex>{2, 4, 0, 1, 3});
  const auto dyn = sis_dynamics(0.6, 0.3, 0.01);
  const auto q = build_generator(g, dyn).to_dense();
  const auto qp = build_generator(relabel(g, p), dyn).to_dense();
  // Vertex i of g is vertex p(i) of the relabelled graph.
  auto map_state = [&](std::size_t s) {
    const auto x = oracle::decode(s, 5, 2);
    std::vector<std::uint32_t> y(5);
    for (Vertex i = 0; i < 5; ++i) y[p(i)] = x[i];
    return oracle::encode(y, 2);
  };
  for (std::size_t s = 0; s < 32; ++s)
    for (std::size_t t = 0; t < 32; ++t) EXPECT_DOUBLE_EQ(q(s, t), qp(map_state(s), map_state(t)));
}
