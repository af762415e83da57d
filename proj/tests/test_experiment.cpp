#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lumpkit/errors.hpp"
#include "lumpkit/experiment.hpp"

using namespace lumpkit;
namespace fs = std::filesystem;

namespace {

const std::string kData = LUMPKIT_TEST_DATA;
const std::string kCli = LUMPKIT_CLI;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lumpkit_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, std::string* out = nullptr) {
  const fs::path log = fs::temp_directory_path() / "lumpkit_cli_out.txt";
  const int status = std::system((kCli + " " + args + " > " + log.string() + " 2>&1").c_str());
  if (out) {
    std::ifstream in(log);
    std::stringstream s;
    s << in.rdbuf();
    *out = s.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Seeds, Parsing) {
  EXPECT_EQ(parse_seeds("7"), (std::vector<std::uint64_t>{7}));
  EXPECT_EQ(parse_seeds("1..4"), (std::vector<std::uint64_t>{1, 2, 3, 4}));
  EXPECT_EQ(parse_seeds("9,1..2,2"), (std::vector<std::uint64_t>{1, 2, 9}));
  EXPECT_THROW(parse_seeds("4..1"), ConfigError);
  EXPECT_THROW(parse_seeds("x"), ConfigError);
  EXPECT_THROW(parse_seeds(""), ConfigError);
}

TEST(Config, ParsesFullDocument) {
  const auto c = parse_config(R"({
    "graph": {"kind": "barabasi_albert", "n": 7, "m": 2},
    "dynamics": {"name": "sis", "a": 0.4, "b": 0.6, "eps": 0.01},
    "k_max": 3, "weight_mode": "uniform", "seeds": "2..4",
    "tolerances": {"dynkin": 1e-8, "stationary_residual": 1e-11},
    "limits": {"max_states": 4096}, "jobs": 2
  })");
  EXPECT_EQ(c.graph.kind, GraphKind::barabasi_albert);
  EXPECT_EQ(c.graph.params.n, 7u);
  EXPECT_DOUBLE_EQ(c.dynamics.b, 0.6);
  EXPECT_EQ(c.k_max, 3u);
  EXPECT_EQ(c.weight_mode, WeightMode::uniform);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{2, 3, 4}));
  EXPECT_DOUBLE_EQ(c.dynkin_tol, 1e-8);
  EXPECT_EQ(c.limits.max_states, 4096u);
  EXPECT_EQ(c.jobs, 2u);
}

TEST(Config, TableAndP2P) {
  const auto t = parse_config(R"({"dynamics": {"name": "table", "num_states": 3, "rules": [
      {"from": 0, "to": 1, "base": 0.1, "per_count": [0, 1, 0]},
      {"from": 1, "to": 2, "base": 0.5, "pattern": [null, 2, null]},
      {"from": 2, "to": 0, "base": 1.0}]}})");
  EXPECT_EQ(t.dynamics.rules.size(), 3u);
  EXPECT_TRUE(t.dynamics.rules[1].pattern.has_value());
  EXPECT_EQ(make_dynamics(t.dynamics).num_local_states(), 3u);
  const auto p = parse_config(R"({"dynamics": {"name": "p2p", "buffer_length": 2, "strategy": "edf"}})");
  EXPECT_EQ(p.dynamics.p2p.strategy, ChunkStrategy::edf);
  EXPECT_EQ(make_dynamics(p.dynamics).num_local_states(), 4u);
}

TEST(Config, ErrorsNameTheField) {
  auto field_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of(R"({"graph": {"kind": "lattice"}})"), "graph.kind");
  EXPECT_EQ(field_of(R"({"graph": {"p": 2}})"), "graph.p");
  EXPECT_EQ(field_of(R"({"graph": {"n": -3}})"), "graph.n");
  EXPECT_EQ(field_of(R"({"graph": {"file": "/nonexistent/g.txt"}})"), "graph.file");
  EXPECT_EQ(field_of(R"({"dynamics": {"name": "sir"}})"), "dynamics.name");
  EXPECT_EQ(field_of(R"({"dynamics": {"a": "fast"}})"), "dynamics.a");
  EXPECT_EQ(field_of(R"({"colour": 1})"), "colour");
  EXPECT_EQ(field_of(R"({"jobs": 0})"), "jobs");
  EXPECT_EQ(field_of(R"({"dynamics": {"name": "table", "rules": [{"from": 0}]}})"), "dynamics.rules[0]");
  EXPECT_EQ(field_of("{not json"), "");
}

TEST(Commands, GraphReport) {
  ExperimentConfig c;
  c.graph.kind = GraphKind::path;
  c.graph.params.n = 5;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_graph(c, out, err), 0);
  const std::string text = out.str();
  EXPECT_NE(text.find("aut_order 2\n"), std::string::npos);
  EXPECT_NE(text.find("diameter 4\n"), std::string::npos);
  EXPECT_NE(text.find("1 2\n2 3\n"), std::string::npos);
  EXPECT_NE(text.find("stable_from 2\n"), std::string::npos);

  c.graph.kind = GraphKind::complete;
  c.graph.params.n = 4;
  std::ostringstream k4;
  cmd_graph(c, k4, err);
  EXPECT_NE(k4.str().find("aut_order 24\n"), std::string::npos);
  c.graph.kind = GraphKind::cycle;
  c.graph.params.n = 5;
  std::ostringstream c5;
  cmd_graph(c, c5, err);
  EXPECT_NE(c5.str().find("aut_order 10\n"), std::string::npos);
  EXPECT_NE(c5.str().find("1 1\n"), std::string::npos);
}

TEST(Commands, KlCsvFormatAndDeterminism) {
  ExperimentConfig c;
  c.graph.kind = GraphKind::erdos_renyi;
  c.graph.params = {7, 0.3, 2, 2};
  c.seeds = {1, 2, 3, 4};
  c.output_dir = scratch("kl").string();
  std::ostringstream a, err;
  EXPECT_EQ(cmd_kl(c, a, err), 0);
  c.jobs = 3;
  std::ostringstream b;
  cmd_kl(c, b, err);
  EXPECT_EQ(a.str(), b.str());
  const auto rows = lines(a.str());
  ASSERT_GT(rows.size(), 4u);
  EXPECT_EQ(rows[0], "seed,k,M_k,compression,kl_pi,kl_P,exact");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(std::count(rows[i].begin(), rows[i].end(), ','), 6);
  }
  EXPECT_TRUE(fs::exists(fs::path(c.output_dir) / "kl.csv"));
  EXPECT_TRUE(fs::exists(fs::path(c.output_dir) / "kl_seed_3.csv"));
  EXPECT_TRUE(fs::exists(fs::path(c.output_dir) / "kl_mean.csv"));
}

TEST(Commands, KlCompleteGraphHasZeroPLiftingKL) {
  ExperimentConfig c;
  c.graph.kind = GraphKind::complete;
  c.graph.params.n = 5;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_kl(c, out, err), 0);
  const auto rows = lines(out.str());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<std::string> f;
    std::istringstream in(rows[i]);
    for (std::string x; std::getline(in, x, ',');) f.push_back(x);
    EXPECT_LE(std::abs(std::stod(f[5])), 1e-12);
    EXPECT_EQ(f[6], "1");
  }
}

TEST(Commands, KlReducibleSeedsGiveErrorRows) {
  ExperimentConfig c;
  c.graph.kind = GraphKind::cycle;
  c.graph.params.n = 4;
  c.dynamics.eps = 0.0;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_kl(c, out, err), 1);
  EXPECT_EQ(lines(out.str()).at(1), "1,,,,,,error");
  EXPECT_NE(err.str().find("reducible"), std::string::npos);
  c.weight_mode = WeightMode::uniform;
  std::ostringstream ok;
  EXPECT_EQ(cmd_kl(c, ok, err), 0);
}

TEST(Commands, MatrixAndCheck) {
  MatrixCommand m;
  m.matrix_file = kData + "/counterexample_T.txt";
  m.partition_files = {kData + "/counterexample_coarse.txt", kData + "/counterexample_fine.txt", kData + "/counterexample_identity.txt"};
  m.lifting = Lifting::p;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_matrix(m, out, err), 0);
  const auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), 4u);
  auto value = [](const std::string& row) { return std::stod(row.substr(row.rfind(',') + 1)); };
  EXPECT_NEAR(value(rows[1]), 0.0019067, 1e-4);
  EXPECT_NEAR(value(rows[2]), 0.0308801, 1e-4);
  EXPECT_EQ(value(rows[3]), 0.0);

  std::ostringstream check;
  EXPECT_EQ(cmd_check(m.matrix_file, kData + "/counterexample_coarse.txt", 1e-9, check, err), 1);
  EXPECT_EQ(check.str().rfind("inexact max_deviation=", 0), 0u);
  std::ostringstream singles;
  EXPECT_EQ(cmd_check(m.matrix_file, kData + "/counterexample_identity.txt", 1e-9, singles, err), 0);
  EXPECT_THROW(cmd_check(m.matrix_file, kData + "/edge_sis_population.txt", 1e-9, singles, err), ParseError);
}

TEST(Commands, Permdist) {
  ExperimentConfig c;
  c.graph.kind = GraphKind::cycle;
  c.graph.params.n = 3;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_permdist(c, 1000, 100, out, err), 0);
  EXPECT_NE(out.str().find("1,aut,6,1.16666667,exact"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  std::string out;
  EXPECT_EQ(run("check " + kData + "/counterexample_T.txt " + kData + "/counterexample_coarse.txt", &out), 1);
  EXPECT_EQ(run("check " + kData + "/edge_sis_generator.txt " + kData + "/edge_sis_population.txt", &out), 0) << out;
  EXPECT_EQ(run("check " + kData + "/counterexample_T.txt " + kData + "/edge_sis_population.txt", &out), 2);
  EXPECT_EQ(run("matrix " + kData + "/counterexample_T.txt " + kData + "/counterexample_coarse.txt --lifting P", &out), 0);
  EXPECT_NE(out.find(",P,0.00190673861"), std::string::npos) << out;
  EXPECT_EQ(run("graph --graph path -n 5", &out), 0);
  EXPECT_EQ(run("graph --graph lattice", &out), 2);
  EXPECT_EQ(run("kl --graph cycle -n 4 --eps 0", &out), 1);
  EXPECT_EQ(run("kl --seed 3..1", &out), 2);
  EXPECT_EQ(run("bogus", &out), 2);
  EXPECT_EQ(run("", &out), 2);
}

TEST(Cli, ConfigFileWithOverrides) {
  const fs::path dir = scratch("cli");
  std::ofstream(dir / "g.txt") << "n 4\n0 1\n1 2\n2 3\n3 0\n";
  std::ofstream(dir / "cfg.json") << R"({"graph": {"file": "g.txt"}, "dynamics": {"name": "sis"}, "seeds": [5]})";
  std::string a, b;
  EXPECT_EQ(run("kl -c " + (dir / "cfg.json").string(), &a), 0) << a;
  EXPECT_EQ(run("kl -c " + (dir / "cfg.json").string(), &b), 0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(lines(a).at(1).rfind("5,1,", 0), 0u) << a;
  std::string over;
  EXPECT_EQ(run("kl -c " + (dir / "cfg.json").string() + " --seed 8", &over), 0);
  EXPECT_EQ(lines(over).at(1).rfind("8,1,", 0), 0u);
}
