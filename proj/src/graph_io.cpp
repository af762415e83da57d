#include "lumpkit/graph_io.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "lumpkit/errors.hpp"

namespace lumpkit {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::optional<std::size_t> n;
  std::vector<Edge> edges;
  std::set<Edge> seen;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = strip_comment(raw);
    if (blank(line)) continue;
    std::istringstream fields(line);
    if (!n) {
      std::string tag;
      long long count = -1;
      if (!(fields >> tag >> count) || tag != "n" || count < 0) {
        throw ParseError("expected header 'n <N>'", lineno);
      }
      std::string extra;
      if (fields >> extra) throw ParseError("trailing text after header", lineno);
      n = static_cast<std::size_t>(count);
      continue;
    }
    long long u = -1, v = -1;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra)) throw ParseError("expected 'u v'", lineno);
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= *n || static_cast<std::size_t>(v) >= *n) {
      throw ParseError("vertex out of range", lineno);
    }
    if (u == v) throw ParseError("self-loop", lineno);
    Edge e{static_cast<Vertex>(std::min(u, v)), static_cast<Vertex>(std::max(u, v))};
    if (!seen.insert(e).second) throw ParseError("duplicate edge", lineno);
    edges.push_back(e);
  }
  if (!n) throw ParseError("missing header 'n <N>'");
  return Graph(*n, edges);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "n " << g.num_vertices() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace lumpkit
