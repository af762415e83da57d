#pragma once

#include <iosfwd>
#include <string>

#include "lumpkit/graph.hpp"

namespace lumpkit {

// Edge-list text format:
//
//   # comment
//   n 5
//   0 1
//   1 2
//
// The first non-comment line declares the vertex count; every following line
// is one edge "u v" with u != v. Duplicate edges are rejected.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace lumpkit
