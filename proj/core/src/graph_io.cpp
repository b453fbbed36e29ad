/*
   Copyright 2026 The critwalk Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "critwalk/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>

#include "critwalk/errors.hpp"

namespace critwalk {
namespace {

// Parses exactly two unsigned integers separated by single spaces.
bool parse_pair(std::string_view line, std::uint64_t& a, std::uint64_t& b) {
  if (!line.empty() && line.back() == '\r') {
    line.remove_suffix(1);
  }
  const char* p = line.data();
  const char* end = line.data() + line.size();
  auto r1 = std::from_chars(p, end, a);
  if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ' ') {
    return false;
  }
  auto r2 = std::from_chars(r1.ptr + 1, end, b);
  return r2.ec == std::errc() && r2.ptr == end;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& why) {
  throw ValidationError("edge list line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.u << ' ' << e.v << '\n';
  }
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) {
    fail(line_no, "missing header \"n m\"");
  }
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  if (!parse_pair(line, n, m)) {
    fail(line_no, "malformed header '" + line + "'");
  }
  if (n > kMaxVertices) {
    fail(line_no, "vertex count exceeds budget");
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  std::set<Edge> seen;
  while (edges.size() < m) {
    ++line_no;
    if (!std::getline(in, line)) {
      fail(line_no, "expected " + std::to_string(m) + " edges, found " +
                        std::to_string(edges.size()));
    }
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    if (!parse_pair(line, u, v)) {
      fail(line_no, "malformed edge '" + line + "'");
    }
    if (u == v) {
      fail(line_no, "self-loop at vertex " + std::to_string(u));
    }
    if (u >= n || v >= n) {
      fail(line_no, "vertex out of range");
    }
    if (u > v) {
      fail(line_no, "edge must be written with u < v");
    }
    const Edge e{static_cast<VertexId>(u), static_cast<VertexId>(v)};
    if (!seen.insert(e).second) {
      fail(line_no, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
    edges.push_back(e);
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line != "\r") {
      fail(line_no, "trailing content after " + std::to_string(m) + " edges");
    }
  }
  return Graph::from_edges(static_cast<VertexId>(n), std::move(edges));
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot open '" + path.string() + "' for writing");
  }
  write_edge_list(g, out);
  if (!out) {
    throw ValidationError("write to '" + path.string() + "' failed");
  }
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open '" + path.string() + "' for reading");
  }
  return read_edge_list(in);
}

}  // namespace critwalk
