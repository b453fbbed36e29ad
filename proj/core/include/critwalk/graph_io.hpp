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

#pragma once

#include <filesystem>
#include <iosfwd>

#include "critwalk/graph.hpp"

namespace critwalk {

// Edge-list text format: first line "n m", then m lines "u v" (0-indexed,
// u < v), each terminated by '\n'. Loading rejects malformed lines, self-loops,
// duplicate edges and count mismatches with a ValidationError naming the line.

void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);

void save_edge_list(const Graph& g, const std::filesystem::path& path);
Graph load_edge_list(const std::filesystem::path& path);

}  // namespace critwalk
