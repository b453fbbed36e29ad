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

#include <benchmark/benchmark.h>

#include "critwalk/components.hpp"
#include "critwalk/experiment.hpp"
#include "critwalk/graph.hpp"
#include "critwalk/percolation.hpp"
#include "critwalk/rng.hpp"

namespace critwalk {
namespace {

void BM_RandomBits(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_bits({7, 0}, Purpose::kGeneric, i++));
  }
}
BENCHMARK(BM_RandomBits);

void BM_RandomRegular(benchmark::State& state) {
  const auto n = static_cast<VertexId>(state.range(0));
  std::uint64_t s = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_regular(n, 3, {s++, 0}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RandomRegular)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

// Percolation plus cluster labelling at the critical point.
void BM_PercolatePartition(benchmark::State& state) {
  const auto n = static_cast<VertexId>(state.range(0));
  const Graph g = random_regular(n, 3, {1, 0});
  const HostSpec host{Family::kRegular, 3, 2};
  const double p = critical_window_p(host, n, 0.0);
  std::uint64_t s = 0;
  for (auto _ : state) {
    const Partition part(g, percolate(g, p, {s++, 0}));
    benchmark::DoNotOptimize(part.size(0));
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(g.edge_count()));
}
BENCHMARK(BM_PercolatePartition)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

// The complete graph never materializes its edges.
void BM_CompleteHostTrial(benchmark::State& state) {
  const auto n = std::uint64_t(state.range(0));
  const HostSpec host;
  const double p = critical_window_p(host, n, 0.0);
  std::uint64_t t = 0;
  for (auto _ : state) {
    const RngSeed seed = trial_seed({3, 0}, n, t++);
    const Graph g = build_host(host, n, seed);
    const Partition part(g, percolate(g, p, seed));
    benchmark::DoNotOptimize(part.size(0));
  }
}
BENCHMARK(BM_CompleteHostTrial)->RangeMultiplier(4)->Range(1 << 12, 1 << 16)
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace critwalk
