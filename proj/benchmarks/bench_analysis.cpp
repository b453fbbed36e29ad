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

#include "critwalk/branching.hpp"
#include "critwalk/components.hpp"
#include "critwalk/electrical.hpp"
#include "critwalk/experiment.hpp"
#include "critwalk/mixing.hpp"

namespace critwalk {
namespace {

// Largest cluster of a critical complete-graph trial with at least `min_size` vertices.
Component critical_cluster(std::uint64_t n, std::size_t min_size) {
  const HostSpec host;
  const double p = critical_window_p(host, n, 1.0);
  for (std::uint64_t t = 0;; ++t) {
    const RngSeed seed = trial_seed({11, 0}, n, t);
    const Graph g = build_host(host, n, seed);
    const Partition part(g, percolate(g, p, seed));
    if (part.size(0) >= min_size) {
      return part.extract(0);
    }
  }
}

void BM_DiameterExact(benchmark::State& state) {
  const Component c = critical_cluster(std::uint64_t(state.range(0)), 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(diameter_exact(c));
  }
  state.counters["cluster"] = double(c.size());
}
BENCHMARK(BM_DiameterExact)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)
    ->Unit(benchmark::kMillisecond);

void BM_DiameterBounds(benchmark::State& state) {
  const Component c = critical_cluster(std::uint64_t(state.range(0)), 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(diameter_bounds(c));
  }
  state.counters["cluster"] = double(c.size());
}
BENCHMARK(BM_DiameterBounds)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);

void BM_MixingTimeExact(benchmark::State& state) {
  const Component c = critical_cluster(std::uint64_t(state.range(0)), 10);
  for (auto _ : state) {
    const LazyChain chain(c);
    benchmark::DoNotOptimize(mixing_time_exact(chain).steps);
  }
  state.counters["cluster"] = double(c.size());
}
BENCHMARK(BM_MixingTimeExact)->RangeMultiplier(4)->Range(1 << 8, 1 << 12)
    ->Unit(benchmark::kMillisecond);

void BM_ResistanceDense(benchmark::State& state) {
  const Component c = critical_cluster(std::uint64_t(state.range(0)), 10);
  for (auto _ : state) {
    const ResistanceNetwork net(c);
    benchmark::DoNotOptimize(effective_resistance(net, 0, LocalId(c.size() - 1)));
  }
  state.counters["cluster"] = double(c.size());
}
BENCHMARK(BM_ResistanceDense)->RangeMultiplier(4)->Range(1 << 8, 1 << 12)
    ->Unit(benchmark::kMillisecond);

void BM_ResistanceIterative(benchmark::State& state) {
  const Component c = critical_cluster(std::uint64_t(state.range(0)), 10);
  for (auto _ : state) {
    const ResistanceNetwork net(c, 0);
    benchmark::DoNotOptimize(effective_resistance(net, 0, LocalId(c.size() - 1)));
  }
  state.counters["cluster"] = double(c.size());
}
BENCHMARK(BM_ResistanceIterative)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)
    ->Unit(benchmark::kMillisecond);

void BM_ProgenyPmf(benchmark::State& state) {
  const auto mmax = std::uint64_t(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gw_total_pmf_exact({3, 0.5}, mmax).mass(1));
  }
}
BENCHMARK(BM_ProgenyPmf)->RangeMultiplier(10)->Range(100, 10000)->Unit(benchmark::kMillisecond);

void BM_ProgenySample(benchmark::State& state) {
  std::uint64_t s = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gw_sample_total({3, 0.5}, {s++, 0}).size);
  }
}
BENCHMARK(BM_ProgenySample);

}  // namespace
}  // namespace critwalk
