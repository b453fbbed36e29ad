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

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace critwalk {

// Counter-based randomness. Every random quantity in the library is a pure
// function of (seed, stream_id, purpose, counter), so results do not depend
// on evaluation order or on how trials are spread across threads.

struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  RngSeed with_stream(std::uint64_t stream) const { return {seed, stream}; }
  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

// Parses decimal or 0x-prefixed hexadecimal. Throws std::invalid_argument.
std::uint64_t parse_seed(std::string_view text);

namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., SC'11).
Counter philox4x32_10(Counter ctr, Key key);

}  // namespace philox

// Domain separation between independent consumers of one (seed, stream).
enum class Purpose : std::uint32_t {
  kEdgeUniform = 1,
  kGraphBuild = 2,
  kImplicitSampler = 3,
  kRootChoice = 4,
  kBranching = 5,
  kGeneric = 6,
};

// 64 random bits for (seed, stream, purpose, counter).
std::uint64_t random_bits(const RngSeed& seed, Purpose purpose, std::uint64_t counter);

inline double bits_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// The per-edge uniform in [0,1) that decides retention of edge `edge`.
inline double edge_uniform(const RngSeed& seed, std::uint64_t edge) {
  return bits_to_unit(random_bits(seed, Purpose::kEdgeUniform, edge));
}

// UniformRandomBitGenerator over one (seed, stream, purpose) lane, so the
// standard <random> distributions and algorithms can consume it.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  CounterEngine(RngSeed seed, Purpose purpose, std::uint64_t start = 0)
      : seed_(seed), purpose_(purpose), counter_(start) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return random_bits(seed_, purpose_, counter_++); }

  double uniform() { return bits_to_unit((*this)()); }

  // Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t position() const { return counter_; }

 private:
  RngSeed seed_;
  Purpose purpose_;
  std::uint64_t counter_;
};

}  // namespace critwalk
