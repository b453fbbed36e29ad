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

#include "critwalk/rng.hpp"

#include <charconv>
#include <stdexcept>
#include <string>

namespace critwalk {

__extension__ using Int128 = __int128;
__extension__ using Uint128 = unsigned __int128;

std::uint64_t parse_seed(std::string_view text) {
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  std::uint64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value, base);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw std::invalid_argument("invalid seed: '" + std::string(text) + "'");
  }
  return value;
}

namespace philox {
namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

inline void round(Counter& ctr, const Key& key) {
  const std::uint64_t prod_a = static_cast<std::uint64_t>(kMulA) * ctr[0];
  const std::uint64_t prod_b = static_cast<std::uint64_t>(kMulB) * ctr[2];
  const auto hi_a = static_cast<std::uint32_t>(prod_a >> 32);
  const auto lo_a = static_cast<std::uint32_t>(prod_a);
  const auto hi_b = static_cast<std::uint32_t>(prod_b >> 32);
  const auto lo_b = static_cast<std::uint32_t>(prod_b);
  ctr = {hi_b ^ ctr[1] ^ key[0], lo_b, hi_a ^ ctr[3] ^ key[1], lo_a};
}

}  // namespace

Counter philox4x32_10(Counter ctr, Key key) {
  for (int r = 0; r < 9; ++r) {
    round(ctr, key);
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  round(ctr, key);
  return ctr;
}

}  // namespace philox

std::uint64_t random_bits(const RngSeed& seed, Purpose purpose, std::uint64_t counter) {
  // Key carries the user seed; the 128-bit counter carries the stream, the
  // purpose tag (top 8 bits of the stream word) and the draw index.
  const philox::Key key{static_cast<std::uint32_t>(seed.seed),
                        static_cast<std::uint32_t>(seed.seed >> 32)};
  const std::uint64_t stream_word =
      seed.stream_id ^ (static_cast<std::uint64_t>(purpose) << 56);
  const philox::Counter ctr{static_cast<std::uint32_t>(counter),
                            static_cast<std::uint32_t>(counter >> 32),
                            static_cast<std::uint32_t>(stream_word),
                            static_cast<std::uint32_t>(stream_word >> 32)};
  const auto out = philox::philox4x32_10(ctr, key);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

std::uint64_t CounterEngine::below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("CounterEngine::below: bound must be positive");
  }
  Uint128 product = static_cast<Uint128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<Uint128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace critwalk
