// Copyright 2026 The upe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "upe/rng.hpp"

#include "upe/links.hpp"

namespace upe {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57;

inline void one_round(std::array<std::uint32_t, 4>& ctr,
                      const std::array<std::uint32_t, 2>& key) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM4x32A) * ctr[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM4x32B) * ctr[2];
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

// Counter layout: {index_lo, index_hi, substream, stream_lo}; the stream's
// high half and the seed go into the key.
inline std::array<std::uint32_t, 4> make_ctr(std::uint64_t stream,
                                             std::uint32_t substream,
                                             std::uint64_t block) {
  return {static_cast<std::uint32_t>(block),
          static_cast<std::uint32_t>(block >> 32), substream,
          static_cast<std::uint32_t>(stream)};
}

inline std::array<std::uint32_t, 2> make_key(std::uint64_t seed,
                                             std::uint64_t stream) {
  return {static_cast<std::uint32_t>(seed),
          static_cast<std::uint32_t>(seed >> 32) ^
              static_cast<std::uint32_t>(stream >> 32)};
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;  // 53 bits
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW32A;
      key[1] += kPhiloxW32B;
    }
    one_round(ctr, key);
  }
  return ctr;
}

double rng_uniform(std::uint64_t seed, std::uint64_t stream,
                   std::uint32_t substream, std::uint64_t index) {
  const auto out =
      philox4x32(make_ctr(stream, substream, index >> 1), make_key(seed, stream));
  const int lane = static_cast<int>(index & 1) * 2;
  return to_unit(out[lane], out[lane + 1]);
}

double rng_normal(std::uint64_t seed, std::uint64_t stream,
                  std::uint32_t substream, std::uint64_t index) {
  return normal_quantile(rng_uniform(seed, stream, substream, index));
}

void rng_fill_uniform_at(std::uint64_t seed, std::uint64_t stream,
                         std::uint32_t substream, std::uint64_t start,
                         std::size_t count, double* out) {
  const auto key = make_key(seed, stream);
  std::size_t i = 0;
  std::uint64_t index = start;
  while (i < count) {
    const auto bits = philox4x32(make_ctr(stream, substream, index >> 1), key);
    if ((index & 1) == 0) {
      out[i++] = to_unit(bits[0], bits[1]);
      ++index;
      if (i < count) {
        out[i++] = to_unit(bits[2], bits[3]);
        ++index;
      }
    } else {
      out[i++] = to_unit(bits[2], bits[3]);
      ++index;
    }
  }
}

void rng_fill_normal_at(std::uint64_t seed, std::uint64_t stream,
                        std::uint32_t substream, std::uint64_t start,
                        std::size_t count, double* out) {
  rng_fill_uniform_at(seed, stream, substream, start, count, out);
  for (std::size_t i = 0; i < count; ++i) out[i] = normal_quantile(out[i]);
}

}  // namespace upe
