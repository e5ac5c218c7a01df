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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace upe {

// Philox4x32-10 counter-based generator.
// Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.
//
// Every draw is a pure function of (seed, stream, substream, index), so a
// given replication produces the same numbers whether it runs alone, inside
// a batch, or on any worker thread. Streams are used for replication ids,
// substreams for variable ids within a replication.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

// Uniform draw in the open interval (0,1) with 53 usable bits.
double rng_uniform(std::uint64_t seed, std::uint64_t stream,
                   std::uint32_t substream, std::uint64_t index);

// Standard normal draw via the inverse CDF (one uniform per normal).
double rng_normal(std::uint64_t seed, std::uint64_t stream,
                  std::uint32_t substream, std::uint64_t index);

// Bulk versions consume the global indexes [start, start+count); filling a
// range in shards of any size yields identical output.
void rng_fill_uniform_at(std::uint64_t seed, std::uint64_t stream,
                         std::uint32_t substream, std::uint64_t start,
                         std::size_t count, double* out);
void rng_fill_normal_at(std::uint64_t seed, std::uint64_t stream,
                        std::uint32_t substream, std::uint64_t start,
                        std::size_t count, double* out);

inline void rng_fill_uniform(std::uint64_t seed, std::uint64_t stream,
                             std::uint32_t substream, std::size_t count,
                             double* out) {
  rng_fill_uniform_at(seed, stream, substream, 0, count, out);
}
inline void rng_fill_normal(std::uint64_t seed, std::uint64_t stream,
                            std::uint32_t substream, std::size_t count,
                            double* out) {
  rng_fill_normal_at(seed, stream, substream, 0, count, out);
}

}  // namespace upe
