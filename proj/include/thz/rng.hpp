// SPDX-License-Identifier: Apache-2.0
//
// thzmimo - terahertz massive-MIMO channel capacity simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef THZ_RNG_HPP
#define THZ_RNG_HPP

#include <cstdint>

namespace thz::rng {

// Counter-based generator built on the SplitMix64 finalizer. Every draw is
// a pure function of (seed, stream, counter), so results are bit-identical
// under any execution order or degree of parallelism.
//
// Stream splitting convention used throughout the simulator:
//   trial key   = derive_stream(master_seed, trial_index)
//   phase(i, j) = uniform01(trial_key, i * n_t + j)   (row-major entries)

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Stafford mix 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Key of substream `stream` of a master seed.
constexpr std::uint64_t derive_stream(std::uint64_t seed,
                                      std::uint64_t stream) noexcept {
  return mix64(seed + kGolden * (stream + 1));
}

// counter-th draw of the stream identified by `key`, uniform on [0, 1).
constexpr double uniform01(std::uint64_t key, std::uint64_t counter) noexcept {
  return static_cast<double>(mix64(key + kGolden * (counter + 1)) >> 11) *
         0x1.0p-53;
}

}  // namespace thz::rng

#endif
