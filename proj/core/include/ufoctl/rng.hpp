// Copyright 2026 The ufoctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UFOCTL_RNG_HPP_
#define UFOCTL_RNG_HPP_

#include <cstdint>
#include <random>

namespace ufoctl::rng {

/// splitmix64 finalizer; used to derive independent stream seeds from
/// (master seed, purpose, index) without correlated low bits.
inline uint64_t mix(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t derive(uint64_t seed, uint64_t purpose, uint64_t index = 0) {
  return mix(mix(seed ^ mix(purpose)) ^ mix(index));
}

/// Owned random stream. Each consumer (noise channel, policy sampler,
/// Monte-Carlo loop) holds its own Stream so interleaving between
/// consumers cannot change the draw sequence.
class Stream {
 public:
  explicit Stream(uint64_t seed) : engine_(seed) {}

  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }  // [0,1)
  uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace ufoctl::rng

#endif  // UFOCTL_RNG_HPP_
