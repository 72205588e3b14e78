/*
 * Copyright (c) 2026, The affect authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string_view>

namespace affect::num {

/**
 * SplitMix64 generator.
 *
 * Each draw advances the state by the golden-ratio increment 0x9E3779B97F4A7C15
 * and returns the state passed through the finalizer
 *
 *   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
 *   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
 *   z =  z ^ (z >> 31)
 *
 * Only integer arithmetic is involved, so the u64 stream is identical on every
 * platform. uniform() takes the top 53 bits; normal() is Box-Muller on two
 * uniforms without caching the second variate.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Independent stream keyed by a label; does not advance this generator.
  Rng derive(std::string_view tag) const;
  Rng derive(std::uint64_t tag) const;

  std::uint64_t state() const noexcept { return state_; }

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t state_;
};

}  // namespace affect::num
