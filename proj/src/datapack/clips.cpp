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

#include "affect/datapack/clips.hpp"

#include "affect/errors.hpp"

namespace affect::data {

ClipSet segment_clips(const MoviePack& pack, std::size_t clip_seconds) {
  if (clip_seconds == 0) throw InputError("clip length must be positive");
  ClipSet out;
  const std::size_t n = pack.seconds / clip_seconds;
  out.too_short = n == 0;
  out.clips.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ClipSample clip;
    clip.clip_index = k;
    clip.first_second = k * clip_seconds;
    for (const auto& spec : pack.modalities) {
      const num::Tensor2& full = pack.feature(spec.name);
      num::Tensor2 slice(clip_seconds, full.cols());
      for (std::size_t t = 0; t < clip_seconds; ++t) {
        auto src = full.row(clip.first_second + t);
        std::copy(src.begin(), src.end(), slice.row(t).begin());
      }
      clip.features.emplace(spec.name, std::move(slice));
    }
    double v = 0.0, a = 0.0;
    for (std::size_t t = 0; t < clip_seconds; ++t) {
      v += pack.labels(clip.first_second + t, 0);
      a += pack.labels(clip.first_second + t, 1);
    }
    clip.valence = v / static_cast<double>(clip_seconds);
    clip.arousal = a / static_cast<double>(clip_seconds);
    out.clips.push_back(std::move(clip));
  }
  return out;
}

std::vector<ContextWindow> make_windows(std::size_t n_clips, std::size_t L, WindowMode mode) {
  if (L == 0) throw InputError("window length must be at least 1");
  std::vector<ContextWindow> out;
  if (n_clips == 0) return out;
  if (n_clips < L) {
    out.push_back({0, n_clips, 0});
    return out;
  }
  if (mode == WindowMode::train) {
    for (std::size_t s = 0; s + L <= n_clips; ++s) out.push_back({s, L, 0});
    return out;
  }
  std::size_t s = 0;
  for (; s + L <= n_clips; s += L) out.push_back({s, L, 0});
  const std::size_t r = n_clips - s;
  if (r > 0) out.push_back({n_clips - L, L, L - r});
  return out;
}

}  // namespace affect::data
