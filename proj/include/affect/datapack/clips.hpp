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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "affect/datapack/pack.hpp"
#include "affect/numcore/tensor.hpp"

namespace affect::data {

inline constexpr std::size_t kClipSeconds = 10;

/// One fixed-length clip of a movie. Labels are the mean of the clip's per-second labels.
struct ClipSample {
  std::size_t clip_index = 0;
  std::size_t first_second = 0;
  std::map<std::string, num::Tensor2> features;  // clip_seconds x dim
  double valence = 0.0;
  double arousal = 0.0;

  double label(Task task) const { return task == Task::valence ? valence : arousal; }
};

struct ClipSet {
  std::vector<ClipSample> clips;
  /// Set when the movie is shorter than one clip.
  bool too_short = false;
};

/// Non-overlapping clips aligned to second 0; trailing seconds that do not fill a clip are dropped.
ClipSet segment_clips(const MoviePack& pack, std::size_t clip_seconds = kClipSeconds);

enum class WindowMode { train, infer };

/**
 * Consecutive clips [first, first + length) of one movie. Only predictions at
 * positions >= consume_from (relative to first) are used downstream; this is 0
 * except for the overlapping tail window in infer mode.
 */
struct ContextWindow {
  std::size_t first = 0;
  std::size_t length = 0;
  std::size_t consume_from = 0;

  friend bool operator==(const ContextWindow&, const ContextWindow&) = default;
};

/**
 * train: every stride-1 window of length L.
 * infer: stride-L windows; a remainder r > 0 adds one window over the last L
 * clips whose last r positions are consumed.
 * With fewer than L clips (but at least one) either mode yields one window over all of them.
 */
std::vector<ContextWindow> make_windows(std::size_t n_clips, std::size_t L, WindowMode mode);

}  // namespace affect::data
