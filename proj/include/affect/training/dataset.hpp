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
#include <cstdint>
#include <string>
#include <vector>

#include "affect/datapack/clips.hpp"
#include "affect/datapack/pack.hpp"

namespace affect::train {

struct MovieClips {
  std::string movie_id;
  std::vector<data::ClipSample> clips;
  /// Per-second labels for the seconds covered by clips, columns valence/arousal.
  num::Tensor2 second_labels;
};

struct Dataset {
  std::vector<MovieClips> movies;
  std::vector<data::ModalitySpec> modalities;
  std::size_t clip_seconds = data::kClipSeconds;

  const data::ModalitySpec& spec(const std::string& modality) const;
};

/// Segments every pack; all packs must declare the same modalities.
Dataset build_dataset(const std::vector<data::MoviePack>& packs,
                      std::size_t clip_seconds = data::kClipSeconds);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/**
 * Whole-movie split. round(fraction * n) movies are held out (at least one when
 * fraction > 0 and n >= 2, never all of them), chosen by a seeded shuffle;
 * both lists are returned in ascending order.
 */
Split split_movies(std::size_t n_movies, double fraction, std::uint64_t seed);

/// References to every clip of the listed movies, in order.
std::vector<const data::ClipSample*> collect_clips(const Dataset& ds,
                                                   const std::vector<std::size_t>& movies);

std::vector<double> clip_labels(std::span<const data::ClipSample* const> clips, data::Task task);

}  // namespace affect::train
