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
#include <filesystem>
#include <vector>

#include "affect/datapack/pack.hpp"

namespace affect::data {

/// Modalities of the default extractor set: audio, scene, expression, action.
std::vector<ModalitySpec> default_modalities();

struct SyntheticOptions {
  std::size_t movies = 4;
  std::size_t seconds = 300;
  std::vector<ModalitySpec> modalities = default_modalities();
  std::uint64_t seed = 0;
  /// Appends a modality named "noise" (dim of the first modality) unrelated to the labels.
  bool noise_modality = false;
  /// Standard deviation of the per-entry observation noise.
  double feature_noise = 0.1;
};

/**
 * Synthetic movies driven by a bounded AR(1) latent
 *
 *   e_t = clamp(0.95 e_{t-1} + 0.1 n_t, -1, 1),  e_{-1} = 0
 *
 * with valence = e_t and arousal = 2|e_t| - 1. Every informative modality m has a
 * fixed readout A_m (dim x 2, standard normal entries, shared by all movies) and
 * emits A_m [e_t, z_t] + noise per second, with z_t a standard-normal nuisance.
 * The noise modality is i.i.d. standard normal. Values are rounded to float32 so
 * the in-memory packs equal what load_pack reads back.
 */
std::vector<MoviePack> gen_synthetic(const SyntheticOptions& options);

/// Generates and writes movie_000, movie_001, ... under out_dir.
std::vector<MoviePack> gen_synthetic(const SyntheticOptions& options,
                                     const std::filesystem::path& out_dir);

}  // namespace affect::data
