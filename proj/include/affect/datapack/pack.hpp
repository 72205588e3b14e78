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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "affect/numcore/tensor.hpp"

namespace affect::data {

enum class Task { valence, arousal };

std::string to_string(Task task);
Task parse_task(const std::string& text);
/// Column of the labels matrix holding the task's annotation.
inline std::size_t label_column(Task task) { return task == Task::valence ? 0 : 1; }

struct ModalitySpec {
  std::string name;
  std::size_t dim = 0;

  friend bool operator==(const ModalitySpec&, const ModalitySpec&) = default;
};

/// One movie: a (seconds x dim) feature matrix per modality and (seconds x 2) labels.
struct MoviePack {
  std::string movie_id;
  std::size_t seconds = 0;
  std::vector<ModalitySpec> modalities;
  std::map<std::string, num::Tensor2> features;
  num::Tensor2 labels;  // columns: valence, arousal

  const num::Tensor2& feature(const std::string& modality) const;
  bool has_modality(const std::string& modality) const { return features.contains(modality); }
};

/// Throws ValidationError if shapes, modality names or label ranges are inconsistent.
void validate_pack(const MoviePack& pack);

/**
 * Reads a pack directory: manifest.json plus one raw little-endian float32 file
 * per modality (row-major, seconds x dim) and a labels file (seconds x 2).
 */
MoviePack load_pack(const std::filesystem::path& dir);

/// Writes the pack in the layout load_pack reads. Values are narrowed to float32.
void write_pack(const MoviePack& pack, const std::filesystem::path& dir);

/// Loads every pack under data_dir (one subdirectory per movie, sorted by name),
/// or data_dir itself when it holds a manifest.
std::vector<MoviePack> load_packs(const std::filesystem::path& data_dir);

}  // namespace affect::data
