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
#include <optional>
#include <string>
#include <vector>

#include "affect/datapack/pack.hpp"
#include "affect/model/context.hpp"
#include "affect/model/intra_clip.hpp"
#include "affect/training/config.hpp"

namespace affect::train {

/// Everything needed to predict one task.
struct TrainedBundle {
  data::Task task = data::Task::valence;
  TrainConfig config;
  std::vector<data::ModalitySpec> modalities;
  /// Training order of the modalities; equals the intra-clip model's active set.
  std::vector<std::string> ranking;
  model::IntraClipModel intra;
  /// Present for valence only.
  std::optional<model::ContextModel> context;

  /// Registry over every parameter in checkpoint order.
  num::ParamStore params();
};

inline constexpr char kCheckpointMagic[4] = {'A', 'F', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/**
 * Layout: "AFCK", u32 version, u32 header length (all little-endian), UTF-8 JSON
 * header {task, config, modalities, ranking, has_context, tensors:[{name, rows,
 * cols}]}, then every tensor as little-endian float64 in header order.
 */
std::vector<std::uint8_t> encode_checkpoint(TrainedBundle& bundle);
TrainedBundle decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(TrainedBundle& bundle, const std::filesystem::path& path);
/// Throws FormatError or CorruptionError; never returns a partially filled bundle.
TrainedBundle load_checkpoint(const std::filesystem::path& path);

/// Little-endian float64 bytes of every parameter in store order.
std::vector<std::uint8_t> param_bytes(const num::ParamStore& store);

/// Rejects bundles trained for a different task.
void require_task(const TrainedBundle& bundle, data::Task task);

}  // namespace affect::train
