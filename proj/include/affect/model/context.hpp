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
#include <span>
#include <string>
#include <vector>

#include "affect/datapack/clips.hpp"
#include "affect/layers/dense.hpp"
#include "affect/layers/lstm.hpp"
#include "affect/model/intra_clip.hpp"

namespace affect::model {

/// Inter-clip BiLSTM over clip embeddings with one shared tanh head per position.
struct ContextModel {
  layers::BiLstmStack stack;
  layers::DenseLayer head;

  static ContextModel create(std::size_t embedding, std::size_t hidden, num::Rng& rng);
  void collect(num::ParamStore& store, const std::string& prefix = "ctx");
};

/// steps: L embeddings of (batch x E). Returns L predictions of (batch x 1).
std::vector<num::Var> context_forward(const num::Binding& bind, const ContextModel& ctx,
                                      std::span<const num::Var> steps);

/// Valence for each clip of one window (clips in temporal order).
std::vector<double> predict_valence_window(std::span<const data::ClipSample> window,
                                           const IntraClipModel& intra, const ContextModel& ctx);

/// Clip embeddings for every clip, in order; shape (clips x E).
num::Tensor2 embed_clips(std::span<const data::ClipSample> clips, const IntraClipModel& intra);

/// Raw fc2 outputs for every clip, in order.
std::vector<double> raw_clip_predictions(std::span<const data::ClipSample> clips,
                                         const IntraClipModel& intra);

/// One valence value per clip using stride-L inference windows.
std::vector<double> predict_valence_clips(std::span<const data::ClipSample> clips,
                                          const IntraClipModel& intra, const ContextModel& ctx,
                                          std::size_t window);

/// Valence per clip from precomputed (clips x E) embeddings.
std::vector<double> predict_valence_from_embeddings(const num::Tensor2& embeddings,
                                                    const ContextModel& ctx, std::size_t window);

/// Raw fc2 predictions smoothed with the EMA.
std::vector<double> predict_arousal_clips(std::span<const data::ClipSample> clips,
                                          const IntraClipModel& intra, double beta);

}  // namespace affect::model
