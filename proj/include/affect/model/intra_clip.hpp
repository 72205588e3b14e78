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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "affect/datapack/clips.hpp"
#include "affect/layers/dense.hpp"
#include "affect/layers/lstm.hpp"
#include "affect/numcore/param.hpp"
#include "affect/numcore/rng.hpp"
#include "affect/numcore/tape.hpp"

namespace affect::model {

struct ModelDims {
  std::size_t hidden = 64;          // per-direction LSTM width in each modality encoder
  std::size_t embedding = 128;      // clip embedding width E
  std::size_t context_hidden = 64;  // per-direction width of the context BiLSTM
};

struct ModalityEncoder {
  std::string modality;
  layers::BiLstmStack stack;

  std::size_t output_width() const noexcept { return stack.output_width(); }
};

/// Two tanh dense layers F -> E -> 1 on top of summed encoder features.
struct DenseHead {
  layers::DenseLayer fc1;
  layers::DenseLayer fc2;

  static DenseHead create(std::size_t features, std::size_t embedding, num::Rng& rng);
  void collect(num::ParamStore& store, const std::string& prefix);
};

/// Auxiliary heads share the shape of the fusion readout; they only live during training.
using AuxHead = DenseHead;

/**
 * Per-modality BiLSTM encoders whose clip encodings are summed, followed (once
 * finalized) by the fusion readout fc1 (clip embedding) and fc2 (scalar).
 */
struct IntraClipModel {
  std::vector<ModalityEncoder> encoders;
  /// Modalities summed by the fused forward pass, in training order.
  std::vector<std::string> active_set;
  std::optional<DenseHead> fusion;

  bool finalized() const noexcept { return fusion.has_value(); }
  /// Shared encoder output width F; 0 without encoders.
  std::size_t feature_width() const;

  bool has_encoder(const std::string& modality) const;
  const ModalityEncoder& encoder(const std::string& modality) const;
  ModalityEncoder& encoder(const std::string& modality);

  /// Adds an encoder; every encoder must produce the same width.
  void add_encoder(ModalityEncoder encoder);

  void collect(num::ParamStore& store, const std::string& prefix = "intra");
};

/// Per-modality step inputs for a batch of clips: modality -> T steps of (batch x dim).
using ClipInputs = std::map<std::string, std::vector<num::Var>>;

/// Builds constant step inputs on the tape for the given clips and modalities.
ClipInputs make_clip_inputs(num::Tape& tape, std::span<const data::ClipSample* const> clips,
                            std::span<const std::string> modalities);

/// Sum over subset of each modality's BiLSTM encoding; (batch x F).
num::Var encode_clips(const num::Binding& bind, const IntraClipModel& model,
                      const ClipInputs& inputs, std::span<const std::string> subset);

/// fusion fc1 applied to fused features; (batch x E).
num::Var clip_embedding(const num::Binding& bind, const IntraClipModel& model, num::Var fused);
/// fusion fc2(fc1(fused)); (batch x 1).
num::Var predict_arousal_raw(const num::Binding& bind, const IntraClipModel& model,
                             num::Var fused);
num::Var head_forward(const num::Binding& bind, const DenseHead& head, num::Var fused);

// Single-clip forms without gradient recording.
std::vector<double> encode_clip(const data::ClipSample& clip, const IntraClipModel& model,
                                std::span<const std::string> subset);
std::vector<double> clip_embedding(std::span<const double> fused, const IntraClipModel& model);
double predict_arousal_raw(std::span<const double> fused, const IntraClipModel& model);

}  // namespace affect::model
