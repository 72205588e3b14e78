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

#include "affect/model/intra_clip.hpp"

#include <algorithm>

#include "affect/errors.hpp"
#include "affect/numcore/ops.hpp"

namespace affect::model {

using num::Tensor2;
using num::Var;

DenseHead DenseHead::create(std::size_t features, std::size_t embedding, num::Rng& rng) {
  return {layers::DenseLayer::create(features, embedding, layers::Activation::tanh, rng),
          layers::DenseLayer::create(embedding, 1, layers::Activation::tanh, rng)};
}

void DenseHead::collect(num::ParamStore& store, const std::string& prefix) {
  fc1.collect(store, prefix + ".fc1");
  fc2.collect(store, prefix + ".fc2");
}

std::size_t IntraClipModel::feature_width() const {
  return encoders.empty() ? 0 : encoders.front().output_width();
}

bool IntraClipModel::has_encoder(const std::string& modality) const {
  return std::any_of(encoders.begin(), encoders.end(),
                     [&](const ModalityEncoder& e) { return e.modality == modality; });
}

const ModalityEncoder& IntraClipModel::encoder(const std::string& modality) const {
  for (const auto& e : encoders) {
    if (e.modality == modality) return e;
  }
  throw ConfigError("model has no encoder for modality '" + modality + "'");
}

ModalityEncoder& IntraClipModel::encoder(const std::string& modality) {
  for (auto& e : encoders) {
    if (e.modality == modality) return e;
  }
  throw ConfigError("model has no encoder for modality '" + modality + "'");
}

void IntraClipModel::add_encoder(ModalityEncoder enc) {
  if (has_encoder(enc.modality)) throw ConfigError("duplicate encoder " + enc.modality);
  if (!encoders.empty() && enc.output_width() != feature_width()) {
    throw DimensionError("encoder " + enc.modality + " width " +
                         std::to_string(enc.output_width()) + " differs from " +
                         std::to_string(feature_width()));
  }
  encoders.push_back(std::move(enc));
}

void IntraClipModel::collect(num::ParamStore& store, const std::string& prefix) {
  for (auto& e : encoders) e.stack.collect(store, prefix + ".enc." + e.modality);
  if (fusion) fusion->collect(store, prefix + ".fusion");
}

ClipInputs make_clip_inputs(num::Tape& tape, std::span<const data::ClipSample* const> clips,
                            std::span<const std::string> modalities) {
  if (clips.empty()) throw InputError("empty clip batch");
  ClipInputs inputs;
  for (const auto& name : modalities) {
    auto first = clips.front()->features.find(name);
    if (first == clips.front()->features.end()) {
      throw ConfigError("clip has no modality '" + name + "'");
    }
    const std::size_t T = first->second.rows();
    const std::size_t D = first->second.cols();
    std::vector<Var> steps;
    steps.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
      Tensor2 x(clips.size(), D);
      for (std::size_t b = 0; b < clips.size(); ++b) {
        auto it = clips[b]->features.find(name);
        if (it == clips[b]->features.end()) {
          throw ConfigError("clip has no modality '" + name + "'");
        }
        if (it->second.rows() != T || it->second.cols() != D) {
          throw DimensionError("clip features for " + name + " are " + it->second.shape_str() +
                               ", batch expects " + first->second.shape_str());
        }
        auto src = it->second.row(t);
        std::copy(src.begin(), src.end(), x.row(b).begin());
      }
      steps.push_back(tape.constant(std::move(x)));
    }
    inputs.emplace(name, std::move(steps));
  }
  return inputs;
}

Var encode_clips(const num::Binding& bind, const IntraClipModel& model, const ClipInputs& inputs,
                 std::span<const std::string> subset) {
  if (subset.empty()) throw ConfigError("empty modality subset");
  // Summing in name order makes the result independent of subset order bit for bit.
  std::vector<std::string> names(subset.begin(), subset.end());
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw ConfigError("modality listed twice in subset");
  }
  std::vector<Var> parts;
  for (const auto& name : names) {
    const ModalityEncoder& enc = model.encoder(name);
    auto it = inputs.find(name);
    if (it == inputs.end()) throw ConfigError("no inputs for modality '" + name + "'");
    parts.push_back(layers::bilstm_encode(bind, enc.stack, it->second));
  }
  if (parts.size() == 1) return parts.front();
  return num::sum(parts);
}

Var head_forward(const num::Binding& bind, const DenseHead& head, Var fused) {
  return layers::dense_forward(bind, head.fc2, layers::dense_forward(bind, head.fc1, fused));
}

Var clip_embedding(const num::Binding& bind, const IntraClipModel& model, Var fused) {
  if (!model.finalized()) throw StateError("intra-clip model has no fusion layers yet");
  return layers::dense_forward(bind, model.fusion->fc1, fused);
}

Var predict_arousal_raw(const num::Binding& bind, const IntraClipModel& model, Var fused) {
  if (!model.finalized()) throw StateError("intra-clip model has no fusion layers yet");
  return head_forward(bind, *model.fusion, fused);
}

namespace {
std::vector<double> to_vector(Var v) {
  auto d = v.value().data();
  return {d.begin(), d.end()};
}
}  // namespace

std::vector<double> encode_clip(const data::ClipSample& clip, const IntraClipModel& model,
                                std::span<const std::string> subset) {
  num::Tape tape;
  const data::ClipSample* ptr = &clip;
  ClipInputs inputs = make_clip_inputs(tape, std::span(&ptr, 1), subset);
  return to_vector(encode_clips(num::Binding::inference(tape), model, inputs, subset));
}

std::vector<double> clip_embedding(std::span<const double> fused, const IntraClipModel& model) {
  num::Tape tape;
  return to_vector(clip_embedding(num::Binding::inference(tape), model,
                                  tape.constant(Tensor2::row_vector(fused))));
}

double predict_arousal_raw(std::span<const double> fused, const IntraClipModel& model) {
  num::Tape tape;
  return predict_arousal_raw(num::Binding::inference(tape), model,
                             tape.constant(Tensor2::row_vector(fused)))
      .value()(0, 0);
}

}  // namespace affect::model
