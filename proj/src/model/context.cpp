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

#include "affect/model/context.hpp"

#include "affect/errors.hpp"
#include "affect/model/ema.hpp"
#include "affect/numcore/ops.hpp"

namespace affect::model {

using num::Tensor2;
using num::Var;

ContextModel ContextModel::create(std::size_t embedding, std::size_t hidden, num::Rng& rng) {
  ContextModel ctx;
  ctx.stack = layers::BiLstmStack::create(embedding, hidden, rng);
  ctx.head = layers::DenseLayer::create(2 * hidden, 1, layers::Activation::tanh, rng);
  return ctx;
}

void ContextModel::collect(num::ParamStore& store, const std::string& prefix) {
  stack.collect(store, prefix);
  head.collect(store, prefix + ".head");
}

std::vector<Var> context_forward(const num::Binding& bind, const ContextModel& ctx,
                                 std::span<const Var> steps) {
  layers::BiLstmOutput out = layers::bilstm_run(bind, ctx.stack, steps);
  std::vector<Var> preds;
  preds.reserve(out.steps.size());
  for (Var h : out.steps) preds.push_back(layers::dense_forward(bind, ctx.head, h));
  return preds;
}

namespace {

std::vector<const data::ClipSample*> pointers(std::span<const data::ClipSample> clips) {
  std::vector<const data::ClipSample*> out;
  out.reserve(clips.size());
  for (const auto& c : clips) out.push_back(&c);
  return out;
}

Var fused_features(const num::Binding& bind, num::Tape& tape,
                   std::span<const data::ClipSample> clips, const IntraClipModel& intra) {
  auto ptrs = pointers(clips);
  ClipInputs inputs = make_clip_inputs(tape, ptrs, intra.active_set);
  return encode_clips(bind, intra, inputs, intra.active_set);
}

}  // namespace

Tensor2 embed_clips(std::span<const data::ClipSample> clips, const IntraClipModel& intra) {
  if (clips.empty()) return Tensor2(0, intra.finalized() ? intra.fusion->fc1.out() : 0);
  num::Tape tape;
  auto bind = num::Binding::inference(tape);
  return clip_embedding(bind, intra, fused_features(bind, tape, clips, intra)).value();
}

std::vector<double> raw_clip_predictions(std::span<const data::ClipSample> clips,
                                         const IntraClipModel& intra) {
  if (clips.empty()) return {};
  num::Tape tape;
  auto bind = num::Binding::inference(tape);
  auto v = predict_arousal_raw(bind, intra, fused_features(bind, tape, clips, intra)).value().data();
  return {v.begin(), v.end()};
}

std::vector<double> predict_valence_from_embeddings(const Tensor2& embeddings,
                                                    const ContextModel& ctx, std::size_t window) {
  const std::size_t n = embeddings.rows();
  if (n > 0 && embeddings.cols() != ctx.stack.input()) {
    throw DimensionError("embedding width " + std::to_string(embeddings.cols()) +
                         " does not match context input " + std::to_string(ctx.stack.input()));
  }
  std::vector<double> out(n, 0.0);
  for (const auto& w : data::make_windows(n, window, data::WindowMode::infer)) {
    num::Tape tape;
    std::vector<Var> steps;
    for (std::size_t k = 0; k < w.length; ++k) {
      steps.push_back(tape.constant(Tensor2::row_vector(embeddings.row(w.first + k))));
    }
    auto preds = context_forward(num::Binding::inference(tape), ctx, steps);
    for (std::size_t k = w.consume_from; k < w.length; ++k) out[w.first + k] = preds[k].value()(0, 0);
  }
  return out;
}

std::vector<double> predict_valence_window(std::span<const data::ClipSample> window,
                                           const IntraClipModel& intra, const ContextModel& ctx) {
  if (window.empty()) throw InputError("empty context window");
  Tensor2 emb = embed_clips(window, intra);
  if (emb.cols() != ctx.stack.input()) {
    throw DimensionError("embedding width " + std::to_string(emb.cols()) +
                         " does not match context input " + std::to_string(ctx.stack.input()));
  }
  num::Tape tape;
  std::vector<Var> steps;
  for (std::size_t k = 0; k < emb.rows(); ++k) {
    steps.push_back(tape.constant(Tensor2::row_vector(emb.row(k))));
  }
  auto preds = context_forward(num::Binding::inference(tape), ctx, steps);
  std::vector<double> out;
  for (Var p : preds) out.push_back(p.value()(0, 0));
  return out;
}

std::vector<double> predict_valence_clips(std::span<const data::ClipSample> clips,
                                          const IntraClipModel& intra, const ContextModel& ctx,
                                          std::size_t window) {
  return predict_valence_from_embeddings(embed_clips(clips, intra), ctx, window);
}

std::vector<double> predict_arousal_clips(std::span<const data::ClipSample> clips,
                                          const IntraClipModel& intra, double beta) {
  return ema_smooth(raw_clip_predictions(clips, intra), beta);
}

}  // namespace affect::model
