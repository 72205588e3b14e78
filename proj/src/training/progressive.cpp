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

#include "affect/training/progressive.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "affect/errors.hpp"
#include "affect/eval/metrics.hpp"
#include "affect/numcore/ops.hpp"

namespace affect::train {

using data::ClipSample;
using model::DenseHead;
using model::IntraClipModel;
using num::Tensor2;
using num::Var;

namespace {

constexpr std::size_t kEvalBatch = 64;

FitSettings fit_settings(const TrainConfig& c, std::uint64_t seed) {
  return {c.batch_size, c.max_epochs, c.patience, c.adam, seed};
}

std::uint64_t phase_seed(const TrainConfig& c, const std::string& tag) {
  return num::Rng(c.seed).derive(tag).next_u64();
}

// Sum of frozen encoder outputs for every clip, keyed by clip address.
class FrozenSums {
 public:
  FrozenSums() = default;

  FrozenSums(const IntraClipModel& model, std::span<const std::string> modalities,
             std::span<const ClipSample* const> clips) {
    if (modalities.empty()) return;
    width_ = model.feature_width();
    values_ = Tensor2(clips.size(), width_);
    for (std::size_t start = 0; start < clips.size(); start += kEvalBatch) {
      const auto batch = clips.subspan(start, std::min(kEvalBatch, clips.size() - start));
      num::Tape tape;
      auto inputs = model::make_clip_inputs(tape, batch, modalities);
      const Tensor2& enc =
          model::encode_clips(num::Binding::inference(tape), model, inputs, modalities).value();
      for (std::size_t b = 0; b < batch.size(); ++b) {
        std::copy(enc.row(b).begin(), enc.row(b).end(), values_.row(start + b).begin());
        rows_.emplace(batch[b], start + b);
      }
    }
  }

  bool empty() const noexcept { return width_ == 0; }

  Tensor2 gather(std::span<const ClipSample* const> batch) const {
    Tensor2 out(batch.size(), width_);
    for (std::size_t b = 0; b < batch.size(); ++b) {
      auto src = values_.row(rows_.at(batch[b]));
      std::copy(src.begin(), src.end(), out.row(b).begin());
    }
    return out;
  }

 private:
  std::size_t width_ = 0;
  Tensor2 values_;
  std::unordered_map<const ClipSample*, std::size_t> rows_;
};

// head(frozen + sum of live encoders) for a batch; (batch x 1).
Var forward(const num::Binding& bind, const IntraClipModel& model,
            std::span<const std::string> live, const DenseHead& head, const FrozenSums& frozen,
            std::span<const ClipSample* const> batch) {
  num::Tape& tape = bind.tape();
  auto inputs = model::make_clip_inputs(tape, batch, live);
  Var fused = model::encode_clips(bind, model, inputs, live);
  if (!frozen.empty()) fused = num::add(tape.constant(frozen.gather(batch)), fused);
  return model::head_forward(bind, head, fused);
}

std::vector<double> predict(const IntraClipModel& model, std::span<const std::string> live,
                            const DenseHead& head, const FrozenSums& frozen,
                            std::span<const ClipSample* const> clips) {
  std::vector<double> out;
  out.reserve(clips.size());
  for (std::size_t start = 0; start < clips.size(); start += kEvalBatch) {
    const auto batch = clips.subspan(start, std::min(kEvalBatch, clips.size() - start));
    num::Tape tape;
    Var y = forward(num::Binding::inference(tape), model, live, head, frozen, batch);
    for (double v : y.value().data()) out.push_back(v);
  }
  return out;
}

struct PhaseOutcome {
  FitResult fit;
  double val_mse = 0.0;
};

// Trains the trainable store on clip MSE of head(frozen + live encoders).
PhaseOutcome run_phase(const Dataset& ds, const Split& split, const IntraClipModel& model,
                       std::span<const std::string> live, const DenseHead& head,
                       const FrozenSums& frozen, num::ParamStore& trainable,
                       const TrainConfig& config, std::uint64_t seed) {
  const auto train_clips = collect_clips(ds, split.train);
  if (train_clips.empty()) throw DataError("empty training split");
  const auto monitor = monitor_clips(ds, split);
  const auto train_labels = clip_labels(train_clips, config.task);
  const auto monitor_labels = clip_labels(monitor, config.task);

  std::unordered_set<const num::Param*> trainable_set;
  for (const auto& e : trainable) trainable_set.insert(e.param);

  auto batch_loss = [&](std::span<const std::size_t> items) {
    std::vector<const ClipSample*> batch;
    Tensor2 target(items.size(), 1);
    for (std::size_t b = 0; b < items.size(); ++b) {
      batch.push_back(train_clips[items[b]]);
      target(b, 0) = train_labels[items[b]];
    }
    num::Tape tape;
    num::Binding bind(tape, trainable_set);
    Var loss = num::mse(forward(bind, model, live, head, frozen, batch), tape.constant(target));
    tape.backward(loss);
    tape.accumulate_into(trainable);
    return loss.value()(0, 0);
  };
  auto monitor_fn = [&] {
    return eval::mse(predict(model, live, head, frozen, monitor), monitor_labels);
  };
  PhaseOutcome out;
  out.fit = fit(trainable, train_clips.size(), batch_loss, monitor_fn, fit_settings(config, seed));
  out.val_mse = out.fit.best_metric;
  return out;
}

const std::vector<std::string>& single(const std::string& name,
                                       std::vector<std::string>& storage) {
  storage.assign(1, name);
  return storage;
}

}  // namespace

std::vector<const ClipSample*> monitor_clips(const Dataset& ds, const Split& split) {
  return collect_clips(ds, split.validation.empty() ? split.train : split.validation);
}

std::vector<double> predict_clips(const IntraClipModel& model,
                                  std::span<const ClipSample* const> clips) {
  if (!model.finalized()) throw StateError("intra-clip model has no fusion layers yet");
  return predict(model, model.active_set, *model.fusion, FrozenSums{}, clips);
}

Stage1Result train_stage1(const Dataset& ds, const Split& split, const std::string& modality,
                          const TrainConfig& config) {
  const auto& spec = ds.spec(modality);
  num::Rng rng = num::Rng(config.seed).derive("stage1:" + modality);
  IntraClipModel model;
  model.add_encoder({modality, layers::BiLstmStack::create(spec.dim, config.dims.hidden, rng)});
  model.active_set = {modality};
  DenseHead head = DenseHead::create(model.feature_width(), config.dims.embedding, rng);

  num::ParamStore trainable;
  model.collect(trainable);
  head.collect(trainable, "aux");
  std::vector<std::string> live_storage;
  const auto& live = single(modality, live_storage);
  PhaseOutcome phase = run_phase(ds, split, model, live, head, FrozenSums{}, trainable, config,
                                 phase_seed(config, "stage1:" + modality));

  const auto monitor = monitor_clips(ds, split);
  const auto labels = clip_labels(monitor, config.task);
  const auto preds = predict(model, live, head, FrozenSums{}, monitor);

  Stage1Result r;
  r.modality = modality;
  r.val_mse = eval::mse(preds, labels);
  if (labels.size() >= 2) {
    const auto p = eval::pcc(preds, labels);
    r.val_pcc = p.value;
    r.pcc_degenerate = p.degenerate;
  } else {
    r.pcc_degenerate = true;
  }
  const auto train_labels = clip_labels(collect_clips(ds, split.train), config.task);
  const double mean =
      std::accumulate(train_labels.begin(), train_labels.end(), 0.0) / train_labels.size();
  r.baseline_mse = eval::mse(std::vector<double>(labels.size(), mean), labels);
  r.fit = std::move(phase.fit);
  r.encoder = std::move(model.encoders.front());
  r.head = std::move(head);
  return r;
}

std::vector<std::string> rank_modalities(std::vector<ModalityScore> scores, RankMetric metric) {
  std::stable_sort(scores.begin(), scores.end(),
                   [metric](const ModalityScore& a, const ModalityScore& b) {
                     const double ka = metric == RankMetric::mse ? a.mse : -a.pcc;
                     const double kb = metric == RankMetric::mse ? b.mse : -b.pcc;
                     if (ka != kb) return ka < kb;
                     return a.modality < b.modality;
                   });
  std::vector<std::string> out;
  for (const auto& s : scores) out.push_back(s.modality);
  return out;
}

Stage2Result train_stage2_progressive(const Dataset& ds, const Split& split,
                                      const std::vector<std::string>& ranked,
                                      const std::map<std::string, Stage1Result>& stage1,
                                      const TrainConfig& config, const StepObserver& observer) {
  if (ranked.empty()) throw ConfigError("no modalities to train");
  const auto all_clips = [&] {
    std::vector<std::size_t> every(ds.movies.size());
    std::iota(every.begin(), every.end(), std::size_t{0});
    return collect_clips(ds, every);
  }();

  Stage2Result result;
  IntraClipModel& model = result.model;
  if (observer) observer(0, model);
  std::optional<DenseHead> prev_aux;

  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const std::string& name = ranked[i];
    auto it = stage1.find(name);
    if (it == stage1.end()) throw StateError("no stage-1 weights for modality '" + name + "'");

    const std::vector<std::string> frozen_names(model.active_set);
    FrozenSums frozen(model, frozen_names, all_clips);
    model.add_encoder(it->second.encoder);
    model.active_set.push_back(name);

    const std::string tag = "stage2:step" + std::to_string(i + 1);
    num::Rng rng = num::Rng(config.seed).derive(tag);
    // Later steps start from the previous step's head so the new encoder only
    // has to learn a residual; a fresh head would first relearn the readout.
    DenseHead aux = prev_aux ? *prev_aux
                             : DenseHead::create(model.feature_width(), config.dims.embedding, rng);

    num::ParamStore trainable;
    model.encoders.back().stack.collect(trainable, "enc." + name);
    aux.collect(trainable, "aux");
    std::vector<std::string> live_storage;
    PhaseOutcome phase = run_phase(ds, split, model, single(name, live_storage), aux, frozen,
                                   trainable, config, phase_seed(config, tag));
    result.steps.push_back({name, phase.val_mse, std::move(phase.fit)});
    if (observer) observer(i + 1, model);

    prev_aux = aux;
    if (i + 1 == ranked.size()) model.fusion = std::move(aux);
  }

  num::ParamStore trainable;
  model.collect(trainable);
  PhaseOutcome phase = run_phase(ds, split, model, model.active_set, *model.fusion, FrozenSums{},
                                 trainable, config, phase_seed(config, "finetune"));
  result.finetune = std::move(phase.fit);
  result.val_mse = phase.val_mse;
  return result;
}

}  // namespace affect::train
