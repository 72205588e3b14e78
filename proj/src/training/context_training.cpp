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

#include "affect/training/context_training.hpp"

#include <map>
#include <unordered_set>

#include "affect/errors.hpp"
#include "affect/eval/metrics.hpp"
#include "affect/numcore/ops.hpp"

namespace affect::train {

using num::Tensor2;
using num::Var;

namespace {

struct WindowItem {
  std::size_t movie;
  data::ContextWindow window;
};

}  // namespace

ContextResult train_valence_context(const Dataset& ds, const Split& split,
                                    const model::IntraClipModel& intra,
                                    const TrainConfig& config) {
  if (!intra.finalized()) throw StateError("intra-clip model must be finalized first");

  std::vector<Tensor2> embeddings;
  for (const auto& movie : ds.movies) embeddings.push_back(model::embed_clips(movie.clips, intra));

  std::vector<WindowItem> items;
  for (std::size_t m : split.train) {
    for (const auto& w : data::make_windows(ds.movies[m].clips.size(), config.window,
                                            data::WindowMode::train)) {
      items.push_back({m, w});
    }
  }
  if (items.empty()) throw DataError("no training windows");
  const std::vector<std::size_t>& monitored = split.validation.empty() ? split.train
                                                                       : split.validation;

  num::Rng rng = num::Rng(config.seed).derive("context");
  ContextResult result;
  result.context = model::ContextModel::create(intra.fusion->fc1.out(),
                                               config.dims.context_hidden, rng);
  num::ParamStore trainable;
  result.context.collect(trainable);

  auto batch_loss = [&](std::span<const std::size_t> batch) {
    // Windows of equal length share one batched pass.
    std::map<std::size_t, std::vector<const WindowItem*>> by_length;
    for (std::size_t k : batch) by_length[items[k].window.length].push_back(&items[k]);
    std::size_t positions = 0;
    for (const auto& [len, group] : by_length) positions += len * group.size();

    num::Tape tape;
    num::Binding bind(tape);
    std::vector<Var> terms;
    for (const auto& [len, group] : by_length) {
      std::vector<Var> steps;
      Tensor2 target(group.size(), len);
      for (std::size_t t = 0; t < len; ++t) {
        Tensor2 x(group.size(), intra.fusion->fc1.out());
        for (std::size_t b = 0; b < group.size(); ++b) {
          const WindowItem& it = *group[b];
          auto src = embeddings[it.movie].row(it.window.first + t);
          std::copy(src.begin(), src.end(), x.row(b).begin());
          target(b, t) = ds.movies[it.movie].clips[it.window.first + t].label(config.task);
        }
        steps.push_back(tape.constant(std::move(x)));
      }
      auto preds = model::context_forward(bind, result.context, steps);
      Var pred = num::concat_cols(preds);
      const double weight = static_cast<double>(len * group.size()) / static_cast<double>(positions);
      terms.push_back(num::scale(num::mse(pred, tape.constant(std::move(target))), weight));
    }
    Var loss = terms.size() == 1 ? terms.front() : num::sum(terms);
    tape.backward(loss);
    tape.accumulate_into(trainable);
    return loss.value()(0, 0);
  };

  auto monitor = [&] {
    std::vector<double> preds, labels;
    for (std::size_t m : monitored) {
      auto p = model::predict_valence_from_embeddings(embeddings[m], result.context, config.window);
      preds.insert(preds.end(), p.begin(), p.end());
      for (const auto& c : ds.movies[m].clips) labels.push_back(c.label(config.task));
    }
    return eval::mse(preds, labels);
  };

  const std::uint64_t seed = num::Rng(config.seed).derive("context:fit").next_u64();
  result.fit = fit(trainable, items.size(), batch_loss, monitor,
                   {config.batch_size, config.max_epochs, config.patience, config.adam, seed});
  result.val_mse = result.fit.best_metric;
  return result;
}

}  // namespace affect::train
