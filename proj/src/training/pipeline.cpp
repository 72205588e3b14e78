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

#include "affect/training/pipeline.hpp"

#include <sstream>

#include "affect/errors.hpp"

namespace affect::train {

PipelineResult run_training(const std::vector<data::MoviePack>& packs, const TrainConfig& config,
                            const Logger& log) {
  config.validate();
  return run_training(build_dataset(packs, config.clip_seconds), config, log);
}

PipelineResult run_training(const Dataset& ds, const TrainConfig& config, const Logger& log) {
  config.validate();
  auto say = [&](const std::string& s) {
    if (log) log(s);
  };

  std::vector<std::string> modalities = config.modalities;
  if (modalities.empty()) {
    for (const auto& s : ds.modalities) modalities.push_back(s.name);
  }
  for (const auto& m : modalities) ds.spec(m);

  PipelineResult r;
  r.split = split_movies(ds.movies.size(), config.val_fraction, config.seed);
  if (r.split.train.empty()) throw DataError("empty training split");
  say("split: " + std::to_string(r.split.train.size()) + " training / " +
      std::to_string(r.split.validation.size()) + " validation movies");

  std::vector<ModalityScore> scores;
  for (const auto& m : modalities) {
    Stage1Result s1 = train_stage1(ds, r.split, m, config);
    std::ostringstream msg;
    msg << "stage1 " << m << ": mse=" << s1.val_mse << " pcc=" << s1.val_pcc
        << " epochs=" << s1.fit.epochs_run << " best=" << s1.fit.best_epoch;
    say(msg.str());
    scores.push_back(s1.score());
    r.stage1.emplace(m, std::move(s1));
  }
  r.ranking = rank_modalities(scores, config.rank_metric);
  {
    std::string order;
    for (const auto& m : r.ranking) order += (order.empty() ? "" : " > ") + m;
    say("ranking: " + order);
  }

  Stage2Result s2 = train_stage2_progressive(ds, r.split, r.ranking, r.stage1, config);
  for (const auto& step : s2.steps) {
    std::ostringstream msg;
    msg << "stage2 +" << step.modality << ": mse=" << step.val_mse;
    say(msg.str());
  }
  {
    std::ostringstream msg;
    msg << "fine-tune: mse=" << s2.val_mse << " epochs=" << s2.finetune.epochs_run;
    say(msg.str());
  }
  r.steps = s2.steps;
  r.intra_val_mse = s2.val_mse;

  r.bundle.task = config.task;
  r.bundle.config = config;
  for (const auto& m : r.ranking) r.bundle.modalities.push_back(ds.spec(m));
  r.bundle.ranking = r.ranking;
  r.bundle.intra = std::move(s2.model);

  if (config.task == data::Task::valence) {
    ContextResult ctx = train_valence_context(ds, r.split, r.bundle.intra, config);
    std::ostringstream msg;
    msg << "context (L=" << config.window << "): mse=" << ctx.val_mse
        << " epochs=" << ctx.fit.epochs_run;
    say(msg.str());
    r.context_val_mse = ctx.val_mse;
    r.bundle.context = std::move(ctx.context);
  }
  return r;
}

}  // namespace affect::train
