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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "affect/datapack/synthetic.hpp"
#include "affect/errors.hpp"
#include "affect/training/checkpoint.hpp"
#include "affect/training/config.hpp"
#include "affect/training/context_training.hpp"
#include "affect/training/dataset.hpp"
#include "affect/training/losses.hpp"
#include "affect/training/pipeline.hpp"
#include "affect/training/progressive.hpp"
#include "test_util.hpp"

namespace affect::train {
namespace {

using data::Task;
using num::Tensor2;

TrainConfig small_config(Task task) {
  TrainConfig c;
  c.task = task;
  c.dims = {4, 4, 4};
  c.batch_size = 8;
  c.max_epochs = 15;
  c.patience = 5;
  c.adam.lr = 5e-3;
  c.window = 3;
  c.beta = 0.5;
  c.val_fraction = 0.34;
  return c;
}

std::vector<data::MoviePack> small_movies(std::size_t movies, std::size_t seconds, std::uint64_t seed,
                                          bool noise = false) {
  data::SyntheticOptions o;
  o.movies = movies;
  o.seconds = seconds;
  o.seed = seed;
  o.modalities = {{"audio", 6}, {"scene", 5}};
  o.noise_modality = noise;
  return data::gen_synthetic(o);
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

TEST(ClipLoss, Examples) {
  const std::vector<double> y{0.3, -0.2};
  EXPECT_EQ(clip_loss(y, y), 0.0);
  EXPECT_DOUBLE_EQ(clip_loss(std::vector<double>{0.5}, std::vector<double>{0.0}), 0.25);
  EXPECT_NEAR(clip_loss(std::vector<double>{0.2, 0.4}, std::vector<double>{0.0, 0.0}), 0.1, 1e-15);
  EXPECT_THROW(clip_loss(std::vector<double>{0.2}, std::vector<double>{0.0, 0.0}), ContractError);
  EXPECT_THROW(clip_loss(std::vector<double>{}, std::vector<double>{}), ContractError);
}

TEST(WindowLoss, Examples) {
  Tensor2 p(1, 2), g(1, 2, 0.0);
  p(0, 0) = 0.1;
  p(0, 1) = 0.3;
  EXPECT_EQ(window_loss(p, p), 0.0);
  EXPECT_NEAR(window_loss(p, g), 0.05, 1e-15);
  EXPECT_THROW(window_loss(p, Tensor2(2, 1)), ContractError);
}

TEST(WindowLoss, SingleClipWindowsEqualClipLossBitForBit) {
  num::Rng rng(3);
  for (std::size_t m : {1, 2, 7, 32}) {
    const Tensor2 p = testing::random_tensor(m, 1, rng), g = testing::random_tensor(m, 1, rng);
    const std::vector<double> pv(p.data().begin(), p.data().end()), gv(g.data().begin(), g.data().end());
    EXPECT_EQ(window_loss(p, g), clip_loss(pv, gv));
  }
}

TEST(Ranking, FourModalityValenceScores) {
  const std::vector<ModalityScore> scores{{"action", 0.132, 0.057},
                                          {"expression", 0.110, 0.150},
                                          {"scene", 0.103, 0.192},
                                          {"audio", 0.098, 0.264}};
  const std::vector<std::string> want{"audio", "scene", "expression", "action"};
  EXPECT_EQ(rank_modalities(scores, RankMetric::mse), want);
  EXPECT_EQ(rank_modalities(scores, RankMetric::pcc), want);
}

TEST(Ranking, TiesGoToNameOrder) {
  const std::vector<ModalityScore> scores{{"scene", 0.1, 0.3}, {"audio", 0.1, 0.3}, {"action", 0.2, 0.1}};
  EXPECT_EQ(rank_modalities(scores, RankMetric::mse), (std::vector<std::string>{"audio", "scene", "action"}));
  EXPECT_EQ(rank_modalities(scores, RankMetric::pcc), (std::vector<std::string>{"audio", "scene", "action"}));
}

TEST(Config, DefaultsAndRoundTrip) {
  const TrainConfig d;
  EXPECT_EQ(d.window, 4u);
  EXPECT_EQ(d.beta, 0.99);
  EXPECT_EQ(d.clip_seconds, 10u);
  EXPECT_EQ(d.batch_size, 32u);
  EXPECT_EQ(d.max_epochs, 100u);
  EXPECT_EQ(d.patience, 10u);
  EXPECT_EQ(d.val_fraction, 0.2);
  EXPECT_EQ(d.rank_metric, RankMetric::mse);
  TrainConfig c = small_config(Task::arousal);
  c.modalities = {"scene", "audio"};
  c.rank_metric = RankMetric::pcc;
  c.seed = 99;
  const auto j = config_to_json(c);
  EXPECT_EQ(config_to_json(config_from_json(j)), j);
  EXPECT_EQ(config_from_json(nlohmann::json::object()).window, 4u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(config_from_json({{"windw", 4}}), ConfigError);
  EXPECT_THROW(config_from_json({{"adam", {{"momentum", 0.9}}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"task", "dominance"}}), ConfigError);
  EXPECT_THROW(config_from_json({{"beta", 1.0}}), ConfigError);
  EXPECT_THROW(config_from_json({{"window", 0}}), ConfigError);
  EXPECT_THROW(config_from_json({{"val_fraction", 1.0}}), ConfigError);
  EXPECT_THROW(config_from_json({{"modalities", {"audio", "audio"}}}), ConfigError);
}

TEST(Split, WholeMoviesSeededAndDisjoint) {
  const Split s = split_movies(10, 0.2, 7);
  EXPECT_EQ(s.validation.size(), 2u);
  EXPECT_EQ(s.train.size(), 8u);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.validation.begin(), s.validation.end());
  EXPECT_EQ(all.size(), 10u);
  EXPECT_TRUE(std::is_sorted(s.validation.begin(), s.validation.end()));
  EXPECT_EQ(split_movies(10, 0.2, 7).validation, s.validation);
  EXPECT_EQ(split_movies(2, 0.2, 1).validation.size(), 1u);
  EXPECT_EQ(split_movies(5, 0.0, 1).validation.size(), 0u);
  EXPECT_EQ(split_movies(1, 0.5, 1).validation.size(), 0u);
  EXPECT_EQ(split_movies(3, 0.9, 1).train.size(), 1u);
}

class Stage1 : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    auto packs = small_movies(6, 200, 11, true);
    ds_ = new Dataset(build_dataset(packs));
    config_ = small_config(Task::valence);
    split_ = split_movies(ds_->movies.size(), config_.val_fraction, config_.seed);
  }
  static void TearDownTestSuite() { delete ds_; }

  static Dataset* ds_;
  static TrainConfig config_;
  static Split split_;
};
Dataset* Stage1::ds_ = nullptr;
TrainConfig Stage1::config_;
Split Stage1::split_;

TEST_F(Stage1, InformativeModalityBeatsValidationVariance) {
  const auto r = train_stage1(*ds_, split_, "audio", config_);
  const auto labels = clip_labels(collect_clips(*ds_, split_.validation), Task::valence);
  const double m = mean(labels);
  double var = 0.0;
  for (double y : labels) var += (y - m) * (y - m);
  var /= labels.size();
  EXPECT_LT(r.val_mse, var);
  EXPECT_GT(r.val_pcc, 0.5);
}

TEST_F(Stage1, NoiseModalityStaysNearMeanPredictor) {
  const auto r = train_stage1(*ds_, split_, "noise", config_);
  const double train_mean = mean(clip_labels(collect_clips(*ds_, split_.train), Task::valence));
  double base = 0.0;
  const auto labels = clip_labels(collect_clips(*ds_, split_.validation), Task::valence);
  for (double y : labels) base += (y - train_mean) * (y - train_mean);
  base /= labels.size();
  EXPECT_NEAR(r.baseline_mse, base, 1e-12);
  EXPECT_LT(std::abs(r.val_mse - base) / base, 0.15);
}

TEST_F(Stage1, SameSeedSameWeights) {
  auto a = train_stage1(*ds_, split_, "scene", config_);
  auto b = train_stage1(*ds_, split_, "scene", config_);
  num::ParamStore sa, sb;
  a.encoder.stack.collect(sa, "e");
  a.head.collect(sa, "h");
  b.encoder.stack.collect(sb, "e");
  b.head.collect(sb, "h");
  EXPECT_EQ(param_bytes(sa), param_bytes(sb));
}

TEST_F(Stage1, Errors) {
  EXPECT_THROW(train_stage1(*ds_, split_, "voice", config_), Error);
  const Split empty{{}, {0}};
  EXPECT_THROW(train_stage1(*ds_, empty, "audio", config_), DataError);
  EXPECT_THROW(train_stage2_progressive(*ds_, split_, {"audio"}, {}, config_), StateError);
}

std::vector<std::uint8_t> encoder_bytes(const model::IntraClipModel& m, const std::string& name) {
  num::ParamStore store;
  auto stack = m.encoder(name).stack;
  stack.collect(store, name);
  return param_bytes(store);
}

TEST_F(Stage1, ProgressiveStepsFreezeEarlierEncoders) {
  const std::vector<std::string> ranked{"scene", "audio", "noise"};
  std::map<std::string, Stage1Result> s1;
  for (const auto& m : ranked) s1.emplace(m, train_stage1(*ds_, split_, m, config_));
  std::map<std::string, std::vector<std::uint8_t>> after_own_step;
  std::size_t frozen_checks = 0;
  auto observer = [&](std::size_t step, const model::IntraClipModel& m) {
    if (step == 0) return;
    for (std::size_t k = 0; k + 1 < step; ++k) {
      EXPECT_EQ(encoder_bytes(m, ranked[k]), after_own_step.at(ranked[k])) << "step " << step;
      ++frozen_checks;
    }
    after_own_step[ranked[step - 1]] = encoder_bytes(m, ranked[step - 1]);
    EXPECT_EQ(m.active_set, std::vector<std::string>(ranked.begin(), ranked.begin() + step));
  };
  const auto r = train_stage2_progressive(*ds_, split_, ranked, s1, config_, observer);
  EXPECT_EQ(frozen_checks, 3u);
  EXPECT_TRUE(r.model.finalized());
  ASSERT_EQ(r.steps.size(), 3u);
  // Residual steps may only help or stay near flat.
  for (std::size_t i = 1; i < r.steps.size(); ++i) {
    EXPECT_LE(r.steps[i].val_mse, r.steps[i - 1].val_mse * 1.1) << ranked[i];
  }
}

TEST_F(Stage1, SingleModalityStage2IsStage1PlusFineTune) {
  std::map<std::string, Stage1Result> s1;
  s1.emplace("audio", train_stage1(*ds_, split_, "audio", config_));
  std::size_t calls = 0;
  const auto r = train_stage2_progressive(*ds_, split_, {"audio"}, s1, config_,
                                          [&](std::size_t, const model::IntraClipModel&) { ++calls; });
  EXPECT_EQ(calls, 2u);
  EXPECT_EQ(r.model.active_set, std::vector<std::string>{"audio"});
  EXPECT_TRUE(r.model.finalized());
  EXPECT_LE(r.val_mse, s1.at("audio").val_mse * 1.1);
}

TEST_F(Stage1, ContextTrainingLeavesIntraModelUntouched) {
  TrainConfig c = config_;
  c.modalities = {"audio", "scene"};
  auto result = run_training(*ds_, c);
  num::ParamStore intra;
  result.bundle.intra.collect(intra);
  const auto before = param_bytes(intra);
  const auto ctx = train_valence_context(*ds_, result.split, result.bundle.intra, c);
  EXPECT_EQ(param_bytes(intra), before);
  EXPECT_EQ(ctx.context.stack.input(), c.dims.embedding);
}

// Mean window loss over every stride-1 training window.
double training_window_loss(const Dataset& ds, const model::IntraClipModel& intra,
                            const model::ContextModel& ctx, std::size_t L) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& movie : ds.movies) {
    for (const auto& w : data::make_windows(movie.clips.size(), L, data::WindowMode::train)) {
      const std::span<const data::ClipSample> clips(movie.clips.data() + w.first, w.length);
      const auto pred = model::predict_valence_window(clips, intra, ctx);
      for (std::size_t i = 0; i < w.length; ++i) {
        sum += (pred[i] - clips[i].valence) * (pred[i] - clips[i].valence);
        ++n;
      }
    }
  }
  return sum / n;
}

TEST(ContextTraining, OverfitsTwoMovies) {
  const auto packs = small_movies(2, 200, 5);
  const Dataset ds = build_dataset(packs);
  TrainConfig c = small_config(Task::valence);
  c.val_fraction = 0.0;
  c.window = 4;
  c.dims = {8, 8, 8};
  c.max_epochs = 200;
  c.patience = 200;
  c.adam.lr = 1e-2;
  const auto r = run_training(ds, c);
  ASSERT_TRUE(r.bundle.context.has_value());
  EXPECT_EQ(r.bundle.config.window, 4u);
  EXPECT_LT(training_window_loss(ds, r.bundle.intra, *r.bundle.context, 4), 0.01);
}

class Checkpoints : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto packs = small_movies(3, 60, 21);
    TrainConfig c = small_config(Task::valence);
    c.max_epochs = 3;
    bundle_ = new TrainedBundle(run_training(packs, c).bundle);
  }
  static void TearDownTestSuite() { delete bundle_; }
  static TrainedBundle* bundle_;
};
TrainedBundle* Checkpoints::bundle_ = nullptr;

TEST_F(Checkpoints, RoundTripIsBitExact) {
  testing::TempDir dir("ckpt");
  save_checkpoint(*bundle_, dir / "m.ckpt");
  TrainedBundle back = load_checkpoint(dir / "m.ckpt");
  EXPECT_EQ(param_bytes(back.params()), param_bytes(bundle_->params()));
  EXPECT_EQ(back.task, Task::valence);
  EXPECT_EQ(back.ranking, bundle_->ranking);
  EXPECT_EQ(back.modalities, bundle_->modalities);
  EXPECT_EQ(config_to_json(back.config), config_to_json(bundle_->config));
  EXPECT_EQ(encode_checkpoint(back), encode_checkpoint(*bundle_));
}

TEST_F(Checkpoints, TruncationIsCorruption) {
  const auto bytes = encode_checkpoint(*bundle_);
  for (std::size_t cut : {std::size_t{13}, std::size_t{40}, bytes.size() / 2, bytes.size() - 1}) {
    const std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + cut);
    EXPECT_THROW(decode_checkpoint(part), CorruptionError) << cut;
  }
  testing::TempDir dir("ckpt");
  {
    std::ofstream f(dir / "t.ckpt", std::ios::binary);
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size() - 8));
  }
  EXPECT_THROW(load_checkpoint(dir / "t.ckpt"), CorruptionError);
}

TEST_F(Checkpoints, TrailingBytesAreCorruption) {
  auto bytes = encode_checkpoint(*bundle_);
  bytes.push_back(0);
  EXPECT_THROW(decode_checkpoint(bytes), CorruptionError);
}

TEST_F(Checkpoints, MagicAndVersion) {
  auto bytes = encode_checkpoint(*bundle_);
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(decode_checkpoint(bad), FormatError);
  bad = bytes;
  bad[4] = 2;
  EXPECT_THROW(decode_checkpoint(bad), FormatError);
  EXPECT_THROW(decode_checkpoint(std::vector<std::uint8_t>{'A', 'F'}), FormatError);
}

TEST_F(Checkpoints, TaskMismatch) {
  EXPECT_NO_THROW(require_task(*bundle_, Task::valence));
  EXPECT_THROW(require_task(*bundle_, Task::arousal), TaskMismatchError);
}

TEST(Determinism, SameSeedSameCheckpointBytes) {
  const auto packs = small_movies(3, 60, 8);
  for (Task task : {Task::valence, Task::arousal}) {
    TrainConfig c = small_config(task);
    c.max_epochs = 3;
    c.seed = 17;
    auto a = run_training(packs, c).bundle;
    auto b = run_training(packs, c).bundle;
    EXPECT_EQ(encode_checkpoint(a), encode_checkpoint(b));
    c.seed = 18;
    auto other = run_training(packs, c).bundle;
    EXPECT_NE(encode_checkpoint(other), encode_checkpoint(a));
  }
}

}  // namespace
}  // namespace affect::train
