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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "affect/datapack/pack.hpp"
#include "affect/eval/metrics.hpp"
#include "affect/training/checkpoint.hpp"

namespace affect::eval {

/// Per-second predictions for one movie; length is clip_seconds times the number of clips.
struct PredictionTrack {
  std::string movie_id;
  data::Task task = data::Task::valence;
  std::vector<double> values;
};

struct MovieEval {
  PredictionTrack track;
  /// Annotations for the seconds covered by the track.
  std::vector<double> ground_truth;
  double mse = 0.0;
  PccResult pcc;
};

struct MetricPair {
  double mse = 0.0;
  PccResult pcc;
};

struct EvalReport {
  data::Task task = data::Task::valence;
  nlohmann::json config;
  std::vector<std::string> modalities;
  std::vector<MovieEval> movies;
  /// Metrics over the concatenation of every movie's track.
  MetricPair pooled;
  /// Unweighted mean of the per-movie metrics; PCC averages non-degenerate movies only.
  MetricPair movie_mean;
  /// Movies shorter than one clip.
  std::vector<std::string> skipped;

  nlohmann::json to_json() const;
};

/**
 * Clip predictions for one movie expanded to seconds. Valence goes through the
 * context model with stride-L windows; arousal takes the raw fused prediction
 * through the EMA. Returns nullopt for movies shorter than one clip.
 */
std::optional<PredictionTrack> predict_track(const train::TrainedBundle& bundle,
                                             const data::MoviePack& pack);

/// Annotations of the bundle's task for the first n seconds of the pack.
std::vector<double> ground_truth_seconds(const data::MoviePack& pack, data::Task task,
                                         std::size_t n);

/// Scores a track against its annotations.
MovieEval score_track(PredictionTrack track, std::vector<double> ground_truth);

/// Pooled and per-movie means from scored movies.
void aggregate(EvalReport& report);

EvalReport evaluate(const train::TrainedBundle& bundle, const std::vector<data::MoviePack>& packs);

/// CSV with header movie_id,task,second,pred,gt; one row per predicted second, full precision.
void write_predictions_csv(const std::vector<MovieEval>& movies,
                           const std::filesystem::path& path);

/**
 * Reads write_predictions_csv output and rescores each movie. Rows of a movie
 * must be contiguous and numbered 0, 1, 2, ...
 */
std::vector<MovieEval> read_predictions_csv(const std::filesystem::path& path);

/// Text table "second,pred,gt", one row per second, values at 9 significant digits.
void emit_plot_data(const PredictionTrack& track, const std::vector<double>& ground_truth,
                    const std::filesystem::path& path);

}  // namespace affect::eval
