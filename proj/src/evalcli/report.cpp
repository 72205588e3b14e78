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

#include "affect/evalcli/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "affect/datapack/clips.hpp"
#include "affect/errors.hpp"
#include "affect/model/context.hpp"

namespace affect::eval {

namespace {

void check_modalities(const train::TrainedBundle& bundle, const data::MoviePack& pack) {
  for (const auto& spec : bundle.modalities) {
    if (!pack.has_modality(spec.name)) {
      throw DataError("movie " + pack.movie_id + " lacks modality " + spec.name +
                      " required by the checkpoint");
    }
    const std::size_t dim = pack.feature(spec.name).cols();
    if (dim != spec.dim) {
      throw DataError("movie " + pack.movie_id + " modality " + spec.name + " has dim " +
                      std::to_string(dim) + ", checkpoint expects " + std::to_string(spec.dim));
    }
  }
}

std::string format_number(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

nlohmann::json metric_json(const MetricPair& m) {
  return {{"mse", m.mse}, {"pcc", m.pcc.value}, {"pcc_degenerate", m.pcc.degenerate}};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
}

}  // namespace

nlohmann::json EvalReport::to_json() const {
  nlohmann::json movies_json = nlohmann::json::array();
  for (const auto& m : movies) {
    movies_json.push_back({{"movie_id", m.track.movie_id},
                           {"seconds", m.track.values.size()},
                           {"mse", m.mse},
                           {"pcc", m.pcc.value},
                           {"pcc_degenerate", m.pcc.degenerate}});
  }
  return {{"task", data::to_string(task)},
          {"config", config},
          {"modalities", modalities},
          {"movies", movies_json},
          {"pooled", metric_json(pooled)},
          {"movie_mean", metric_json(movie_mean)},
          {"skipped", skipped}};
}

std::optional<PredictionTrack> predict_track(const train::TrainedBundle& bundle,
                                             const data::MoviePack& pack) {
  check_modalities(bundle, pack);
  const std::size_t clip_seconds = bundle.config.clip_seconds;
  const data::ClipSet set = data::segment_clips(pack, clip_seconds);
  if (set.too_short) return std::nullopt;

  std::vector<double> clip_preds;
  if (bundle.task == data::Task::valence) {
    if (!bundle.context) throw StateError("valence checkpoint without a context model");
    clip_preds = model::predict_valence_clips(set.clips, bundle.intra, *bundle.context,
                                              bundle.config.window);
  } else {
    clip_preds = model::predict_arousal_clips(set.clips, bundle.intra, bundle.config.beta);
  }
  return PredictionTrack{pack.movie_id, bundle.task, expand_per_second(clip_preds, clip_seconds)};
}

std::vector<double> ground_truth_seconds(const data::MoviePack& pack, data::Task task,
                                         std::size_t n) {
  if (n > pack.labels.rows()) {
    throw ContractError("movie " + pack.movie_id + " has " + std::to_string(pack.labels.rows()) +
                        " labelled seconds, " + std::to_string(n) + " requested");
  }
  const std::size_t col = data::label_column(task);
  std::vector<double> gt(n);
  for (std::size_t s = 0; s < n; ++s) gt[s] = pack.labels(s, col);
  return gt;
}

MovieEval score_track(PredictionTrack track, std::vector<double> ground_truth) {
  MovieEval m;
  m.mse = mse(track.values, ground_truth);
  m.pcc = pcc(track.values, ground_truth);
  m.track = std::move(track);
  m.ground_truth = std::move(ground_truth);
  return m;
}

void aggregate(EvalReport& report) {
  if (report.movies.empty()) throw DataError("no movie long enough to evaluate");
  std::vector<double> all_pred, all_gt;
  double mse_sum = 0.0, pcc_sum = 0.0;
  std::size_t pcc_count = 0;
  for (const auto& m : report.movies) {
    all_pred.insert(all_pred.end(), m.track.values.begin(), m.track.values.end());
    all_gt.insert(all_gt.end(), m.ground_truth.begin(), m.ground_truth.end());
    mse_sum += m.mse;
    if (!m.pcc.degenerate) {
      pcc_sum += m.pcc.value;
      ++pcc_count;
    }
  }
  report.pooled.mse = mse(all_pred, all_gt);
  report.pooled.pcc = pcc(all_pred, all_gt);
  report.movie_mean.mse = mse_sum / static_cast<double>(report.movies.size());
  report.movie_mean.pcc =
      pcc_count == 0 ? PccResult{0.0, true}
                     : PccResult{pcc_sum / static_cast<double>(pcc_count), false};
}

EvalReport evaluate(const train::TrainedBundle& bundle,
                    const std::vector<data::MoviePack>& packs) {
  EvalReport report;
  report.task = bundle.task;
  report.config = train::config_to_json(bundle.config);
  report.modalities = bundle.ranking;
  for (const auto& pack : packs) {
    auto track = predict_track(bundle, pack);
    if (!track) {
      report.skipped.push_back(pack.movie_id);
      continue;
    }
    auto gt = ground_truth_seconds(pack, bundle.task, track->values.size());
    report.movies.push_back(score_track(std::move(*track), std::move(gt)));
  }
  aggregate(report);
  return report;
}

void write_predictions_csv(const std::vector<MovieEval>& movies,
                           const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path.string());
  f << "movie_id,task,second,pred,gt\n";
  for (const auto& m : movies) {
    if (m.track.movie_id.find(',') != std::string::npos) {
      throw InputError("movie id contains a comma: " + m.track.movie_id);
    }
    const std::string task = data::to_string(m.track.task);
    for (std::size_t s = 0; s < m.track.values.size(); ++s) {
      f << m.track.movie_id << ',' << task << ',' << s << ','
        << format_number(m.track.values[s], 17) << ',' << format_number(m.ground_truth[s], 17)
        << '\n';
    }
  }
  if (!f) throw InputError("write failed: " + path.string());
}

std::vector<MovieEval> read_predictions_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != "movie_id,task,second,pred,gt") {
    throw FormatError(path.string() + ": missing header movie_id,task,second,pred,gt");
  }
  std::vector<PredictionTrack> tracks;
  std::vector<std::vector<double>> gts;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 5 columns");
    }
    const data::Task task = data::parse_task(cells[1]);
    if (tracks.empty() || tracks.back().movie_id != cells[0]) {
      for (const auto& t : tracks) {
        if (t.movie_id == cells[0]) {
          throw FormatError("line " + std::to_string(line_no) + ": rows of movie " + cells[0] +
                            " are not contiguous");
        }
      }
      tracks.push_back({cells[0], task, {}});
      gts.emplace_back();
    }
    PredictionTrack& t = tracks.back();
    if (t.task != task) {
      throw FormatError("line " + std::to_string(line_no) + ": task changes within movie");
    }
    if (parse_double(cells[2], line_no) != static_cast<double>(t.values.size())) {
      throw FormatError("line " + std::to_string(line_no) + ": seconds out of order");
    }
    t.values.push_back(parse_double(cells[3], line_no));
    gts.back().push_back(parse_double(cells[4], line_no));
  }
  std::vector<MovieEval> out;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (tracks[i].values.size() < 2) {
      throw FormatError("movie " + tracks[i].movie_id + " has fewer than two seconds");
    }
    out.push_back(score_track(std::move(tracks[i]), std::move(gts[i])));
  }
  return out;
}

void emit_plot_data(const PredictionTrack& track, const std::vector<double>& ground_truth,
                    const std::filesystem::path& path) {
  if (track.values.size() != ground_truth.size()) {
    throw ContractError("plot data length mismatch: " + std::to_string(track.values.size()) +
                        " vs " + std::to_string(ground_truth.size()));
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path.string());
  f << "second,pred,gt\n";
  for (std::size_t s = 0; s < track.values.size(); ++s) {
    f << s << ',' << format_number(track.values[s], 9) << ','
      << format_number(ground_truth[s], 9) << '\n';
  }
  if (!f) throw InputError("write failed: " + path.string());
}

}  // namespace affect::eval
