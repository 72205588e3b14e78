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

#include "affect/evalcli/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "affect/datapack/synthetic.hpp"
#include "affect/errors.hpp"
#include "affect/evalcli/gradcheck_suite.hpp"
#include "affect/evalcli/report.hpp"
#include "affect/training/pipeline.hpp"

namespace affect::cli {

namespace {

struct GenArgs {
  std::string out;
  std::size_t movies = 0;
  std::size_t seconds = 0;
  std::uint64_t seed = 0;
  bool noise = false;
};

struct TrainArgs {
  std::string task, data, config, out;
  std::optional<std::uint64_t> seed;
};

struct PredictArgs {
  std::string ckpt, data, out;
  std::optional<std::string> task;
};

struct EvalArgs {
  std::string ckpt, data, report;
  std::optional<std::string> task;
};

struct PlotArgs {
  std::string pred, out;
  std::optional<std::string> movie;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int gen_synthetic(const GenArgs& a, std::ostream& out, std::ostream& err) {
  data::SyntheticOptions opts;
  opts.movies = a.movies;
  opts.seconds = a.seconds;
  opts.seed = a.seed;
  opts.noise_modality = a.noise;
  nlohmann::ordered_json echo{{"movies", a.movies},
                              {"seconds", a.seconds},
                              {"seed", a.seed},
                              {"noise_modality", a.noise},
                              {"feature_noise", opts.feature_noise}};
  err << "gen-synthetic config: " << echo.dump() << "\n";
  const auto packs = data::gen_synthetic(opts, a.out);
  out << "wrote " << packs.size() << " movies to " << a.out << "\n";
  return 0;
}

int train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  train::TrainConfig config = train::load_config(a.config);
  config.task = data::parse_task(a.task);
  if (a.seed) config.seed = *a.seed;
  config.validate();
  err << "train config: " << train::config_to_json(config).dump() << "\n";
  err << "seed: " << config.seed << "\n";
  const auto packs = data::load_packs(a.data);
  auto result = train::run_training(packs, config, [&](std::string_view line) {
    err << line << "\n";
  });
  train::save_checkpoint(result.bundle, a.out);
  out << "saved " << data::to_string(config.task) << " checkpoint to " << a.out
      << " (validation clip mse " << fmt(result.context_val_mse.value_or(result.intra_val_mse))
      << ")\n";
  return 0;
}

train::TrainedBundle open_checkpoint(const std::string& path, const std::optional<std::string>& task,
                                     std::ostream& err) {
  train::TrainedBundle bundle = train::load_checkpoint(path);
  if (task) train::require_task(bundle, data::parse_task(*task));
  err << "checkpoint config: " << train::config_to_json(bundle.config).dump() << "\n";
  err << "seed: " << bundle.config.seed << "\n";
  return bundle;
}

int predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  const auto bundle = open_checkpoint(a.ckpt, a.task, err);
  const auto report = eval::evaluate(bundle, data::load_packs(a.data));
  for (const auto& id : report.skipped) err << "skipped " << id << ": shorter than one clip\n";
  eval::write_predictions_csv(report.movies, a.out);
  out << "wrote predictions for " << report.movies.size() << " movies to " << a.out << "\n";
  return 0;
}

int evaluate(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto bundle = open_checkpoint(a.ckpt, a.task, err);
  const auto report = eval::evaluate(bundle, data::load_packs(a.data));
  for (const auto& id : report.skipped) err << "skipped " << id << ": shorter than one clip\n";
  std::ofstream f(a.report);
  if (!f) throw InputError("cannot write " + a.report);
  f << report.to_json().dump(2) << "\n";
  if (!f) throw InputError("write failed: " + a.report);
  out << data::to_string(report.task) << " pooled mse=" << fmt(report.pooled.mse)
      << " pcc=" << fmt(report.pooled.pcc.value) << "; movie mean mse="
      << fmt(report.movie_mean.mse) << " pcc=" << fmt(report.movie_mean.pcc.value) << "\n";
  return 0;
}

int gradcheck(std::uint64_t seed, std::ostream& out, std::ostream& err) {
  err << "gradcheck seed: " << seed << " eps: " << eval::kGradCheckEps << "\n";
  bool ok = true;
  for (const auto& c : eval::run_gradcheck_suite(seed)) {
    out << (c.passed() ? "PASS " : "FAIL ") << c.name << " max_rel_error=" << fmt(c.max_rel_error)
        << " (" << c.worst_param << ")\n";
    ok = ok && c.passed();
  }
  return ok ? 0 : 1;
}

int plot_data(const PlotArgs& a, std::ostream& out, std::ostream& err) {
  const auto movies = eval::read_predictions_csv(a.pred);
  if (movies.empty()) throw DataError(a.pred + " holds no predictions");
  const eval::MovieEval* chosen = nullptr;
  if (a.movie) {
    for (const auto& m : movies) {
      if (m.track.movie_id == *a.movie) chosen = &m;
    }
    if (!chosen) throw DataError("movie " + *a.movie + " not found in " + a.pred);
  } else if (movies.size() == 1) {
    chosen = &movies.front();
  } else {
    throw InputError(a.pred + " holds " + std::to_string(movies.size()) +
                     " movies; pick one with --movie");
  }
  err << "plot-data movie: " << chosen->track.movie_id << "\n";
  eval::emit_plot_data(chosen->track, chosen->ground_truth, a.out);
  out << "wrote " << chosen->track.values.size() << " seconds to " << a.out << "\n";
  return 0;
}

}  // namespace

int run_pipeline(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Movie affect prediction: synthetic data, training, prediction and evaluation",
               "affect"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-synthetic", "Write synthetic feature packs");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--movies", gen.movies, "Number of movies")->required();
  gen_cmd->add_option("--seconds", gen.seconds, "Seconds per movie")->required();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->required();
  gen_cmd->add_flag("--noise-modality", gen.noise, "Append a label-independent modality");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a valence or arousal model");
  train_cmd->add_option("--task", tr.task, "valence or arousal")
      ->required()
      ->check(CLI::IsMember({"valence", "arousal"}));
  train_cmd->add_option("--data", tr.data, "Feature pack directory")->required();
  train_cmd->add_option("--config", tr.config, "Training config JSON")->required();
  train_cmd->add_option("--out", tr.out, "Checkpoint path")->required();
  train_cmd->add_option("--seed", tr.seed, "Overrides the config seed");

  PredictArgs pr;
  auto* predict_cmd = app.add_subcommand("predict", "Write per-second predictions as CSV");
  predict_cmd->add_option("--ckpt", pr.ckpt, "Checkpoint path")->required();
  predict_cmd->add_option("--data", pr.data, "Feature pack directory")->required();
  predict_cmd->add_option("--out", pr.out, "Prediction CSV")->required();
  predict_cmd->add_option("--task", pr.task, "Expected checkpoint task")
      ->check(CLI::IsMember({"valence", "arousal"}));

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score a checkpoint and write a JSON report");
  eval_cmd->add_option("--ckpt", ev.ckpt, "Checkpoint path")->required();
  eval_cmd->add_option("--data", ev.data, "Feature pack directory")->required();
  eval_cmd->add_option("--report", ev.report, "Report JSON path")->required();
  eval_cmd->add_option("--task", ev.task, "Expected checkpoint task")
      ->check(CLI::IsMember({"valence", "arousal"}));

  std::uint64_t gc_seed = 0;
  auto* gc_cmd = app.add_subcommand("gradcheck", "Run the finite-difference gradient suite");
  gc_cmd->add_option("--seed", gc_seed, "Seed for the random test problems");

  PlotArgs pl;
  auto* plot_cmd = app.add_subcommand("plot-data", "Export one movie's track for plotting");
  plot_cmd->add_option("--pred", pl.pred, "Prediction CSV from predict")->required();
  plot_cmd->add_option("--out", pl.out, "Output CSV")->required();
  plot_cmd->add_option("--movie", pl.movie, "Movie id; required when the CSV holds several");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*gen_cmd) return gen_synthetic(gen, out, err);
    if (*train_cmd) return train(tr, out, err);
    if (*predict_cmd) return predict(pr, out, err);
    if (*eval_cmd) return evaluate(ev, out, err);
    if (*gc_cmd) return gradcheck(gc_seed, out, err);
    if (*plot_cmd) return plot_data(pl, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run_pipeline(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_pipeline(args, std::cout, std::cerr);
}

}  // namespace affect::cli
