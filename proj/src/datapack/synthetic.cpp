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

#include "affect/datapack/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "affect/errors.hpp"
#include "affect/numcore/rng.hpp"

namespace affect::data {

using num::Rng;
using num::Tensor2;

std::vector<ModalitySpec> default_modalities() {
  return {{"audio", 128}, {"scene", 512}, {"expression", 3072}, {"action", 128}};
}

namespace {

double f32(double v) { return static_cast<double>(static_cast<float>(v)); }

std::string movie_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "movie_%03zu", k);
  return buf;
}

}  // namespace

std::vector<MoviePack> gen_synthetic(const SyntheticOptions& options) {
  if (options.seconds < 20) throw InputError("synthetic movies need at least 20 seconds");
  if (options.modalities.empty()) throw InputError("no modalities requested");
  for (const auto& spec : options.modalities) {
    if (spec.dim == 0) throw InputError("modality " + spec.name + " has dim 0");
    if (spec.name == "noise" && options.noise_modality) {
      throw InputError("modality name 'noise' is reserved for the noise modality");
    }
  }

  const Rng root(options.seed);
  std::vector<Tensor2> readouts;
  for (const auto& spec : options.modalities) {
    Rng rng = root.derive("readout:" + spec.name);
    Tensor2 a(spec.dim, 2);
    for (double& v : a.data()) v = rng.normal();
    readouts.push_back(std::move(a));
  }
  std::vector<ModalitySpec> specs = options.modalities;
  if (options.noise_modality) specs.push_back({"noise", options.modalities.front().dim});

  std::vector<MoviePack> packs;
  for (std::size_t k = 0; k < options.movies; ++k) {
    const Rng movie_rng = root.derive(static_cast<std::uint64_t>(k));
    MoviePack pack;
    pack.movie_id = movie_name(k);
    pack.seconds = options.seconds;
    pack.modalities = specs;

    Rng latent_rng = movie_rng.derive("latent");
    std::vector<double> e(options.seconds);
    double prev = 0.0;
    for (std::size_t t = 0; t < options.seconds; ++t) {
      prev = std::clamp(0.95 * prev + 0.1 * latent_rng.normal(), -1.0, 1.0);
      e[t] = prev;
    }
    pack.labels = Tensor2(options.seconds, 2);
    for (std::size_t t = 0; t < options.seconds; ++t) {
      pack.labels(t, 0) = f32(e[t]);
      pack.labels(t, 1) = f32(std::clamp(2.0 * std::abs(e[t]) - 1.0, -1.0, 1.0));
    }

    for (std::size_t m = 0; m < options.modalities.size(); ++m) {
      const auto& spec = options.modalities[m];
      const Tensor2& a = readouts[m];
      Rng rng = movie_rng.derive("features:" + spec.name);
      Tensor2 x(options.seconds, spec.dim);
      for (std::size_t t = 0; t < options.seconds; ++t) {
        const double z = rng.normal();
        for (std::size_t d = 0; d < spec.dim; ++d) {
          x(t, d) = f32(a(d, 0) * e[t] + a(d, 1) * z + options.feature_noise * rng.normal());
        }
      }
      pack.features.emplace(spec.name, std::move(x));
    }
    if (options.noise_modality) {
      Rng rng = movie_rng.derive("features:noise");
      Tensor2 x(options.seconds, specs.back().dim);
      for (double& v : x.data()) v = f32(rng.normal());
      pack.features.emplace("noise", std::move(x));
    }
    packs.push_back(std::move(pack));
  }
  return packs;
}

std::vector<MoviePack> gen_synthetic(const SyntheticOptions& options,
                                     const std::filesystem::path& out_dir) {
  auto packs = gen_synthetic(options);
  std::filesystem::create_directories(out_dir);
  for (const auto& pack : packs) write_pack(pack, out_dir / pack.movie_id);
  return packs;
}

}  // namespace affect::data
