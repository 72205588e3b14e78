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

#include "affect/training/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "affect/errors.hpp"
#include "affect/numcore/rng.hpp"

namespace affect::train {

const data::ModalitySpec& Dataset::spec(const std::string& modality) const {
  for (const auto& s : modalities) {
    if (s.name == modality) return s;
  }
  throw ConfigError("dataset has no modality '" + modality + "'");
}

Dataset build_dataset(const std::vector<data::MoviePack>& packs, std::size_t clip_seconds) {
  if (packs.empty()) throw DataError("no movies supplied");
  Dataset ds;
  ds.modalities = packs.front().modalities;
  ds.clip_seconds = clip_seconds;
  for (const auto& pack : packs) {
    auto sorted = [](std::vector<data::ModalitySpec> v) {
      std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
      return v;
    };
    if (sorted(pack.modalities) != sorted(ds.modalities)) {
      throw DataError("movie " + pack.movie_id + " declares different modalities than " +
                      packs.front().movie_id);
    }
    MovieClips mc;
    mc.movie_id = pack.movie_id;
    mc.clips = data::segment_clips(pack, clip_seconds).clips;
    const std::size_t covered = mc.clips.size() * clip_seconds;
    mc.second_labels = num::Tensor2(covered, 2);
    for (std::size_t t = 0; t < covered; ++t) {
      mc.second_labels(t, 0) = pack.labels(t, 0);
      mc.second_labels(t, 1) = pack.labels(t, 1);
    }
    ds.movies.push_back(std::move(mc));
  }
  return ds;
}

Split split_movies(std::size_t n_movies, double fraction, std::uint64_t seed) {
  std::size_t n_val = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n_movies)));
  if (fraction > 0.0 && n_movies >= 2) n_val = std::max<std::size_t>(n_val, 1);
  if (n_val >= n_movies) n_val = n_movies == 0 ? 0 : n_movies - 1;

  std::vector<std::size_t> order(n_movies);
  for (std::size_t i = 0; i < n_movies; ++i) order[i] = i;
  num::Rng rng = num::Rng(seed).derive("split");
  for (std::size_t i = n_movies; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  Split s;
  s.validation.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  s.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(s.validation.begin(), s.validation.end());
  std::sort(s.train.begin(), s.train.end());
  return s;
}

std::vector<const data::ClipSample*> collect_clips(const Dataset& ds,
                                                   const std::vector<std::size_t>& movies) {
  std::vector<const data::ClipSample*> out;
  for (std::size_t m : movies) {
    for (const auto& c : ds.movies.at(m).clips) out.push_back(&c);
  }
  return out;
}

std::vector<double> clip_labels(std::span<const data::ClipSample* const> clips, data::Task task) {
  std::vector<double> out;
  out.reserve(clips.size());
  for (const auto* c : clips) out.push_back(c->label(task));
  return out;
}

}  // namespace affect::train
