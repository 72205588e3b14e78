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
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include <json.hpp>

#include "affect/datapack/clips.hpp"
#include "affect/datapack/pack.hpp"
#include "affect/datapack/synthetic.hpp"
#include "affect/errors.hpp"
#include "test_util.hpp"

namespace affect::data {
namespace {

namespace fs = std::filesystem;
using num::Rng;
using num::Tensor2;
using testing::TempDir;

double f32(double v) { return static_cast<double>(static_cast<float>(v)); }

MoviePack make_pack(std::size_t seconds, std::uint64_t seed = 1) {
  Rng rng(seed);
  MoviePack p;
  p.movie_id = "m" + std::to_string(seed);
  p.seconds = seconds;
  p.modalities = {{"audio", 3}, {"scene", 2}};
  for (const auto& spec : p.modalities) {
    Tensor2 x(seconds, spec.dim);
    for (double& v : x.data()) v = f32(rng.normal());
    p.features.emplace(spec.name, std::move(x));
  }
  p.labels = Tensor2(seconds, 2);
  for (double& v : p.labels.data()) v = f32(rng.uniform(-1.0, 1.0));
  return p;
}

std::vector<char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& p, const std::vector<char>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ValidationError::Kind load_error_kind(const fs::path& dir) {
  try {
    load_pack(dir);
  } catch (const ValidationError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "load_pack accepted a bad pack";
  return ValidationError::Kind::manifest;
}

TEST(Pack, RoundTripIsBitExact) {
  TempDir dir("pack");
  const MoviePack p = make_pack(30);
  write_pack(p, dir.path());
  const MoviePack q = load_pack(dir.path());
  EXPECT_EQ(q.movie_id, p.movie_id);
  EXPECT_EQ(q.seconds, 30u);
  EXPECT_EQ(q.modalities, p.modalities);
  ASSERT_EQ(q.features.size(), 2u);
  EXPECT_EQ(q.feature("audio"), p.feature("audio"));
  EXPECT_EQ(q.feature("scene").rows(), 30u);
  EXPECT_EQ(q.labels, p.labels);
}

TEST(Pack, DoubleValuesRoundToNearestFloat) {
  TempDir dir("pack");
  MoviePack p = make_pack(12);
  Rng rng(3);
  for (double& v : p.features.at("audio").data()) v = rng.normal();
  write_pack(p, dir.path());
  const MoviePack q = load_pack(dir.path());
  const auto a = p.feature("audio").data();
  const auto b = q.feature("audio").data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const float want = static_cast<float>(a[i]);
    EXPECT_EQ(b[i], static_cast<double>(want));
    EXPECT_LE(std::abs(b[i] - a[i]), std::abs(std::nextafter(want, 2 * want) - want));
  }
}

TEST(Pack, OnDiskLayout) {
  TempDir dir("pack");
  MoviePack p = make_pack(10);
  p.labels(0, 0) = 1.0;
  write_pack(p, dir.path());
  const auto labels = read_bytes(dir / "labels.f32");
  ASSERT_EQ(labels.size(), 10u * 2 * 4);
  // 1.0f little-endian.
  const unsigned char one[4] = {0x00, 0x00, 0x80, 0x3f};
  EXPECT_EQ(std::memcmp(labels.data(), one, 4), 0);
  EXPECT_EQ(read_bytes(dir / "audio.f32").size(), 10u * 3 * 4);

  std::ifstream in(dir / "manifest.json");
  const auto m = nlohmann::json::parse(in);
  EXPECT_EQ(m.at("movie_id"), p.movie_id);
  EXPECT_EQ(m.at("seconds"), 10);
  EXPECT_EQ(m.at("labels_file"), "labels.f32");
  ASSERT_EQ(m.at("modalities").size(), 2u);
  EXPECT_EQ(m.at("modalities")[0].at("name"), "audio");
  EXPECT_EQ(m.at("modalities")[0].at("dim"), 3);
  EXPECT_EQ(m.at("modalities")[0].at("file"), "audio.f32");
}

TEST(Pack, RowCountMismatch) {
  TempDir dir("pack");
  write_pack(make_pack(30), dir.path());
  auto bytes = read_bytes(dir / "audio.f32");
  bytes.resize(29 * 3 * 4);
  write_bytes(dir / "audio.f32", bytes);
  EXPECT_EQ(load_error_kind(dir.path()), ValidationError::Kind::row_count);
}

TEST(Pack, DimMismatch) {
  TempDir dir("pack");
  write_pack(make_pack(30), dir.path());
  auto bytes = read_bytes(dir / "audio.f32");
  bytes.resize(30 * 4 * 4, 0);
  write_bytes(dir / "audio.f32", bytes);
  EXPECT_EQ(load_error_kind(dir.path()), ValidationError::Kind::dim_mismatch);
}

TEST(Pack, LabelOutOfRangeNamesRow) {
  TempDir dir("pack");
  write_pack(make_pack(30), dir.path());
  auto bytes = read_bytes(dir / "labels.f32");
  const float bad = 1.5f;
  std::memcpy(bytes.data() + (7 * 2 + 1) * 4, &bad, 4);
  write_bytes(dir / "labels.f32", bytes);
  try {
    load_pack(dir.path());
    FAIL() << "expected a label range error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), ValidationError::Kind::label_range);
    EXPECT_NE(std::string(e.what()).find("row 7"), std::string::npos) << e.what();
  }
}

TEST(Pack, MissingFileAndBrokenManifest) {
  TempDir dir("pack");
  write_pack(make_pack(30), dir.path());
  fs::remove(dir / "scene.f32");
  EXPECT_EQ(load_error_kind(dir.path()), ValidationError::Kind::missing_file);

  TempDir dir2("pack");
  write_pack(make_pack(30), dir2.path());
  write_bytes(dir2 / "manifest.json", {'{', '"', 'x'});
  EXPECT_EQ(load_error_kind(dir2.path()), ValidationError::Kind::manifest);

  TempDir empty("pack");
  EXPECT_EQ(load_error_kind(empty.path()), ValidationError::Kind::missing_file);
}

TEST(Pack, ValidateRejectsInconsistentMemoryPack) {
  MoviePack p = make_pack(20);
  p.labels(3, 1) = -1.25;
  EXPECT_THROW(validate_pack(p), ValidationError);
  MoviePack q = make_pack(20);
  q.features.at("scene") = Tensor2(19, 2);
  EXPECT_THROW(validate_pack(q), ValidationError);
}

TEST(Pack, LoadPacksSortsSubdirectories) {
  TempDir dir("packs");
  write_pack(make_pack(20, 2), dir / "b");
  write_pack(make_pack(20, 1), dir / "a");
  const auto packs = load_packs(dir.path());
  ASSERT_EQ(packs.size(), 2u);
  EXPECT_EQ(packs[0].movie_id, "m1");
  EXPECT_EQ(packs[1].movie_id, "m2");
  EXPECT_EQ(load_packs(dir / "a").size(), 1u);
}

TEST(Clips, ThirtyFiveSecondsGiveThreeClips) {
  const ClipSet set = segment_clips(make_pack(35));
  EXPECT_FALSE(set.too_short);
  ASSERT_EQ(set.clips.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(set.clips[k].clip_index, k);
    EXPECT_EQ(set.clips[k].first_second, 10 * k);
    EXPECT_EQ(set.clips[k].features.at("audio").rows(), 10u);
  }
}

TEST(Clips, ConstantLabelsGiveThatLabel) {
  MoviePack p = make_pack(20);
  for (std::size_t t = 0; t < 10; ++t) p.labels(t, 0) = 0.3;
  const ClipSet set = segment_clips(p);
  EXPECT_NEAR(set.clips[0].valence, 0.3, 1e-12);
}

TEST(Clips, ShortMovieGivesNoClips) {
  const ClipSet set = segment_clips(make_pack(9));
  EXPECT_TRUE(set.clips.empty());
  EXPECT_TRUE(set.too_short);
}

TEST(Clips, SegmentsReconstructCoveredSeconds) {
  const MoviePack p = make_pack(47, 5);
  const ClipSet set = segment_clips(p);
  ASSERT_EQ(set.clips.size(), 4u);
  std::size_t second = 0;
  for (const auto& clip : set.clips) {
    EXPECT_EQ(clip.first_second, second);
    for (const auto& [name, x] : clip.features) {
      for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
          EXPECT_EQ(x(r, c), p.feature(name)(second + r, c));
        }
      }
    }
    double v = 0.0, a = 0.0;
    for (std::size_t r = 0; r < 10; ++r) {
      v += p.labels(second + r, 0);
      a += p.labels(second + r, 1);
    }
    EXPECT_NEAR(clip.valence, v / 10.0, 1e-12);
    EXPECT_NEAR(clip.arousal, a / 10.0, 1e-12);
    EXPECT_LE(std::abs(clip.valence), 1.0);
    EXPECT_LE(std::abs(clip.arousal), 1.0);
    second += 10;
  }
  EXPECT_EQ(second, 40u);
}

TEST(Windows, TrainModeIsStrideOne) {
  const auto w = make_windows(10, 4, WindowMode::train);
  ASSERT_EQ(w.size(), 7u);
  for (std::size_t k = 0; k < 7; ++k) EXPECT_EQ(w[k], (ContextWindow{k, 4, 0}));
}

TEST(Windows, InferModeAddsOverlappingTail) {
  const auto w = make_windows(10, 4, WindowMode::infer);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0], (ContextWindow{0, 4, 0}));
  EXPECT_EQ(w[1], (ContextWindow{4, 4, 0}));
  EXPECT_EQ(w[2], (ContextWindow{6, 4, 2}));
  std::vector<int> consumed(10, 0);
  for (const auto& win : w) {
    for (std::size_t p = win.consume_from; p < win.length; ++p) ++consumed[win.first + p];
  }
  for (int c : consumed) EXPECT_EQ(c, 1);
  EXPECT_EQ(make_windows(8, 4, WindowMode::infer).size(), 2u);
}

TEST(Windows, FewerClipsThanWindow) {
  for (auto mode : {WindowMode::infer, WindowMode::train}) {
    const auto w = make_windows(3, 4, mode);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0], (ContextWindow{0, 3, 0}));
  }
  EXPECT_TRUE(make_windows(0, 4, WindowMode::train).empty());
  EXPECT_THROW(make_windows(5, 0, WindowMode::train), InputError);
}

TEST(Synthetic, SameSeedGivesIdenticalBytes) {
  TempDir a("syn"), b("syn");
  SyntheticOptions opts;
  opts.movies = 2;
  opts.seconds = 40;
  opts.modalities = {{"audio", 4}, {"scene", 3}};
  opts.seed = 9;
  opts.noise_modality = true;
  gen_synthetic(opts, a.path());
  gen_synthetic(opts, b.path());
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a.path())) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a.path());
    EXPECT_EQ(read_bytes(entry.path()), read_bytes(b.path() / rel)) << rel;
    ++files;
  }
  EXPECT_EQ(files, 2u * 5);
}

TEST(Synthetic, PacksMatchWhatLoadReads) {
  TempDir dir("syn");
  SyntheticOptions opts;
  opts.movies = 1;
  opts.seconds = 25;
  opts.modalities = {{"audio", 4}};
  const auto packs = gen_synthetic(opts, dir.path());
  const MoviePack loaded = load_pack(dir / "movie_000");
  EXPECT_EQ(loaded.feature("audio"), packs[0].feature("audio"));
  EXPECT_EQ(loaded.labels, packs[0].labels);
}

TEST(Synthetic, LabelsFollowLatentRelation) {
  SyntheticOptions opts;
  opts.movies = 2;
  opts.seconds = 500;
  opts.modalities = {{"audio", 2}};
  for (const auto& p : gen_synthetic(opts)) {
    for (std::size_t t = 0; t < p.seconds; ++t) {
      const double v = p.labels(t, 0), a = p.labels(t, 1);
      EXPECT_LE(std::abs(v), 1.0);
      EXPECT_NEAR(a, 2.0 * std::abs(v) - 1.0, 1e-6);
    }
  }
}

TEST(Synthetic, RejectsShortMovies) {
  SyntheticOptions opts;
  opts.seconds = 19;
  EXPECT_THROW(gen_synthetic(opts), InputError);
}

TEST(Synthetic, NoiseModalityShape) {
  SyntheticOptions opts;
  opts.movies = 1;
  opts.seconds = 20;
  opts.modalities = {{"audio", 5}, {"scene", 2}};
  opts.noise_modality = true;
  const auto p = gen_synthetic(opts).front();
  ASSERT_EQ(p.modalities.size(), 3u);
  EXPECT_EQ(p.modalities.back(), (ModalitySpec{"noise", 5}));
}

// Least-squares readout with intercept, solved through the normal equations.
std::vector<double> fit_linear(const Tensor2& x, const Tensor2& labels) {
  const std::size_t p = x.cols() + 1;
  std::vector<double> a(p * p, 0.0), b(p, 0.0);
  for (std::size_t t = 0; t < x.rows(); ++t) {
    std::vector<double> row(x.row(t).begin(), x.row(t).end());
    row.push_back(1.0);
    for (std::size_t i = 0; i < p; ++i) {
      b[i] += row[i] * labels(t, 0);
      for (std::size_t j = 0; j < p; ++j) a[i * p + j] += row[i] * row[j];
    }
  }
  for (std::size_t k = 0; k < p; ++k) {  // Gaussian elimination with partial pivoting
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < p; ++i) {
      if (std::abs(a[i * p + k]) > std::abs(a[piv * p + k])) piv = i;
    }
    for (std::size_t j = 0; j < p; ++j) std::swap(a[k * p + j], a[piv * p + j]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < p; ++i) {
      const double f = a[i * p + k] / a[k * p + k];
      for (std::size_t j = k; j < p; ++j) a[i * p + j] -= f * a[k * p + j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> w(p);
  for (std::size_t k = p; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < p; ++j) s -= a[k * p + j] * w[j];
    w[k] = s / a[k * p + k];
  }
  return w;
}

double readout_pcc(const std::vector<double>& w, const Tensor2& x, const Tensor2& labels) {
  std::vector<double> pred(x.rows()), gt(x.rows());
  for (std::size_t t = 0; t < x.rows(); ++t) {
    double s = w.back();
    for (std::size_t d = 0; d < x.cols(); ++d) s += w[d] * x(t, d);
    pred[t] = s;
    gt[t] = labels(t, 0);
  }
  double mp = 0, mg = 0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    mp += pred[t];
    mg += gt[t];
  }
  mp /= pred.size();
  mg /= gt.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    sxy += (pred[t] - mp) * (gt[t] - mg);
    sxx += (pred[t] - mp) * (pred[t] - mp);
    syy += (gt[t] - mg) * (gt[t] - mg);
  }
  return sxy / std::sqrt(sxx * syy);
}

TEST(Synthetic, LinearReadoutOracle) {
  // Fit on one 1000-second movie, score on another, so the noise modality
  // cannot correlate through in-sample overfitting.
  SyntheticOptions opts;
  opts.movies = 2;
  opts.seconds = 1000;
  opts.modalities = {{"audio", 16}, {"scene", 16}, {"expression", 16}};
  opts.noise_modality = true;
  opts.seed = 7;
  const auto packs = gen_synthetic(opts);
  for (const auto& spec : opts.modalities) {
    const auto w = fit_linear(packs[0].feature(spec.name), packs[0].labels);
    EXPECT_GT(readout_pcc(w, packs[1].feature(spec.name), packs[1].labels), 0.8) << spec.name;
  }
  const auto w = fit_linear(packs[0].feature("noise"), packs[0].labels);
  EXPECT_LT(std::abs(readout_pcc(w, packs[1].feature("noise"), packs[1].labels)), 0.1);
}

}  // namespace
}  // namespace affect::data
