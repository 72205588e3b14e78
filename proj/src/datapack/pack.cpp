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

#include "affect/datapack/pack.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>

#include <json.hpp>

#include "affect/errors.hpp"

namespace affect::data {

namespace fs = std::filesystem;
using num::Tensor2;
using Kind = ValidationError::Kind;

std::string to_string(Task task) { return task == Task::valence ? "valence" : "arousal"; }

Task parse_task(const std::string& text) {
  if (text == "valence") return Task::valence;
  if (text == "arousal") return Task::arousal;
  throw InputError("unknown task '" + text + "' (expected valence or arousal)");
}

const Tensor2& MoviePack::feature(const std::string& modality) const {
  auto it = features.find(modality);
  if (it == features.end()) {
    throw ConfigError("movie " + movie_id + " has no modality '" + modality + "'");
  }
  return it->second;
}

void validate_pack(const MoviePack& pack) {
  std::set<std::string> names;
  for (const auto& spec : pack.modalities) {
    if (spec.dim == 0) throw ValidationError(Kind::manifest, "modality " + spec.name + " has dim 0");
    if (!names.insert(spec.name).second) {
      throw ValidationError(Kind::manifest, "duplicate modality " + spec.name);
    }
    auto it = pack.features.find(spec.name);
    if (it == pack.features.end()) {
      throw ValidationError(Kind::missing_file, "modality " + spec.name + " has no features");
    }
    if (it->second.rows() != pack.seconds) {
      throw ValidationError(Kind::row_count, "modality " + spec.name + " has " +
                                                 std::to_string(it->second.rows()) +
                                                 " rows, expected " +
                                                 std::to_string(pack.seconds));
    }
    if (it->second.cols() != spec.dim) {
      throw ValidationError(Kind::dim_mismatch, "modality " + spec.name + " has dim " +
                                                    std::to_string(it->second.cols()) +
                                                    ", expected " + std::to_string(spec.dim));
    }
  }
  if (pack.features.size() != pack.modalities.size()) {
    throw ValidationError(Kind::manifest, "feature matrices do not match declared modalities");
  }
  if (pack.labels.rows() != pack.seconds || pack.labels.cols() != 2) {
    throw ValidationError(Kind::row_count, "labels shape " + pack.labels.shape_str() +
                                               " does not match " + std::to_string(pack.seconds) +
                                               " seconds x 2");
  }
  for (std::size_t r = 0; r < pack.labels.rows(); ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      const double v = pack.labels(r, c);
      if (!(v >= -1.0 && v <= 1.0)) {
        throw ValidationError(Kind::label_range, "label " + std::to_string(v) + " at row " +
                                                     std::to_string(r) + " outside [-1, 1]");
      }
    }
  }
}

namespace {

std::vector<float> read_f32(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError(Kind::missing_file, "cannot open " + file.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 4 != 0) {
    throw ValidationError(Kind::row_count,
                          file.string() + ": size " + std::to_string(bytes.size()) +
                              " is not a whole number of float32 values");
  }
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t u = 0;
    for (int b = 3; b >= 0; --b) u = (u << 8) | static_cast<unsigned char>(bytes[4 * i + b]);
    out[i] = std::bit_cast<float>(u);
  }
  return out;
}

void write_f32(const fs::path& file, const Tensor2& t) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + file.string());
  std::vector<char> bytes(t.size() * 4);
  auto d = t.data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::uint32_t u = std::bit_cast<std::uint32_t>(static_cast<float>(d[i]));
    for (int b = 0; b < 4; ++b) bytes[4 * i + b] = static_cast<char>((u >> (8 * b)) & 0xFF);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to " + file.string());
}

Tensor2 read_matrix(const fs::path& file, std::size_t rows, std::size_t cols) {
  std::vector<float> raw = read_f32(file);
  if (raw.size() != rows * cols) {
    // A whole number of declared rows means the width is wrong; otherwise the row count is.
    if (rows > 0 && raw.size() % rows == 0) {
      throw ValidationError(Kind::dim_mismatch, file.string() + ": " +
                                                    std::to_string(raw.size() / rows) +
                                                    " values per row, manifest says " +
                                                    std::to_string(cols));
    }
    if (raw.size() % cols == 0) {
      throw ValidationError(Kind::row_count, file.string() + ": " +
                                                 std::to_string(raw.size() / cols) +
                                                 " rows, manifest says " + std::to_string(rows));
    }
    throw ValidationError(Kind::row_count, file.string() + ": " + std::to_string(raw.size()) +
                                               " values, expected " +
                                               std::to_string(rows * cols));
  }
  return Tensor2(rows, cols, std::vector<double>(raw.begin(), raw.end()));
}

template <typename T>
T manifest_field(const nlohmann::json& j, const char* key, const fs::path& file) {
  if (!j.contains(key)) {
    throw ValidationError(Kind::manifest, file.string() + ": missing key '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(Kind::manifest, file.string() + ": bad value for '" + key + "'");
  }
}

}  // namespace

MoviePack load_pack(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw ValidationError(Kind::missing_file, "cannot open " + manifest_path.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(Kind::manifest, manifest_path.string() + ": " + e.what());
  }

  MoviePack pack;
  pack.movie_id = manifest_field<std::string>(manifest, "movie_id", manifest_path);
  const auto seconds = manifest_field<std::int64_t>(manifest, "seconds", manifest_path);
  if (seconds < 0) throw ValidationError(Kind::manifest, manifest_path.string() + ": seconds < 0");
  pack.seconds = static_cast<std::size_t>(seconds);
  const auto mods = manifest_field<nlohmann::json>(manifest, "modalities", manifest_path);
  if (!mods.is_array()) {
    throw ValidationError(Kind::manifest, manifest_path.string() + ": modalities is not a list");
  }
  for (const auto& m : mods) {
    ModalitySpec spec{manifest_field<std::string>(m, "name", manifest_path),
                      manifest_field<std::size_t>(m, "dim", manifest_path)};
    const auto file = manifest_field<std::string>(m, "file", manifest_path);
    if (spec.dim == 0) {
      throw ValidationError(Kind::manifest, manifest_path.string() + ": modality " + spec.name +
                                                " has dim 0");
    }
    if (pack.features.contains(spec.name)) {
      throw ValidationError(Kind::manifest,
                            manifest_path.string() + ": duplicate modality " + spec.name);
    }
    pack.features.emplace(spec.name, read_matrix(dir / file, pack.seconds, spec.dim));
    pack.modalities.push_back(std::move(spec));
  }
  const auto labels_file = manifest_field<std::string>(manifest, "labels_file", manifest_path);
  pack.labels = read_matrix(dir / labels_file, pack.seconds, 2);
  for (std::size_t r = 0; r < pack.seconds; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      const double v = pack.labels(r, c);
      if (!(v >= -1.0 && v <= 1.0)) {
        throw ValidationError(Kind::label_range, (dir / labels_file).string() + ": value " +
                                                     std::to_string(v) + " at row " +
                                                     std::to_string(r) + " outside [-1, 1]");
      }
    }
  }
  for (const auto& [name, m] : pack.features) {
    if (!m.all_finite()) {
      throw ValidationError(Kind::manifest, "modality " + name + " contains non-finite values");
    }
  }
  return pack;
}

void write_pack(const MoviePack& pack, const fs::path& dir) {
  validate_pack(pack);
  fs::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["movie_id"] = pack.movie_id;
  manifest["seconds"] = pack.seconds;
  manifest["modalities"] = nlohmann::ordered_json::array();
  for (const auto& spec : pack.modalities) {
    const std::string file = spec.name + ".f32";
    manifest["modalities"].push_back({{"name", spec.name}, {"dim", spec.dim}, {"file", file}});
    write_f32(dir / file, pack.features.at(spec.name));
  }
  manifest["labels_file"] = "labels.f32";
  write_f32(dir / "labels.f32", pack.labels);
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  out << manifest.dump(2) << "\n";
  if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
}

std::vector<MoviePack> load_packs(const fs::path& data_dir) {
  if (fs::exists(data_dir / "manifest.json")) return {load_pack(data_dir)};
  if (!fs::is_directory(data_dir)) {
    throw ValidationError(Kind::missing_file, "data directory " + data_dir.string() +
                                                  " does not exist");
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) {
    throw ValidationError(Kind::missing_file, "no feature packs under " + data_dir.string());
  }
  std::vector<MoviePack> packs;
  for (const auto& d : dirs) packs.push_back(load_pack(d));
  return packs;
}

}  // namespace affect::data
