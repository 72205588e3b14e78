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

#include "affect/training/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "affect/errors.hpp"

namespace affect::train {

num::ParamStore TrainedBundle::params() {
  num::ParamStore store;
  intra.collect(store);
  if (context) context->collect(store);
  return store;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>((v >> (8 * b)) & 0xFF));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 3; b >= 0; --b) v = (v << 8) | in[at + b];
  return v;
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
  const auto u = std::bit_cast<std::uint64_t>(d);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>((u >> (8 * b)) & 0xFF));
}

double get_f64(const std::vector<std::uint8_t>& in, std::size_t at) {
  std::uint64_t u = 0;
  for (int b = 7; b >= 0; --b) u = (u << 8) | in[at + b];
  return std::bit_cast<double>(u);
}

// Empty model with the shapes the header describes.
TrainedBundle skeleton(const nlohmann::json& header) {
  TrainedBundle b;
  b.task = data::parse_task(header.at("task").get<std::string>());
  b.config = config_from_json(header.at("config"));
  for (const auto& m : header.at("modalities")) {
    b.modalities.push_back({m.at("name").get<std::string>(), m.at("dim").get<std::size_t>()});
  }
  b.ranking = header.at("ranking").get<std::vector<std::string>>();
  const auto& dims = b.config.dims;
  for (const auto& name : b.ranking) {
    std::size_t dim = 0;
    for (const auto& s : b.modalities) {
      if (s.name == name) dim = s.dim;
    }
    if (dim == 0) throw CorruptionError("ranked modality " + name + " has no spec");
    b.intra.add_encoder({name, layers::BiLstmStack::zeros(dim, dims.hidden)});
    b.intra.active_set.push_back(name);
  }
  b.intra.fusion = model::DenseHead{
      layers::DenseLayer::zeros(2 * dims.hidden, dims.embedding, layers::Activation::tanh),
      layers::DenseLayer::zeros(dims.embedding, 1, layers::Activation::tanh)};
  if (header.at("has_context").get<bool>()) {
    model::ContextModel ctx;
    ctx.stack = layers::BiLstmStack::zeros(dims.embedding, dims.context_hidden);
    ctx.head = layers::DenseLayer::zeros(2 * dims.context_hidden, 1, layers::Activation::tanh);
    b.context = std::move(ctx);
  }
  return b;
}

}  // namespace

std::vector<std::uint8_t> param_bytes(const num::ParamStore& store) {
  std::vector<std::uint8_t> out;
  for (const auto& e : store) {
    for (double v : e.param->value.data()) put_f64(out, v);
  }
  return out;
}

std::vector<std::uint8_t> encode_checkpoint(TrainedBundle& bundle) {
  if (!bundle.intra.finalized()) throw StateError("cannot save an unfinalized model");
  num::ParamStore store = bundle.params();
  nlohmann::json header;
  header["task"] = data::to_string(bundle.task);
  header["config"] = config_to_json(bundle.config);
  header["modalities"] = nlohmann::json::array();
  for (const auto& s : bundle.modalities) {
    header["modalities"].push_back({{"name", s.name}, {"dim", s.dim}});
  }
  header["ranking"] = bundle.ranking;
  header["has_context"] = bundle.context.has_value();
  header["tensors"] = nlohmann::json::array();
  for (const auto& e : store) {
    header["tensors"].push_back(
        {{"name", e.name}, {"rows", e.param->value.rows()}, {"cols", e.param->value.cols()}});
  }
  const std::string text = header.dump();

  std::vector<std::uint8_t> out(kCheckpointMagic, kCheckpointMagic + 4);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  auto payload = param_bytes(store);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

TrainedBundle decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0) {
    throw FormatError("not a checkpoint (bad magic)");
  }
  if (bytes.size() < 12) throw CorruptionError("checkpoint truncated inside the preamble");
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  const std::size_t header_len = get_u32(bytes, 8);
  if (bytes.size() < 12 + header_len) throw CorruptionError("checkpoint truncated inside header");

  nlohmann::json header;
  TrainedBundle bundle;
  try {
    header = nlohmann::json::parse(bytes.begin() + 12, bytes.begin() + 12 + header_len);
    bundle = skeleton(header);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptionError(std::string("checkpoint header unreadable: ") + e.what());
  } catch (const ConfigError& e) {
    throw CorruptionError(std::string("checkpoint config invalid: ") + e.what());
  } catch (const InputError& e) {
    throw CorruptionError(std::string("checkpoint header invalid: ") + e.what());
  }

  num::ParamStore store = bundle.params();
  const auto& tensors = header.at("tensors");
  if (!tensors.is_array() || tensors.size() != store.size()) {
    throw CorruptionError("checkpoint lists " + std::to_string(tensors.size()) +
                          " tensors, model expects " + std::to_string(store.size()));
  }
  std::size_t expected = 0;
  for (std::size_t k = 0; k < store.size(); ++k) {
    const auto& t = tensors[k];
    const num::Param& p = *store[k].param;
    if (t.value("name", "") != store[k].name || t.value("rows", std::size_t{0}) != p.value.rows() ||
        t.value("cols", std::size_t{0}) != p.value.cols()) {
      throw CorruptionError("tensor " + std::to_string(k) + " (" + store[k].name +
                            ") does not match the header shape");
    }
    expected += p.value.size();
  }
  const std::size_t payload = bytes.size() - 12 - header_len;
  if (payload != expected * 8) {
    throw CorruptionError("checkpoint payload has " + std::to_string(payload) + " bytes, expected " +
                          std::to_string(expected * 8));
  }
  std::size_t at = 12 + header_len;
  for (const auto& e : store) {
    for (double& v : e.param->value.data()) {
      v = get_f64(bytes, at);
      at += 8;
    }
  }
  return bundle;
}

void save_checkpoint(TrainedBundle& bundle, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(bundle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to " + path.string());
}

TrainedBundle load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

void require_task(const TrainedBundle& bundle, data::Task task) {
  if (bundle.task != task) {
    throw TaskMismatchError("checkpoint was trained for " + data::to_string(bundle.task) +
                            ", not " + data::to_string(task));
  }
}

}  // namespace affect::train
