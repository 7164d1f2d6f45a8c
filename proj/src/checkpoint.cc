// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subfair/checkpoint.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "subfair/error.h"

namespace subfair {
namespace {

using nlohmann::json;

json MatrixJson(const std::string& name, const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return {{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd MatrixFrom(const json& t) {
  const Eigen::Index rows = t.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = t.at("cols").get<Eigen::Index>();
  const json& data = t.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<size_t>(rows * cols)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "tensor '" + t.at("name").get<std::string>() +
                    "' has the wrong number of values");
  }
  Eigen::MatrixXd m(rows, cols);
  size_t i = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[i++].get<double>();
  }
  return m;
}

void AddLayer(json& tensors, const std::string& prefix, const DenseLayer& l) {
  tensors.push_back(MatrixJson(prefix + ".w", l.w));
  tensors.push_back(MatrixJson(prefix + ".b", l.b));
}

DenseLayer LayerFrom(const json& tensors, size_t at) {
  DenseLayer l;
  l.w = MatrixFrom(tensors.at(at));
  l.b = MatrixFrom(tensors.at(at + 1));
  if (l.b.cols() != 1) {
    throw Error(ErrorCode::kDimensionMismatch, "bias tensor must be a column");
  }
  return l;
}

json Header(const std::string& kind, const CheckpointMeta& meta) {
  return {{"format", "subfair-checkpoint"},
          {"version", 1},
          {"kind", kind},
          {"seed", meta.seed},
          {"config_hash", meta.config_hash}};
}

json ParseDocument(const std::string& text, const std::string& kind,
                   CheckpointMeta* meta) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("checkpoint: ") + e.what());
  }
  try {
    const json& h = doc.at("header");
    if (h.at("format") != "subfair-checkpoint" || h.at("kind") != kind) {
      throw Error(ErrorCode::kParse, "checkpoint is not a " + kind);
    }
    if (meta != nullptr) {
      meta->seed = h.at("seed").get<uint64_t>();
      meta->config_hash = h.at("config_hash").get<uint64_t>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("checkpoint header: ") + e.what());
  }
  return doc;
}

}  // namespace

std::string EncoderCheckpointJson(const Encoder& encoder,
                                  const CheckpointMeta& meta) {
  json doc;
  doc["header"] = Header("encoder", meta);
  doc["header"]["encoder"] = EncoderKindName(encoder.kind());
  doc["header"]["input_dim"] = encoder.input_dim();
  doc["header"]["output_dim"] = encoder.output_dim();
  json tensors = json::array();
  for (size_t l = 0; l < encoder.layers().size(); ++l) {
    AddLayer(tensors, "layer" + std::to_string(l), encoder.layers()[l]);
  }
  doc["tensors"] = tensors;
  return doc.dump(1) + "\n";
}

Encoder ParseEncoderCheckpoint(const std::string& text, CheckpointMeta* meta) {
  const json doc = ParseDocument(text, "encoder", meta);
  try {
    const json& h = doc.at("header");
    const json& tensors = doc.at("tensors");
    std::vector<DenseLayer> layers;
    for (size_t at = 0; at + 1 < tensors.size(); at += 2) {
      layers.push_back(LayerFrom(tensors, at));
    }
    return Encoder::FromLayers(ParseEncoderKind(h.at("encoder").get<std::string>()),
                               h.at("input_dim").get<int>(), std::move(layers));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("encoder checkpoint: ") + e.what());
  }
}

std::string ClassifierCheckpointJson(const Classifier& classifier,
                                     const CheckpointMeta& meta) {
  json doc;
  doc["header"] = Header("classifier", meta);
  doc["header"]["input_dim"] = classifier.input_dim();
  doc["header"]["labels"] = classifier.labels();
  json tensors = json::array();
  AddLayer(tensors, "hidden", classifier.hidden());
  AddLayer(tensors, "output", classifier.output());
  doc["tensors"] = tensors;
  return doc.dump(1) + "\n";
}

Classifier ParseClassifierCheckpoint(const std::string& text,
                                     CheckpointMeta* meta) {
  const json doc = ParseDocument(text, "classifier", meta);
  try {
    const json& tensors = doc.at("tensors");
    if (tensors.size() != 4) {
      throw Error(ErrorCode::kParse, "classifier checkpoint needs 4 tensors");
    }
    return Classifier::FromLayers(
        LayerFrom(tensors, 0), LayerFrom(tensors, 2),
        doc.at("header").at("labels").get<std::vector<int>>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("classifier checkpoint: ") + e.what());
  }
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

std::string TrainConfigJson(const TrainConfig& c) {
  json j = {{"k", c.k},
            {"epochs1", c.epochs1},
            {"epochs2", c.epochs2},
            {"lr1", c.lr1},
            {"lr2", c.lr2},
            {"temperature", c.temperature},
            {"loss", LossKindName(c.loss)},
            {"miner", MinerKindName(c.miner)},
            {"fraction", c.fraction},
            {"seed", c.seed},
            {"epsilon", c.epsilon},
            {"encoder", EncoderKindName(c.encoder)},
            {"hidden_dim", c.hidden_dim},
            {"embed_dim", c.embed_dim},
            {"view_noise", c.view_noise},
            {"classifier_hidden", c.classifier_hidden},
            {"batch_size", c.batch_size}};
  return j.dump(2) + "\n";
}

TrainConfig ParseTrainConfigJson(const std::string& text,
                                 const TrainConfig& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kParse, "config must be an object");
  TrainConfig c = base;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "k") c.k = v.get<int>();
      else if (key == "epochs1") c.epochs1 = v.get<int>();
      else if (key == "epochs2") c.epochs2 = v.get<int>();
      else if (key == "lr1") c.lr1 = v.get<double>();
      else if (key == "lr2") c.lr2 = v.get<double>();
      else if (key == "temperature") c.temperature = v.get<double>();
      else if (key == "loss") c.loss = ParseLossKind(v.get<std::string>());
      else if (key == "miner") c.miner = ParseMinerKind(v.get<std::string>());
      else if (key == "fraction") c.fraction = v.get<double>();
      else if (key == "seed") c.seed = v.get<uint64_t>();
      else if (key == "epsilon") c.epsilon = v.get<double>();
      else if (key == "encoder") c.encoder = ParseEncoderKind(v.get<std::string>());
      else if (key == "hidden_dim") c.hidden_dim = v.get<int>();
      else if (key == "embed_dim") c.embed_dim = v.get<int>();
      else if (key == "view_noise") c.view_noise = v.get<double>();
      else if (key == "classifier_hidden") c.classifier_hidden = v.get<int>();
      else if (key == "batch_size") c.batch_size = v.get<int>();
      else throw Error(ErrorCode::kParse, "unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  return c;
}

uint64_t Fnv1a(const std::string& bytes) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t ConfigHash(const std::string& json_text) {
  try {
    // nlohmann::json objects keep keys sorted, so dump() is canonical.
    return Fnv1a(json::parse(json_text).dump());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("config hash: ") + e.what());
  }
}

}  // namespace subfair
