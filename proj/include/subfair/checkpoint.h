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

// Text checkpoints: a JSON document with a "header" object (kind, dims,
// config hash, seed) and a "tensors" array. Doubles are written with 17
// significant digits, so a save/load cycle is exact. Also the JSON form of
// TrainConfig and the key-order-independent config hash.

#ifndef SUBFAIR_CHECKPOINT_H_
#define SUBFAIR_CHECKPOINT_H_

#include <cstdint>
#include <string>

#include "subfair/model.h"
#include "subfair/train.h"

namespace subfair {

struct CheckpointMeta {
  uint64_t seed = 0;
  uint64_t config_hash = 0;
};

std::string EncoderCheckpointJson(const Encoder& encoder,
                                  const CheckpointMeta& meta);
Encoder ParseEncoderCheckpoint(const std::string& text,
                               CheckpointMeta* meta = nullptr);

std::string ClassifierCheckpointJson(const Classifier& classifier,
                                     const CheckpointMeta& meta);
Classifier ParseClassifierCheckpoint(const std::string& text,
                                     CheckpointMeta* meta = nullptr);

// Whole-file helpers; throw kIo on unreadable or unwritable paths.
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

std::string TrainConfigJson(const TrainConfig& config);
// Applies the keys present in `text` on top of `base`; unknown keys are an
// error.
TrainConfig ParseTrainConfigJson(const std::string& text,
                                 const TrainConfig& base = {});

// FNV-1a of the canonical (sorted-key, compact) dump of a JSON document.
uint64_t ConfigHash(const std::string& json_text);

// 64-bit FNV-1a of arbitrary bytes.
uint64_t Fnv1a(const std::string& bytes);

}  // namespace subfair

#endif  // SUBFAIR_CHECKPOINT_H_
