// Copyright 2026 The bvt Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bvt/model.hpp"
#include "bvt/tensor.hpp"

namespace bvt {

// Tensor file layout, little-endian throughout:
//
//   "BVT1" | dtype u8 | rank u8 | rank x u64 dims | payload
//
// dtype 0 is row-major f32. dtype 1 (PlusMinus) and 2 (ZeroOne) are packed
// bits of rank 1 or 2, one run of 64-bit LSB-first words per row, each row
// padded independently. Payload length is fully determined by the header.
enum class DType : std::uint8_t { kF32 = 0, kPackedPlusMinus = 1, kPackedZeroOne = 2 };

inline constexpr char kTensorMagic[4] = {'B', 'V', 'T', '1'};
inline constexpr char kModelMagic[4] = {'B', 'V', 'T', 'M'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

using Bytes = std::vector<std::uint8_t>;

Bytes encode_tensor(const Tensor& t);

// Decodes one tensor starting at data[0]. Trailing bytes are rejected unless
// consumed is non-null, in which case it receives the encoded length.
// Malformed input throws FormatError; base_offset shifts reported offsets.
Tensor decode_tensor(std::span<const std::uint8_t> data,
                     std::size_t* consumed = nullptr, std::size_t base_offset = 0);

void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);

// Attention dumps: rank-2 f32 tensors, one attention row per tensor row.
void write_attention_dump(const std::filesystem::path& path,
                          const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> read_attention_dump(const std::filesystem::path& path);

// Model config as JSON text. Keys absent from the text keep their defaults;
// unknown keys and ill-typed values throw kConfigError.
std::string config_to_json(const ModelConfig& cfg);
ModelConfig config_from_json(const std::string& text);
ModelConfig read_config_file(const std::filesystem::path& path);
void write_config_file(const std::filesystem::path& path, const ModelConfig& cfg);

// Model file layout:
//
//   "BVTM" | version u32 | manifest length u64 | manifest JSON | tensors
//
// The manifest holds the config (including the stage) and the name, shape
// and byte length of every master tensor; the tensors follow in manifest
// order as tensor-file blobs. Binarized views are re-derived on load.
Bytes serialize_model(const Model& model);
Model deserialize_model(std::span<const std::uint8_t> data);

void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

}  // namespace bvt
