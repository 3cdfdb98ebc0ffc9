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
#include <string_view>
#include <optional>
#include <vector>

#include "bvt/attention.hpp"
#include "bvt/matrix.hpp"
#include "bvt/tensor.hpp"

namespace bvt {

// Which submodules run binarized. Embedding, normalisation, residual paths and
// the classifier head always stay full precision.
enum class BinarizationStage : std::uint8_t {
  kFullPrecision,
  kAttentionOnly,  // attention weights and intermediates; MLPs full precision
  kFull,           // additionally binarizes MLP weights
};

enum class ActivationBits : std::uint8_t { kFullPrecision, kBinary };

std::string_view stage_name(BinarizationStage s);
std::optional<BinarizationStage> parse_stage(std::string_view name);
std::string_view activation_bits_name(ActivationBits b);
std::optional<ActivationBits> parse_activation_bits(std::string_view name);

struct ModelConfig {
  std::size_t image_size = 32;
  std::size_t patch_size = 4;
  std::size_t channels = 3;
  std::size_t embed_dim = 64;
  std::size_t heads = 4;
  std::size_t depth = 2;
  std::size_t mlp_ratio = 4;
  std::size_t num_classes = 10;
  double beta = 0.25;
  BinarizationStage stage = BinarizationStage::kFullPrecision;
  // Activation precision inside binarized MLPs (kFull stage only).
  ActivationBits mlp_activation_bits = ActivationBits::kFullPrecision;
  std::uint64_t seed = 42;

  // Throws kConfigError (or kInvalidBeta) for an unusable configuration.
  void validate() const;

  std::size_t patches_per_side() const { return image_size / patch_size; }
  std::size_t patch_count() const { return patches_per_side() * patches_per_side(); }
  std::size_t tokens() const { return patch_count() + 1; }  // + class token
  std::size_t patch_dim() const { return channels * patch_size * patch_size; }
  std::size_t head_dim() const { return embed_dim / heads; }
  std::size_t hidden_dim() const { return embed_dim * mlp_ratio; }

  bool operator==(const ModelConfig&) const = default;
};

// Closed-form count of master parameters.
std::uint64_t parameter_count(const ModelConfig& cfg);

struct LayerNormParams {
  std::vector<float> gamma;
  std::vector<float> beta;

  bool operator==(const LayerNormParams&) const = default;
};

struct TransformerBlock {
  LayerNormParams norm1;
  AttentionWeights attention;
  LayerNormParams norm2;
  Projection fc1;
  Projection fc2;
};

// DeiT-style vision transformer: patch embedding + class token + learned
// positional embedding, depth pre-norm blocks (attention, GELU MLP), final
// LayerNorm on the class token and a linear head.
//
// Full-precision master weights are always kept; binarized layers are views
// re-derived from them whenever the stage changes.
class Model {
 public:
  const ModelConfig& config() const { return cfg_; }
  BinarizationStage stage() const { return cfg_.stage; }

  // Re-derives every binarized view from the masters. Masters are untouched.
  void set_stage(BinarizationStage stage);

  // images: batch x channels x H x W (rank 4) or a single image (rank 3).
  // Returns batch x num_classes logits. A non-finite activation throws
  // kNumericalFailure naming the layer.
  Matrix forward(const FloatTensor& images) const;

  std::uint64_t parameter_count() const;

  // Masters in a fixed order with stable names.
  std::vector<NamedTensor> export_masters() const;
  static Model import_masters(const ModelConfig& cfg,
                              const std::vector<NamedTensor>& tensors);

 private:
  friend Model build_model(const ModelConfig& cfg);

  AttentionConfig attention_config() const;
  Matrix embed(const FloatTensor& images, std::size_t index) const;

  ModelConfig cfg_;
  Linear patch_embed_;
  std::vector<float> class_token_;
  Matrix position_embed_;
  std::vector<TransformerBlock> blocks_;
  LayerNormParams final_norm_;
  Linear head_;
};

// Deterministic weights: std::mt19937_64(cfg.seed) feeding
// std::normal_distribution(0, 0.02) for every weight, bias, class token and
// positional embedding in export_masters() order; LayerNorm gamma = 1,
// beta = 0.
Model build_model(const ModelConfig& cfg);

Model set_stage(Model model, BinarizationStage stage);

// Shared building blocks, exposed for reference checks.
void layer_norm_rows(Matrix& x, const LayerNormParams& p);
float gelu(float x);

}  // namespace bvt
