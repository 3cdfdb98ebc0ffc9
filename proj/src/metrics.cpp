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

#include "bvt/metrics.hpp"

namespace bvt {
namespace {

using u64 = std::uint64_t;

LayerCost flop_layer(std::string name, double flops) {
  return LayerCost{std::move(name), 0, flops};
}

u64 binary_tensor_bytes(u64 out, u64 in) { return (out * in + 7) / 8 + 4 * out; }

}  // namespace

LayerCost binary_linear_cost(std::size_t tokens, std::size_t out, std::size_t in) {
  return LayerCost{"binary_linear", u64{tokens} * out * in,
                   static_cast<double>(u64{tokens} * out)};
}

std::vector<LayerCost> cost_breakdown(const ModelConfig& cfg) {
  cfg.validate();
  const double t = static_cast<double>(cfg.tokens());
  const double d = static_cast<double>(cfg.embed_dim);
  const double f = static_cast<double>(cfg.hidden_dim());
  const double h = static_cast<double>(cfg.heads);
  const u64 tu = cfg.tokens();
  const u64 du = cfg.embed_dim;
  const u64 fu = cfg.hidden_dim();
  const bool bin_attn = cfg.stage != BinarizationStage::kFullPrecision;
  const bool bin_mlp = cfg.stage == BinarizationStage::kFull;
  const bool bin_mlp_act = bin_mlp && cfg.mlp_activation_bits == ActivationBits::kBinary;

  std::vector<LayerCost> out;
  out.push_back(flop_layer(
      "patch_embed", static_cast<double>(cfg.patch_count() * cfg.patch_dim() * du)));
  out.push_back(flop_layer("position_add", t * d * kElementwiseFlops));

  for (std::size_t i = 0; i < cfg.depth; ++i) {
    const std::string p = "blocks." + std::to_string(i) + ".";
    out.push_back(flop_layer(p + "norm1", t * d * kLayerNormFlops));
    if (bin_attn) {
      out.push_back(flop_layer(p + "attn.binarize_input", t * d * kBinarizeFlops));
      out.push_back({p + "attn.qkv", 3 * tu * du * du, 3 * t * d});
      out.push_back(flop_layer(p + "attn.binarize_qk", 2 * t * d * kBinarizeFlops));
      out.push_back({p + "attn.scores", tu * tu * du, h * t * t});
      out.push_back(flop_layer(p + "attn.softmax", h * t * t * kSoftmaxFlops));
      out.push_back(flop_layer(p + "attn.threshold", h * t * (t + 1)));
      out.push_back(flop_layer(p + "attn.binarize_v", t * d * kBinarizeFlops));
      out.push_back({p + "attn.mask_v", tu * tu * du, t * d});
      out.push_back(flop_layer(p + "attn.binarize_proj", t * d * kBinarizeFlops));
      out.push_back({p + "attn.proj", tu * du * du, t * d});
    } else {
      out.push_back(flop_layer(p + "attn.qkv", 3 * t * d * d));
      out.push_back(flop_layer(p + "attn.scores", t * t * d));
      out.push_back(flop_layer(p + "attn.scale", h * t * t));
      out.push_back(flop_layer(p + "attn.softmax", h * t * t * kSoftmaxFlops));
      out.push_back(flop_layer(p + "attn.attn_v", t * t * d));
      out.push_back(flop_layer(p + "attn.proj", t * d * d));
    }
    out.push_back(flop_layer(p + "residual1", t * d * kElementwiseFlops));
    out.push_back(flop_layer(p + "norm2", t * d * kLayerNormFlops));

    if (bin_mlp_act) {
      out.push_back(flop_layer(p + "fc1.binarize_input", t * d * kBinarizeFlops));
      out.push_back({p + "fc1", tu * fu * du, t * f});
      out.push_back(flop_layer(p + "gelu", t * f * kElementwiseFlops));
      out.push_back(flop_layer(p + "fc2.binarize_input", t * f * kBinarizeFlops));
      out.push_back({p + "fc2", tu * du * fu, t * d});
    } else if (bin_mlp) {
      out.push_back(flop_layer(p + "fc1", t * f * d * kMixedMacFlops + t * f));
      out.push_back(flop_layer(p + "gelu", t * f * kElementwiseFlops));
      out.push_back(flop_layer(p + "fc2", t * d * f * kMixedMacFlops + t * d));
    } else {
      out.push_back(flop_layer(p + "fc1", t * f * d));
      out.push_back(flop_layer(p + "gelu", t * f * kElementwiseFlops));
      out.push_back(flop_layer(p + "fc2", t * d * f));
    }
    out.push_back(flop_layer(p + "residual2", t * d * kElementwiseFlops));
  }

  out.push_back(flop_layer("final_norm", d * kLayerNormFlops));
  out.push_back(flop_layer("head", d * static_cast<double>(cfg.num_classes)));
  return out;
}

OpsReport count_ops(const ModelConfig& cfg) {
  OpsReport r;
  for (const LayerCost& c : cost_breakdown(cfg)) {
    r.bops += c.bops;
    r.flops += c.flops;
  }
  r.total_ops = static_cast<double>(r.bops) / 64.0 + r.flops;
  r.size_bytes = model_size(cfg);
  return r;
}

std::uint64_t model_size(const ModelConfig& cfg) {
  cfg.validate();
  const u64 d = cfg.embed_dim;
  const u64 f = cfg.hidden_dim();
  const bool bin_attn = cfg.stage != BinarizationStage::kFullPrecision;
  const bool bin_mlp = cfg.stage == BinarizationStage::kFull;

  u64 bytes = 4 * parameter_count(cfg);
  if (bin_attn)
    bytes -= cfg.depth * 4 * (4 * d * d - binary_tensor_bytes(d, d));
  if (bin_mlp)
    bytes -= cfg.depth * ((4 * f * d - binary_tensor_bytes(f, d)) +
                          (4 * d * f - binary_tensor_bytes(d, f)));
  return bytes;
}

}  // namespace bvt
