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
#include <string>
#include <vector>

#include "bvt/model.hpp"

namespace bvt {

// Cost of one inference on a single image.
//
// bops counts multiply-accumulates whose operands are both binary. flops
// counts everything else; a MAC between a binary weight and a full-precision
// activation reduces to a signed add and counts as half a FLOP, so flops may
// hold multiples of 0.5 (exactly representable).
struct OpsReport {
  std::uint64_t bops = 0;
  double flops = 0.0;
  double total_ops = 0.0;  // bops / 64 + flops
  std::uint64_t size_bytes = 0;

  bool operator==(const OpsReport&) const = default;
};

struct LayerCost {
  std::string name;
  std::uint64_t bops = 0;
  double flops = 0.0;
};

// Cost constants, in FLOPs per element unless noted.
inline constexpr double kSoftmaxFlops = 2.0;
inline constexpr double kLayerNormFlops = 1.0;
inline constexpr double kElementwiseFlops = 1.0;  // residual/pos add, GELU
inline constexpr double kBinarizeFlops = 1.0;     // sign + l1 scale, per input
inline constexpr double kMixedMacFlops = 0.5;     // binary weight x FP input

// Per-layer breakdown in execution order. Sums to count_ops().
std::vector<LayerCost> cost_breakdown(const ModelConfig& cfg);

OpsReport count_ops(const ModelConfig& cfg);

// 4 bytes per full-precision parameter; a binarized weight tensor costs
// ceil(out * in / 8) bytes of bits plus 4 bytes per output-channel scale.
std::uint64_t model_size(const ModelConfig& cfg);

// A binarized linear layer of out x in weights over t tokens with binary
// inputs: t * out * in BOPs plus one scaling FLOP per output.
LayerCost binary_linear_cost(std::size_t tokens, std::size_t out, std::size_t in);

}  // namespace bvt
