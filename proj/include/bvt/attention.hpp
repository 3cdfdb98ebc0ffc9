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
#include <vector>

#include "bvt/binarizer.hpp"
#include "bvt/bitpack.hpp"
#include "bvt/matrix.hpp"

namespace bvt {

// Full-precision affine layer; weight is out x in.
struct Linear {
  Matrix weight;
  std::vector<float> bias;

  bool operator==(const Linear&) const = default;
};

Matrix linear_forward(const Linear& layer, const Matrix& x);

// A master full-precision layer plus its binarized view. The view is always
// derived from the master; call rebinarize() after editing the master.
struct Projection {
  Linear master;
  BinaryLinear binary;

  static Projection from_master(Linear master);
  void rebinarize();
};

enum class ProjectionMode {
  kFullPrecision,
  kBinaryWeights,  // sign(W) with channel scales, full-precision input
  kBinary,         // weights and input rows binarized; XNOR-popcount GEMM
};

Matrix project(const Projection& p, const Matrix& x, ProjectionMode mode);

// Same as project(.., kBinary) for an input that is already binarized.
Matrix project_binary(const Projection& p, const BinarizedRows& x);

struct AttentionConfig {
  std::size_t heads = 1;
  std::size_t head_dim = 1;
  double beta = 0.25;
  bool binarize_qkv = false;
  bool binarize_attention = false;

  // heads >= 1, head_dim >= 1, 0 < beta < 1; kConfigError / kInvalidBeta.
  void validate() const;
};

struct AttentionWeights {
  Projection query;
  Projection key;
  Projection value;
  Projection proj;
};

// Row-wise softmax, float output with double accumulation.
void softmax_rows(Matrix& scores);

// softmax(Q K^T / sqrt(d_k)) V for one head; Q is t x d, K and V are s x d.
Matrix fp_attention(const Matrix& q, const Matrix& k, const Matrix& v);

// Intermediates of binary_attention_forward, per head.
struct AttentionTrace {
  std::vector<std::vector<std::int32_t>> score_ints;  // when binarize_qkv
  std::vector<Matrix> probabilities;                  // softmax rows
  std::vector<BitMatrix> masks;                       // when binarize_attention
  std::vector<std::vector<std::int32_t>> value_ints;  // when both flags set
  std::vector<BinarizedRows> queries;
  std::vector<BinarizedRows> keys;
  std::vector<BinarizedRows> values;  // transposed: one row per channel
};

// Multi-head self-attention over the tokens in x (t x embed_dim).
//
// With binarize_qkv the input rows are sign-binarized with a per-token l1
// scale and projected through the binarized Q/K/V weights; Q and K are
// binarized per token within each head and scored with gemm_pm; V is
// binarized per channel. With binarize_attention each softmax row becomes the
// SAB mask Bool(a - beta * max(a)), used unscaled against V. The output
// projection follows the qkv flag. Disabled stages run in full precision.
Matrix binary_attention_forward(const Matrix& x, const AttentionWeights& w,
                                const AttentionConfig& cfg,
                                AttentionTrace* trace = nullptr);

}  // namespace bvt
