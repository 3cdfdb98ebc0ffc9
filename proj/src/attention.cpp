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

#include "bvt/attention.hpp"

#include <cmath>
#include <string>

#include "bvt/error.hpp"
#include "bvt/sab.hpp"

namespace bvt {
namespace {

void add_bias(Matrix& y, const std::vector<float>& bias) {
  if (bias.empty()) return;
  require(bias.size() == y.cols, ErrorCode::kDimensionMismatch,
          "bias length differs from output width");
  for (std::size_t r = 0; r < y.rows; ++r)
    for (std::size_t c = 0; c < y.cols; ++c) y(r, c) += bias[c];
}

void scale_in_place(Matrix& m, float s) {
  for (float& v : m.data) v *= s;
}

void write_cols(Matrix& dst, const Matrix& src, std::size_t begin) {
  for (std::size_t r = 0; r < src.rows; ++r)
    for (std::size_t c = 0; c < src.cols; ++c) dst(r, begin + c) = src(r, c);
}

}  // namespace

Matrix linear_forward(const Linear& layer, const Matrix& x) {
  Matrix y = matmul_nt(x, layer.weight);
  add_bias(y, layer.bias);
  return y;
}

Projection Projection::from_master(Linear master) {
  Projection p{std::move(master), {}};
  p.rebinarize();
  return p;
}

void Projection::rebinarize() { binary = binarize_weights(master.weight); }

Matrix project(const Projection& p, const Matrix& x, ProjectionMode mode) {
  switch (mode) {
    case ProjectionMode::kFullPrecision:
      return linear_forward(p.master, x);
    case ProjectionMode::kBinaryWeights: {
      Matrix y = p.binary.forward(x);
      add_bias(y, p.master.bias);
      return y;
    }
    case ProjectionMode::kBinary:
      return project_binary(p, binarize_rows(x));
  }
  fail(ErrorCode::kInvalidInput, "unknown projection mode");
}

Matrix project_binary(const Projection& p, const BinarizedRows& x) {
  require(x.bits.cols() == p.binary.in_features(), ErrorCode::kDimensionMismatch,
          "project: input width differs from fan-in");
  Matrix y = p.binary.forward_binary(x.bits, x.scales);
  add_bias(y, p.master.bias);
  return y;
}

void AttentionConfig::validate() const {
  require(heads >= 1, ErrorCode::kConfigError, "attention needs heads >= 1");
  require(head_dim >= 1, ErrorCode::kConfigError, "attention needs head_dim >= 1");
  if (!(beta > 0.0 && beta < 1.0))
    fail(ErrorCode::kInvalidBeta, "attention beta must lie in (0, 1)");
}

void softmax_rows(Matrix& scores) {
  for (std::size_t r = 0; r < scores.rows; ++r) {
    auto row = scores.row(r);
    float m = row[0];
    for (float v : row) m = std::max(m, v);
    double sum = 0.0;
    for (float& v : row) {
      v = std::exp(v - m);
      sum += v;
    }
    for (float& v : row) v = static_cast<float>(v / sum);
  }
}

Matrix fp_attention(const Matrix& q, const Matrix& k, const Matrix& v) {
  require(q.cols == k.cols, ErrorCode::kDimensionMismatch,
          "fp_attention: Q and K widths differ");
  require(k.rows == v.rows, ErrorCode::kDimensionMismatch,
          "fp_attention: K and V token counts differ");
  require(k.cols >= 1, ErrorCode::kDimensionMismatch, "fp_attention: d_k is zero");
  Matrix scores = matmul_nt(q, k);
  scale_in_place(scores, 1.0f / std::sqrt(static_cast<float>(k.cols)));
  softmax_rows(scores);
  return matmul_nt(scores, transpose(v));
}

Matrix binary_attention_forward(const Matrix& x, const AttentionWeights& w,
                                const AttentionConfig& cfg,
                                AttentionTrace* trace) {
  cfg.validate();
  const std::size_t d = cfg.head_dim;
  const std::size_t dim = cfg.heads * d;
  require(x.cols == w.query.master.weight.cols, ErrorCode::kDimensionMismatch,
          "attention: token width differs from projection fan-in");
  require(w.query.master.weight.rows == dim && w.key.master.weight.rows == dim &&
              w.value.master.weight.rows == dim,
          ErrorCode::kDimensionMismatch,
          "attention: projection width differs from heads * head_dim");
  require(x.rows >= 1, ErrorCode::kDimensionMismatch, "attention: no tokens");

  Matrix q, k, v;
  if (cfg.binarize_qkv) {
    const BinarizedRows xb = binarize_rows(x);
    q = project_binary(w.query, xb);
    k = project_binary(w.key, xb);
    v = project_binary(w.value, xb);
  } else {
    q = linear_forward(w.query.master, x);
    k = linear_forward(w.key.master, x);
    v = linear_forward(w.value.master, x);
  }

  const std::size_t t = x.rows;
  const float inv_sqrt = 1.0f / std::sqrt(static_cast<float>(d));
  Matrix concat(t, dim);
  for (std::size_t h = 0; h < cfg.heads; ++h) {
    const Matrix qh = slice_cols(q, h * d, d);
    const Matrix kh = slice_cols(k, h * d, d);
    const Matrix vh = slice_cols(v, h * d, d);

    if (!cfg.binarize_qkv && !cfg.binarize_attention) {
      write_cols(concat, fp_attention(qh, kh, vh), h * d);
      continue;
    }

    Matrix probs;
    if (cfg.binarize_qkv) {
      BinarizedRows qb = binarize_rows(qh);
      BinarizedRows kb = binarize_rows(kh);
      probs = gemm_pm(qb.bits, kb.bits, qb.scales, kb.scales);
      if (trace) {
        trace->score_ints.push_back(gemm_pm_int(qb.bits, kb.bits));
        trace->queries.push_back(std::move(qb));
        trace->keys.push_back(std::move(kb));
      }
    } else {
      probs = matmul_nt(qh, kh);
    }
    scale_in_place(probs, inv_sqrt);
    softmax_rows(probs);
    if (trace) trace->probabilities.push_back(probs);

    BitMatrix mask;
    if (cfg.binarize_attention) {
      std::vector<BitVector> rows;
      rows.reserve(t);
      const auto beta = static_cast<float>(cfg.beta);
      for (std::size_t r = 0; r < t; ++r)
        rows.push_back(pack(std::span<const float>(sab_binarize<float>(probs.row(r), beta)),
                            Encoding::kZeroOne));
      mask = BitMatrix::from_rows(std::move(rows), t, Encoding::kZeroOne);
      if (trace) trace->masks.push_back(mask);
    }

    Matrix out;
    if (cfg.binarize_qkv) {
      BinarizedRows vb = binarize_rows(transpose(vh));
      if (cfg.binarize_attention) {
        out = gemm_mask_pm(mask, vb.bits, vb.scales);
        if (trace) trace->value_ints.push_back(gemm_mask_pm_int(mask, vb.bits));
      } else {
        out = matmul_nt(probs, dequantize(vb));
      }
      if (trace) trace->values.push_back(std::move(vb));
    } else {
      out = matmul_nt(unpack_matrix(mask), transpose(vh));
    }
    write_cols(concat, out, h * d);
  }

  return project(w.proj, concat,
                 cfg.binarize_qkv ? ProjectionMode::kBinary
                                  : ProjectionMode::kFullPrecision);
}

}  // namespace bvt
