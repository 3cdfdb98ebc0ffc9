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

#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include "bvt/bitpack.hpp"
#include "bvt/error.hpp"
#include "bvt/matrix.hpp"

namespace bvt {

namespace detail {
template <std::floating_point T>
void require_no_nan(std::span<const T> x, const char* what) {
  for (T v : x)
    if (std::isnan(v)) fail(ErrorCode::kInvalidInput, what);
}
}  // namespace detail

// +1 where x >= 0, -1 otherwise; Sign(0) = +1.
template <std::floating_point T>
std::vector<T> sign_binarize(std::span<const T> x) {
  detail::require_no_nan(x, "sign_binarize: NaN input");
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] >= T(0) ? T(1) : T(-1);
  return out;
}

// 1 where x - threshold >= 0, else 0.
template <std::floating_point T>
std::vector<T> bool_binarize(std::span<const T> x, T threshold = T(0)) {
  detail::require_no_nan(x, "bool_binarize: NaN input");
  if (std::isnan(threshold)) fail(ErrorCode::kInvalidInput, "bool_binarize: NaN threshold");
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = x[i] - threshold >= T(0) ? T(1) : T(0);
  return out;
}

// Mean absolute value ||x||_1 / n. Accumulates in double.
template <std::floating_point T>
T channel_scale(std::span<const T> x) {
  require(!x.empty(), ErrorCode::kInvalidInput, "channel_scale: empty vector");
  double sum = 0.0;
  for (T v : x) sum += std::fabs(static_cast<double>(v));
  return static_cast<T>(sum / static_cast<double>(x.size()));
}

// d/d(alpha) of alpha * (bits . x), times upstream.
template <std::floating_point T>
T pws_scale_gradient(std::span<const T> x, std::span<const T> weight_bits_row,
                     T upstream) {
  require(x.size() == weight_bits_row.size(), ErrorCode::kDimensionMismatch,
          "pws_scale_gradient: length mismatch");
  T dot = T(0);
  for (std::size_t i = 0; i < x.size(); ++i) dot += weight_bits_row[i] * x[i];
  return upstream * dot;
}

enum class ScaleMode : std::uint8_t { kOrdinary, kParameterized };

// Binarized linear layer: sign bits of the weight rows plus one scale per
// output channel. In kParameterized mode the scales are trainable data;
// binarize_weights initialises them to the ordinary l1 means.
struct BinaryLinear {
  BitMatrix weight_bits;      // out x in, kPlusMinus
  std::vector<float> scales;  // one per output channel
  ScaleMode scale_mode = ScaleMode::kOrdinary;

  std::size_t in_features() const { return weight_bits.cols(); }
  std::size_t out_features() const { return weight_bits.rows(); }

  // y[t][o] = scales[o] * sum_i x[t][i] * sign(W[o][i]); full-precision input.
  Matrix forward(const Matrix& x) const;

  // Both operands binary: y[t][o] = x_scales[t] * scales[o] * dot_pm(...).
  Matrix forward_binary(const BitMatrix& x_bits,
                        std::span<const float> x_scales) const;

  bool operator==(const BinaryLinear&) const = default;
};

BinaryLinear binarize_weights(const Matrix& w,
                              ScaleMode mode = ScaleMode::kOrdinary);

// Sign bits plus per-row l1 scale of an activation matrix.
struct BinarizedRows {
  BitMatrix bits;
  std::vector<float> scales;
};

BinarizedRows binarize_rows(const Matrix& x);

// alpha * sign(x) per row, as a dense matrix.
Matrix dequantize(const BinarizedRows& rows);

}  // namespace bvt
