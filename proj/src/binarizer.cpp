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

#include "bvt/binarizer.hpp"

namespace bvt {

BinaryLinear binarize_weights(const Matrix& w, ScaleMode mode) {
  require(w.rows > 0 && w.cols > 0, ErrorCode::kInvalidInput,
          "binarize_weights: empty weight matrix");
  BinarizedRows rows = binarize_rows(w);
  return BinaryLinear{std::move(rows.bits), std::move(rows.scales), mode};
}

BinarizedRows binarize_rows(const Matrix& x) {
  std::vector<BitVector> bits;
  std::vector<float> scales(x.rows);
  bits.reserve(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const auto row = x.row(r);
    bits.push_back(pack(std::span<const float>(sign_binarize(row)),
                        Encoding::kPlusMinus));
    scales[r] = row.empty() ? 0.0f : channel_scale(row);
  }
  return {BitMatrix::from_rows(std::move(bits), x.cols, Encoding::kPlusMinus),
          std::move(scales)};
}

Matrix dequantize(const BinarizedRows& rows) {
  Matrix out = unpack_matrix(rows.bits);
  for (std::size_t r = 0; r < out.rows; ++r)
    for (float& v : out.row(r)) v *= rows.scales[r];
  return out;
}

Matrix BinaryLinear::forward(const Matrix& x) const {
  require(x.cols == in_features(), ErrorCode::kDimensionMismatch,
          "BinaryLinear::forward: input width differs from fan-in");
  const std::size_t out_n = out_features();
  Matrix y(x.rows, out_n);
  for (std::size_t o = 0; o < out_n; ++o) {
    const BitVector& w = weight_bits.row(o);
    for (std::size_t t = 0; t < x.rows; ++t) {
      const float* xr = x.data.data() + t * x.cols;
      float acc = 0.0f;
      for (std::size_t i = 0; i < x.cols; ++i) acc += w.bit(i) ? xr[i] : -xr[i];
      y(t, o) = scales[o] * acc;
    }
  }
  return y;
}

Matrix BinaryLinear::forward_binary(const BitMatrix& x_bits,
                                    std::span<const float> x_scales) const {
  return gemm_pm(x_bits, weight_bits, x_scales, scales);
}

}  // namespace bvt
