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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace bvt {
namespace {

using V = std::vector<double>;

TEST(SignBinarize, ZeroMapsToPlusOne) {
  EXPECT_EQ(sign_binarize<double>(V{0.3, -0.7, 0.0}), (V{1, -1, 1}));
  EXPECT_EQ(sign_binarize<double>(V{-0.0}), (V{1}));
}

TEST(SignBinarize, AllNegative) {
  EXPECT_EQ(sign_binarize<double>(V{-1, -2, -1e-30}), (V{-1, -1, -1}));
}

TEST(SignBinarize, MatchesScalarDefinition) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  V x(500);
  for (auto& v : x) v = normal(rng);
  const V s = sign_binarize<double>(x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(s[i], x[i] >= 0 ? 1.0 : -1.0);
}

TEST(SignBinarize, RejectsNaN) {
  EXPECT_BVT_ERROR(sign_binarize<double>(V{1.0, NAN}), ErrorCode::kInvalidInput);
}

TEST(BoolBinarize, ThresholdExamples) {
  EXPECT_EQ(bool_binarize<double>(V{0.7, 0.2, 0.1}, 0.0), (V{1, 1, 1}));
  EXPECT_EQ(bool_binarize<double>(V{0.7, 0.2, 0.1}, 0.35), (V{1, 0, 0}));
  EXPECT_EQ(bool_binarize<double>(V{0.7, 0.2, 0.1}, 0.71), (V{0, 0, 0}));
  EXPECT_EQ(bool_binarize<double>(V{0.5}, 0.5), (V{1}));  // equality activates
  EXPECT_BVT_ERROR(bool_binarize<double>(V{NAN}, 0.0), ErrorCode::kInvalidInput);
}

TEST(ChannelScale, Examples) {
  EXPECT_DOUBLE_EQ(channel_scale<double>(V{0.5, -1.0, 1.5}), 1.0);
  EXPECT_EQ(channel_scale<double>(V{0, 0, 0}), 0.0);
  EXPECT_EQ(channel_scale<double>(V{-2.5}), 2.5);
  EXPECT_BVT_ERROR(channel_scale<double>(V{}), ErrorCode::kInvalidInput);
}

TEST(BinarizeWeights, HandExample) {
  Matrix w(1, 3);
  w.data = {0.5f, -1.0f, 1.5f};
  const BinaryLinear layer = binarize_weights(w);
  EXPECT_EQ(unpack(layer.weight_bits.row(0)), (V{1, -1, 1}));
  ASSERT_EQ(layer.scales.size(), 1u);
  EXPECT_EQ(layer.scales[0], 1.0f);
  EXPECT_EQ(layer.scale_mode, ScaleMode::kOrdinary);
}

TEST(BinarizeWeights, IdenticalRowsGiveIdenticalScales) {
  std::mt19937_64 rng(2);
  Matrix w = test::random_matrix(rng, 1, 17);
  Matrix two(2, 17);
  for (std::size_t c = 0; c < 17; ++c) two(0, c) = two(1, c) = w(0, c);
  const BinaryLinear layer = binarize_weights(two);
  EXPECT_EQ(layer.scales[0], layer.scales[1]);
  EXPECT_EQ(layer.weight_bits.row(0), layer.weight_bits.row(1));
}

// For fixed bits the l2 reconstruction error is a parabola in alpha; the
// closed-form minimiser must beat every point of a fine grid around it.
TEST(BinarizeWeights, OrdinaryScaleMinimisesReconstructionError) {
  std::mt19937_64 rng(3);
  const Matrix w = test::random_matrix(rng, 8, 33);
  const BinaryLinear layer = binarize_weights(w);
  for (std::size_t r = 0; r < w.rows; ++r) {
    auto err = [&](double alpha) {
      double e = 0.0;
      for (std::size_t c = 0; c < w.cols; ++c) {
        const double s = w(r, c) >= 0 ? 1.0 : -1.0;
        e += (w(r, c) - alpha * s) * (w(r, c) - alpha * s);
      }
      return e;
    };
    const double alpha = layer.scales[r];
    double mean_abs = 0.0;
    for (float v : w.row(r)) mean_abs += std::fabs(v);
    mean_abs /= w.cols;
    EXPECT_NEAR(alpha, mean_abs, 1e-6);
    for (int k = -100; k <= 100; ++k) {
      if (k == 0) continue;
      EXPECT_LE(err(alpha), err(alpha * (1.0 + k * 0.01)) + 1e-9);
    }
  }
}

TEST(BinarizeWeights, IdempotentOnBinaryInput) {
  Matrix w(2, 4);
  w.data = {0.5f, -0.5f, 0.5f, 0.5f, -2.0f, -2.0f, 2.0f, -2.0f};
  const BinaryLinear first = binarize_weights(w);
  EXPECT_EQ(first.scales, (std::vector<float>{0.5f, 2.0f}));
  const Matrix rebuilt = dequantize(BinarizedRows{first.weight_bits, first.scales});
  EXPECT_EQ(rebuilt, w);
  EXPECT_EQ(binarize_weights(rebuilt), first);
}

TEST(BinarizeWeights, RejectsEmpty) {
  EXPECT_BVT_ERROR(binarize_weights(Matrix(0, 3)), ErrorCode::kInvalidInput);
}

TEST(BinaryLinear, ParameterizedWithOrdinaryScalesMatchesOrdinaryExactly) {
  std::mt19937_64 rng(4);
  const Matrix w = test::random_matrix(rng, 6, 40);
  const Matrix x = test::random_matrix(rng, 5, 40);
  const BinaryLinear ord = binarize_weights(w, ScaleMode::kOrdinary);
  const BinaryLinear par = binarize_weights(w, ScaleMode::kParameterized);
  EXPECT_EQ(par.scales, ord.scales);
  EXPECT_EQ(par.forward(x), ord.forward(x));
  const BinarizedRows xb = binarize_rows(x);
  EXPECT_EQ(par.forward_binary(xb.bits, xb.scales), ord.forward_binary(xb.bits, xb.scales));
}

TEST(BinaryLinear, ForwardMatchesDequantizedProduct) {
  std::mt19937_64 rng(5);
  const Matrix w = test::random_matrix(rng, 7, 30);
  const Matrix x = test::random_matrix(rng, 4, 30);
  const BinaryLinear layer = binarize_weights(w);
  const Matrix y = layer.forward(x);
  for (std::size_t t = 0; t < x.rows; ++t)
    for (std::size_t o = 0; o < w.rows; ++o) {
      double acc = 0.0;
      for (std::size_t i = 0; i < x.cols; ++i) acc += (w(o, i) >= 0 ? 1.0 : -1.0) * x(t, i);
      EXPECT_NEAR(y(t, o), layer.scales[o] * acc, 1e-5);
    }
}

TEST(PwsScaleGradient, Examples) {
  EXPECT_EQ(pws_scale_gradient<double>(V{1, 2}, V{1, 1}, 1.0), 3.0);
  EXPECT_EQ(pws_scale_gradient<double>(V{1, 2}, V{1, -1}, 0.0), 0.0);
  EXPECT_BVT_ERROR(pws_scale_gradient<double>(V{1, 2}, V{1}, 1.0),
                   ErrorCode::kDimensionMismatch);
}

TEST(PwsScaleGradient, MatchesCentralDifference) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    V x(64), bits(64);
    for (auto& v : x) v = normal(rng);
    for (auto& v : bits) v = normal(rng) >= 0 ? 1.0 : -1.0;
    const double upstream = normal(rng);
    const double alpha = std::fabs(normal(rng));
    // Scalar loss L = upstream * out(alpha) with out = alpha * (bits . x).
    auto loss = [&](double a) {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += bits[i] * x[i];
      return upstream * a * dot;
    };
    const double h = 1e-5;
    const double numeric = (loss(alpha + h) - loss(alpha - h)) / (2 * h);
    const double analytic = pws_scale_gradient<double>(x, bits, upstream);
    EXPECT_LT(std::fabs(analytic - numeric), 1e-6 * std::max(1.0, std::fabs(analytic)));
  }
}

}  // namespace
}  // namespace bvt
