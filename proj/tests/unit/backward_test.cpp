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

#include "bvt/backward.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace bvt {
namespace {

using V = std::vector<double>;

V random_vec(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  V v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

TEST(SteSignGrad, ClipsOutsideUnitInterval) {
  EXPECT_EQ(ste_sign_grad(V{0.5, 2.0}, V{3, 3}), (V{3, 0}));
  EXPECT_EQ(ste_sign_grad(V{-0.2, 0.9}, V{1, -2}), (V{1, -2}));
  EXPECT_EQ(ste_sign_grad(V{1.0, -1.0, 1.0000001}, V{4, 5, 6}), (V{4, 5, 0}));
  EXPECT_BVT_ERROR(ste_sign_grad(V{1}, V{1, 2}), ErrorCode::kDimensionMismatch);
}

TEST(SteSignGrad, IdempotentForFixedInput) {
  std::mt19937_64 rng(1);
  const V x = random_vec(rng, 100, 1.5), g = random_vec(rng, 100);
  const V once = ste_sign_grad(x, g);
  EXPECT_EQ(ste_sign_grad(x, once), once);
}

TEST(SoftmaxVjp, HandExample) {
  const V r = softmax_vjp(V{0.5, 0.5}, V{1, 0});
  EXPECT_DOUBLE_EQ(r[0], 0.25);
  EXPECT_DOUBLE_EQ(r[1], -0.25);
  EXPECT_BVT_ERROR(softmax_vjp(V{0.5, 0.5}, V{1}), ErrorCode::kDimensionMismatch);
}

TEST(SoftmaxVjp, AnnihilatesConstantsAndSumsToZero) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const V s = softmax(random_vec(rng, 32, 2.0));
    const V g = random_vec(rng, 32);
    V shifted = g;
    for (double& v : shifted) v += 3.25;
    const V a = softmax_vjp(s, g), b = softmax_vjp(s, shifted);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
    EXPECT_NEAR(std::accumulate(a.begin(), a.end(), 0.0), 0.0, 1e-15);
  }
}

TEST(SoftmaxVjp, MatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  const VectorFunction f = [](std::span<const double> x) { return softmax(x); };
  for (int trial = 0; trial < 100; ++trial) {
    const V x = random_vec(rng, 32, 2.0), g = random_vec(rng, 32);
    const auto report = finite_diff_check(f, x, softmax_vjp(softmax(x), g), g, 1e-5);
    EXPECT_LT(report.max_rel_err, 1e-6);
    EXPECT_EQ(report.probe_count, 32u);
    EXPECT_EQ(report.step, 1e-5);
  }
}

TEST(SabBackward, EqualsSoftmaxVjp) {
  std::mt19937_64 rng(4);
  const V s = softmax(random_vec(rng, 16)), g = random_vec(rng, 16);
  EXPECT_EQ(sab_backward(s, g), softmax_vjp(s, g));
  EXPECT_EQ(sab_backward(s, V(16, 0.0)), V(16, 0.0));
}

TEST(SabVersusBibert, ConstantGradientSeparatesTheRules) {
  std::mt19937_64 rng(5);
  const V s = softmax(random_vec(rng, 24));
  const V g(24, -1.5);
  for (double r : sab_backward(s, g)) EXPECT_NEAR(r, 0.0, 1e-15);
  EXPECT_EQ(bibert_backward(g), g);
}

TEST(SabVersusBibert, DifferForNonConstantGradient) {
  std::mt19937_64 rng(6);
  const V s = softmax(random_vec(rng, 24)), g = random_vec(rng, 24);
  EXPECT_NE(sab_backward(s, g), bibert_backward(g));
  EXPECT_EQ(bibert_backward(V(3, 0.0)), V(3, 0.0));
}

TEST(FiniteDiffCheck, IdentityFunction) {
  std::mt19937_64 rng(7);
  const V x = random_vec(rng, 10), g = random_vec(rng, 10);
  const VectorFunction id = [](std::span<const double> v) { return V(v.begin(), v.end()); };
  const auto report = finite_diff_check(id, x, g, g, 1e-5);
  EXPECT_LT(report.max_abs_err, 1e-9);
  EXPECT_LT(report.max_rel_err, 1e-9);
}

TEST(FiniteDiffCheck, DetectsWrongGradient) {
  std::mt19937_64 rng(8);
  const VectorFunction f = [](std::span<const double> x) { return softmax(x); };
  const V x = random_vec(rng, 32), g = random_vec(rng, 32);
  V wrong = softmax_vjp(softmax(x), g);
  wrong[3] += 0.05;
  EXPECT_GT(finite_diff_check(f, x, wrong, g, 1e-5).max_rel_err, 1e-2);
  // The softmax-blind rule is also caught.
  EXPECT_GT(finite_diff_check(f, x, bibert_backward(g), g, 1e-5).max_rel_err, 1e-2);
}

TEST(FiniteDiffCheck, Preconditions) {
  const VectorFunction f = [](std::span<const double> x) { return softmax(x); };
  const VectorFunction bad = [](std::span<const double> x) { return V(x.size(), NAN); };
  const V x = {0.1, 0.2}, g = {1, 0};
  EXPECT_BVT_ERROR(finite_diff_check(f, x, g, g, 0.0), ErrorCode::kInvalidInput);
  EXPECT_BVT_ERROR(finite_diff_check(bad, x, g, g, 1e-5), ErrorCode::kNumericalFailure);
}

TEST(Softmax, StableForLargeInputs) {
  const V s = softmax(V{1000.0, 1000.0, -1000.0});
  EXPECT_DOUBLE_EQ(s[0], 0.5);
  EXPECT_DOUBLE_EQ(s[1], 0.5);
  EXPECT_EQ(s[2], 0.0);
}

}  // namespace
}  // namespace bvt
