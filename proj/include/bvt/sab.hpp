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

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bvt/binarizer.hpp"
#include "bvt/error.hpp"

// Softmax-aware binarization of attention rows.
//
// A softmax attention row a (nonnegative, sums to one) is approximated by
// v * b with b in {0,1}^n. For fixed b the best scalar is v = (a . b) / |b|^2;
// for fixed v the best code is b = Bool(a - v / 2). coordinate_descent
// alternates the two updates starting from b = Sign(a); brute_force_oracle
// enumerates every code. At inference time the threshold is approximated as
// beta * max(a) and the scalar v is dropped.
namespace bvt {

inline constexpr int kDefaultSabIterations = 5;
inline constexpr double kDefaultBeta = 0.25;

struct SabSolution {
  double v = 0.0;
  double threshold = 0.0;
  std::vector<std::uint8_t> b;
  double error = 0.0;  // |v * b - a|^2
  int iterations = 0;
  // error of (v, b) after each executed iteration; nonincreasing
  std::vector<double> trace;

  bool operator==(const SabSolution&) const = default;
};

struct BetaFit {
  double beta = 0.0;
  std::size_t samples = 0;
  double residual = 0.0;  // mean squared residual of T* - beta * max
};

// Throws kInvalidInput unless a is a softmax row: finite, >= 0, and summing
// to one within tol.
void validate_attention(std::span<const double> a, double tol = 1e-6);

// Requires finite nonnegative entries (sum-to-one is not enforced here) and
// iterations >= 1. All-zero rows throw kDegenerateInput. Stops early when b
// reaches a fixed point.
SabSolution coordinate_descent(std::span<const double> a,
                               int iterations = kDefaultSabIterations);

inline constexpr std::size_t kBruteForceMaxLength = 20;

// Global minimiser of |v b - a|^2 over all nonzero codes. Ties keep the first
// code in enumeration order (bit i of the counter is b_i). n > 20 throws
// kTooLarge.
SabSolution brute_force_oracle(std::span<const double> a);

// beta * max(a). Requires beta > 0 (kInvalidBeta) and a nonempty.
template <std::floating_point T>
T approx_threshold(std::span<const T> a, T beta) {
  if (!(beta > T(0))) fail(ErrorCode::kInvalidBeta, "beta must be positive");
  require(!a.empty(), ErrorCode::kInvalidInput, "approx_threshold: empty row");
  return beta * *std::max_element(a.begin(), a.end());
}

// Bool(a - beta * max(a)). The argmax always survives, so beta must be < 1.
template <std::floating_point T>
std::vector<T> sab_binarize(std::span<const T> a, T beta) {
  if (!(beta > T(0) && beta < T(1)))
    fail(ErrorCode::kInvalidBeta, "sab_binarize: beta must lie in (0, 1)");
  return bool_binarize(a, approx_threshold(a, beta));
}

// |a_q - a|^2.
double quant_error(std::span<const double> a_q, std::span<const double> a);

// Best scalar for a fixed code: (a . b) / |b|^2, or 0 for an empty code.
double optimal_scale(std::span<const double> a, std::span<const double> b);

// Runs coordinate_descent on every sample and regresses T* on max(a) through
// the origin: beta = sum(T* m) / sum(m^2).
BetaFit fit_beta(std::span<const std::vector<double>> samples,
                 int iterations = kDefaultSabIterations);

}  // namespace bvt
