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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bvt/sab.hpp"
#include "bvt/synthetic.hpp"

// Dataset-level comparisons of attention binarizers: mean quantization error
// per method, beta sweeps and activation sparsity.
namespace bvt {

enum class QuantMethod {
  kBool,           // Bool(pre-softmax), compared with the softmax row
  kOptimal,        // coordinate descent, with scale v
  kApprox,         // threshold beta * max, with the optimal scale for that code
  kApproxNoScale,  // threshold beta * max, scale discarded
  kLearnedThreshold,  // one static threshold fitted offline, scale discarded
};

// Every method, in report order.
inline constexpr QuantMethod kAllQuantMethods[] = {
    QuantMethod::kBool, QuantMethod::kOptimal, QuantMethod::kApprox,
    QuantMethod::kApproxNoScale, QuantMethod::kLearnedThreshold};

std::string_view quant_method_name(QuantMethod m);
std::optional<QuantMethod> parse_quant_method(std::string_view name);

struct MethodError {
  QuantMethod method;
  double mean_error = 0.0;
  std::size_t samples = 0;
  // learned static threshold; only set for kLearnedThreshold
  std::optional<double> threshold;
};

// Per-row errors for one method (kLearnedThreshold excluded).
double row_error(QuantMethod method, const AttentionSample& row, double beta,
                 int iterations);

// Mean error per requested method over rows, reported in kAllQuantMethods
// order. kLearnedThreshold is fitted on the first ceil(count/2) rows and
// evaluated on the remaining rows.
std::vector<MethodError> compare_methods(std::span<const AttentionSample> rows,
                                         double beta, int iterations,
                                         std::span<const QuantMethod> methods);

// Static threshold minimising sum |Bool(a - T) - a|^2 over the rows.
double fit_static_threshold(std::span<const AttentionSample> rows);

struct BetaSweepPoint {
  double beta = 0.0;
  double approx_error = 0.0;           // with optimal scale
  double approx_noscale_error = 0.0;   // scale discarded
  double active_fraction = 0.0;
};

std::vector<BetaSweepPoint> sweep_beta(std::span<const AttentionSample> rows,
                                       std::span<const double> betas);

// Per-row fraction of ones under SAB(beta) and under Bool(pre-softmax).
struct ActivationFractions {
  std::vector<double> sab;
  std::vector<double> bool_pre_softmax;
};

ActivationFractions activation_fractions(std::span<const AttentionSample> rows,
                                         double beta);

}  // namespace bvt
