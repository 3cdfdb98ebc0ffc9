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
#include <functional>
#include <span>
#include <vector>

namespace bvt {

// Clipped straight-through estimator for Sign: passes g_out where |x| <= 1.
std::vector<double> ste_sign_grad(std::span<const double> x,
                                  std::span<const double> g_out);

// Numerically stable softmax of one row.
std::vector<double> softmax(std::span<const double> logits);

// Vector-Jacobian product of softmax at output s: r_j = s_j (g_j - g . s).
std::vector<double> softmax_vjp(std::span<const double> s,
                                std::span<const double> g);

// Softmax-aware backward through the attention binarizer: the STE passes the
// gradient of the binary row straight to the softmax output (the threshold is
// treated as a constant), then the exact softmax Jacobian is applied.
std::vector<double> sab_backward(std::span<const double> s,
                                 std::span<const double> g_q);

// Baseline that ignores softmax: the gradient of the binary row is handed to
// the pre-softmax scores unchanged.
std::vector<double> bibert_backward(std::span<const double> g_q);

struct GradCheckReport {
  double max_abs_err = 0.0;
  // max_i |analytic_i - numeric_i| / max(|analytic|_inf, |numeric|_inf)
  double max_rel_err = 0.0;
  std::size_t probe_count = 0;
  double step = 0.0;
};

using VectorFunction =
    std::function<std::vector<double>(std::span<const double>)>;

// Central differences of g . f(x) along every coordinate of x, compared with
// analytic_vjp. Non-finite evaluations throw kNumericalFailure.
GradCheckReport finite_diff_check(const VectorFunction& f,
                                  std::span<const double> x,
                                  std::span<const double> analytic_vjp,
                                  std::span<const double> g, double step);

}  // namespace bvt
