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

#include <algorithm>
#include <cmath>
#include <string>

#include "bvt/error.hpp"

namespace bvt {
namespace {

void require_same(std::size_t a, std::size_t b, const char* who) {
  if (a != b) fail(ErrorCode::kDimensionMismatch, std::string(who) + ": length mismatch");
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<double> ste_sign_grad(std::span<const double> x,
                                  std::span<const double> g_out) {
  require_same(x.size(), g_out.size(), "ste_sign_grad");
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    g[i] = std::fabs(x[i]) <= 1.0 ? g_out[i] : 0.0;
  return g;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) return {};
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> softmax_vjp(std::span<const double> s,
                                std::span<const double> g) {
  require_same(s.size(), g.size(), "softmax_vjp");
  const double gs = dot(g, s);
  std::vector<double> r(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) r[j] = s[j] * (g[j] - gs);
  return r;
}

std::vector<double> sab_backward(std::span<const double> s,
                                 std::span<const double> g_q) {
  return softmax_vjp(s, g_q);
}

std::vector<double> bibert_backward(std::span<const double> g_q) {
  return {g_q.begin(), g_q.end()};
}

GradCheckReport finite_diff_check(const VectorFunction& f,
                                  std::span<const double> x,
                                  std::span<const double> analytic_vjp,
                                  std::span<const double> g, double step) {
  if (!(step > 0.0)) fail(ErrorCode::kInvalidInput, "finite_diff_check: step must be > 0");
  require_same(x.size(), analytic_vjp.size(), "finite_diff_check");

  auto objective = [&](std::span<const double> at) {
    const std::vector<double> y = f(at);
    require_same(y.size(), g.size(), "finite_diff_check");
    const double v = dot(g, y);
    if (!std::isfinite(v))
      fail(ErrorCode::kNumericalFailure, "finite_diff_check: non-finite evaluation");
    return v;
  };

  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> numeric(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + step;
    const double up = objective(probe);
    probe[i] = orig - step;
    const double down = objective(probe);
    probe[i] = orig;
    numeric[i] = (up - down) / (2.0 * step);
  }

  GradCheckReport report;
  report.step = step;
  report.probe_count = x.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(analytic_vjp[i]))
      fail(ErrorCode::kNumericalFailure, "finite_diff_check: non-finite analytic gradient");
    report.max_abs_err =
        std::max(report.max_abs_err, std::fabs(analytic_vjp[i] - numeric[i]));
    scale = std::max({scale, std::fabs(analytic_vjp[i]), std::fabs(numeric[i])});
  }
  report.max_rel_err = scale > 0.0 ? report.max_abs_err / scale : 0.0;
  return report;
}

}  // namespace bvt
