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

#include "bvt/sab.hpp"

#include <cmath>
#include <string>

namespace bvt {
namespace {

void require_nonnegative(std::span<const double> a, const char* who) {
  if (a.empty()) fail(ErrorCode::kInvalidInput, std::string(who) + ": empty row");
  for (double x : a)
    if (!std::isfinite(x) || x < 0.0)
      fail(ErrorCode::kInvalidInput,
           std::string(who) + ": entries must be finite and nonnegative");
}

double pair_error(std::span<const double> a, double v,
                  const std::vector<std::uint8_t>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = (b[i] ? v : 0.0) - a[i];
    e += d * d;
  }
  return e;
}

double code_scale(std::span<const double> a, const std::vector<std::uint8_t>& b) {
  double dot = 0.0;
  std::size_t ones = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i]) {
      dot += a[i];
      ++ones;
    }
  return ones == 0 ? 0.0 : dot / static_cast<double>(ones);
}

}  // namespace

void validate_attention(std::span<const double> a, double tol) {
  require_nonnegative(a, "validate_attention");
  double sum = 0.0;
  for (double x : a) sum += x;
  if (std::fabs(sum - 1.0) > tol)
    fail(ErrorCode::kInvalidInput,
         "attention row sums to " + std::to_string(sum) + ", expected 1");
}

SabSolution coordinate_descent(std::span<const double> a, int iterations) {
  require_nonnegative(a, "coordinate_descent");
  require(iterations >= 1, ErrorCode::kInvalidInput,
          "coordinate_descent: iterations must be >= 1");
  if (*std::max_element(a.begin(), a.end()) == 0.0)
    fail(ErrorCode::kDegenerateInput, "coordinate_descent: all-zero row");

  SabSolution s;
  // Sign(a) on a nonnegative row is all ones.
  s.b.assign(a.size(), 1);
  for (int t = 1; t <= iterations; ++t) {
    s.v = code_scale(a, s.b);
    s.threshold = s.v / 2.0;
    std::vector<std::uint8_t> next(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) next[i] = a[i] - s.threshold >= 0.0;
    const bool fixed = next == s.b;
    s.b = std::move(next);
    s.iterations = t;
    s.trace.push_back(pair_error(a, s.v, s.b));
    if (fixed) break;
  }
  s.error = s.trace.back();
  return s;
}

SabSolution brute_force_oracle(std::span<const double> a) {
  require_nonnegative(a, "brute_force_oracle");
  if (a.size() > kBruteForceMaxLength)
    fail(ErrorCode::kTooLarge, "brute_force_oracle: n = " +
                                   std::to_string(a.size()) + " exceeds 20");
  const std::size_t n = a.size();

  // For a code b with k ones and s = a . b the residual is |a|^2 - s^2 / k,
  // so the best code maximises s^2 / k.
  std::uint32_t best_code = 0;
  double best_gain = -1.0;
  for (std::uint32_t code = 1; code < (std::uint32_t{1} << n); ++code) {
    double s = 0.0;
    int k = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((code >> i) & 1u) {
        s += a[i];
        ++k;
      }
    const double gain = s * s / k;
    if (gain > best_gain) {
      best_gain = gain;
      best_code = code;
    }
  }

  SabSolution sol;
  sol.b.resize(n);
  for (std::size_t i = 0; i < n; ++i) sol.b[i] = (best_code >> i) & 1u;
  sol.v = code_scale(a, sol.b);
  sol.threshold = sol.v / 2.0;
  sol.error = pair_error(a, sol.v, sol.b);
  sol.iterations = 0;
  return sol;
}

double quant_error(std::span<const double> a_q, std::span<const double> a) {
  require(a_q.size() == a.size(), ErrorCode::kDimensionMismatch,
          "quant_error: length mismatch");
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a_q[i] - a[i];
    e += d * d;
  }
  return e;
}

double optimal_scale(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::kDimensionMismatch,
          "optimal_scale: length mismatch");
  double dot = 0.0;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    norm2 += b[i] * b[i];
  }
  return norm2 == 0.0 ? 0.0 : dot / norm2;
}

BetaFit fit_beta(std::span<const std::vector<double>> samples, int iterations) {
  require(!samples.empty(), ErrorCode::kInvalidInput, "fit_beta: no samples");
  std::vector<double> t_opt(samples.size());
  std::vector<double> maxima(samples.size());
  double tm = 0.0;
  double mm = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& a = samples[s];
    require(!a.empty(), ErrorCode::kInvalidInput, "fit_beta: empty sample");
    maxima[s] = *std::max_element(a.begin(), a.end());
    t_opt[s] = coordinate_descent(a, iterations).threshold;
    tm += t_opt[s] * maxima[s];
    mm += maxima[s] * maxima[s];
  }
  if (mm == 0.0) fail(ErrorCode::kDegenerateInput, "fit_beta: all maxima are zero");

  BetaFit fit;
  fit.beta = tm / mm;
  fit.samples = samples.size();
  double r = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double d = t_opt[s] - fit.beta * maxima[s];
    r += d * d;
  }
  fit.residual = r / static_cast<double>(samples.size());
  return fit;
}

}  // namespace bvt
