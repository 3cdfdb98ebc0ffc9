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

#include "bvt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvt/error.hpp"

namespace bvt {

std::string_view quant_method_name(QuantMethod m) {
  switch (m) {
    case QuantMethod::kBool: return "bool";
    case QuantMethod::kOptimal: return "cd";
    case QuantMethod::kApprox: return "approx";
    case QuantMethod::kApproxNoScale: return "approx-noscale";
    case QuantMethod::kLearnedThreshold: return "learned-T";
  }
  return "?";
}

std::optional<QuantMethod> parse_quant_method(std::string_view name) {
  for (QuantMethod m : kAllQuantMethods)
    if (quant_method_name(m) == name) return m;
  return std::nullopt;
}

double row_error(QuantMethod method, const AttentionSample& row, double beta,
                 int iterations) {
  const std::span<const double> a = row.attention;
  switch (method) {
    case QuantMethod::kBool:
      return quant_error(bool_binarize(std::span<const double>(row.pre_softmax)), a);
    case QuantMethod::kOptimal:
      return coordinate_descent(a, iterations).error;
    case QuantMethod::kApprox: {
      std::vector<double> b = sab_binarize(a, beta);
      const double v = optimal_scale(a, b);
      for (double& x : b) x *= v;
      return quant_error(b, a);
    }
    case QuantMethod::kApproxNoScale:
      return quant_error(sab_binarize(a, beta), a);
    case QuantMethod::kLearnedThreshold:
      break;
  }
  fail(ErrorCode::kInvalidInput, "row_error: learned-T needs a fitted threshold");
}

double fit_static_threshold(std::span<const AttentionSample> rows) {
  // Including element a in the code changes its error from a^2 to (1 - a)^2,
  // a gain of 1 - 2a. Scan thresholds from the top value down.
  std::vector<double> values;
  for (const auto& r : rows) values.insert(values.end(), r.attention.begin(), r.attention.end());
  require(!values.empty(), ErrorCode::kInvalidInput, "fit_static_threshold: no data");
  std::sort(values.begin(), values.end(), std::greater<>());

  double best = 0.0;
  double best_threshold = std::nextafter(values.front(), std::numeric_limits<double>::infinity());
  double running = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    running += 1.0 - 2.0 * values[i];
    const bool cut_here = i + 1 == values.size() || values[i + 1] != values[i];
    if (cut_here && running < best) {
      best = running;
      best_threshold = values[i];
    }
  }
  return best_threshold;
}

std::vector<MethodError> compare_methods(std::span<const AttentionSample> rows,
                                         double beta, int iterations,
                                         std::span<const QuantMethod> methods) {
  require(!rows.empty(), ErrorCode::kInvalidInput, "compare_methods: no rows");
  std::vector<MethodError> out;
  for (QuantMethod m : kAllQuantMethods) {
    if (std::find(methods.begin(), methods.end(), m) == methods.end()) continue;
    MethodError e{m, 0.0, 0, std::nullopt};
    if (m == QuantMethod::kLearnedThreshold) {
      require(rows.size() >= 2, ErrorCode::kInvalidInput,
              "learned-T needs at least two rows (calibration + evaluation)");
      const std::size_t calib = (rows.size() + 1) / 2;
      const double t = fit_static_threshold(rows.subspan(0, calib));
      double sum = 0.0;
      for (const auto& r : rows.subspan(calib))
        sum += quant_error(bool_binarize(std::span<const double>(r.attention), t), r.attention);
      e.samples = rows.size() - calib;
      e.mean_error = sum / static_cast<double>(e.samples);
      e.threshold = t;
    } else {
      double sum = 0.0;
      for (const auto& r : rows) sum += row_error(m, r, beta, iterations);
      e.samples = rows.size();
      e.mean_error = sum / static_cast<double>(rows.size());
    }
    out.push_back(e);
  }
  return out;
}

std::vector<BetaSweepPoint> sweep_beta(std::span<const AttentionSample> rows,
                                       std::span<const double> betas) {
  require(!rows.empty(), ErrorCode::kInvalidInput, "sweep_beta: no rows");
  std::vector<BetaSweepPoint> out;
  for (double beta : betas) {
    BetaSweepPoint p{beta};
    for (const auto& r : rows) {
      p.approx_error += row_error(QuantMethod::kApprox, r, beta, 1);
      const std::vector<double> b = sab_binarize(std::span<const double>(r.attention), beta);
      p.approx_noscale_error += quant_error(b, r.attention);
      double ones = 0.0;
      for (double x : b) ones += x;
      p.active_fraction += ones / static_cast<double>(b.size());
    }
    const double n = static_cast<double>(rows.size());
    p.approx_error /= n;
    p.approx_noscale_error /= n;
    p.active_fraction /= n;
    out.push_back(p);
  }
  return out;
}

ActivationFractions activation_fractions(std::span<const AttentionSample> rows,
                                         double beta) {
  ActivationFractions f;
  f.sab.reserve(rows.size());
  f.bool_pre_softmax.reserve(rows.size());
  auto fraction = [](const std::vector<double>& b) {
    double ones = 0.0;
    for (double x : b) ones += x;
    return ones / static_cast<double>(b.size());
  };
  for (const auto& r : rows) {
    f.sab.push_back(fraction(sab_binarize(std::span<const double>(r.attention), beta)));
    f.bool_pre_softmax.push_back(
        fraction(bool_binarize(std::span<const double>(r.pre_softmax))));
  }
  return f;
}

}  // namespace bvt
