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

#include "bvt/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvt/backward.hpp"
#include "bvt/error.hpp"

namespace bvt {
namespace {

void center(std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

}  // namespace

AttentionSample LongTailedGenerator::next(std::size_t n, double concentration) {
  require(n >= 1, ErrorCode::kInvalidInput, "synthetic rows need n >= 1");
  if (!(concentration > 0.0))
    fail(ErrorCode::kInvalidInput, "concentration must be positive");
  std::gamma_distribution<double> gamma(concentration + 1.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  AttentionSample s;
  s.pre_softmax.resize(n);
  for (double& x : s.pre_softmax) {
    const double u = 1.0 - uniform(rng_);  // (0, 1]
    x = std::log(gamma(rng_)) + std::log(u) / concentration;
  }
  center(s.pre_softmax);
  s.attention = softmax(s.pre_softmax);
  return s;
}

std::vector<AttentionSample> long_tailed_samples(std::uint64_t seed,
                                                 std::size_t count,
                                                 std::size_t n,
                                                 double concentration) {
  LongTailedGenerator gen(seed);
  std::vector<AttentionSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen.next(n, concentration));
  return out;
}

AttentionSample sample_from_attention(std::vector<double> attention) {
  AttentionSample s;
  s.pre_softmax.resize(attention.size());
  for (std::size_t i = 0; i < attention.size(); ++i)
    s.pre_softmax[i] =
        std::log(std::max(attention[i], std::numeric_limits<double>::min()));
  if (!s.pre_softmax.empty()) center(s.pre_softmax);
  s.attention = std::move(attention);
  return s;
}

}  // namespace bvt
