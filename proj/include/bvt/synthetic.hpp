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

#include <cstdint>
#include <random>
#include <vector>

namespace bvt {

// One synthetic attention row together with the pre-softmax scores that
// produce it.
struct AttentionSample {
  std::vector<double> pre_softmax;
  std::vector<double> attention;
};

// Long-tailed attention rows drawn from a symmetric Dirichlet. Each row is the
// softmax of log-Gamma(concentration) draws, so attention is exactly
// Dirichlet-distributed; pre_softmax is that log-Gamma vector centred to zero
// mean. Log-Gamma is sampled as log G(c + 1) + log(U) / c to stay finite for
// small c. Deterministic for a given seed on one standard library.
class LongTailedGenerator {
 public:
  explicit LongTailedGenerator(std::uint64_t seed) : rng_(seed) {}

  AttentionSample next(std::size_t n, double concentration);

 private:
  std::mt19937_64 rng_;
};

std::vector<AttentionSample> long_tailed_samples(std::uint64_t seed,
                                                 std::size_t count,
                                                 std::size_t n,
                                                 double concentration);

// Pre-softmax stand-in for rows that only exist as softmax output (e.g. dumps
// read from disk): centred log of the row, with zeros clamped to the smallest
// positive double.
AttentionSample sample_from_attention(std::vector<double> attention);

}  // namespace bvt
