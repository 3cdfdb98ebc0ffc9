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
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace bvt::cli {

// Runs the command line (without the program name). Results go to out,
// diagnostics to err. Returns 0 iff every internal check passed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchResult {
  std::size_t m = 0, n = 0, k = 0, reps = 0;
  bool correct = false;       // packed integer GEMM matched the float GEMM
  double packed_seconds = 0;  // best of reps
  double float_seconds = 0;   // best of reps
  double speedup = 0;
};

// Times gemm_pm against the naive float GEMM on the same random +-1
// operands (m x k times k x n), single-threaded, after a correctness gate.
BenchResult run_bench(std::size_t m, std::size_t n, std::size_t k, std::size_t reps,
                      std::uint64_t seed);

}  // namespace bvt::cli
