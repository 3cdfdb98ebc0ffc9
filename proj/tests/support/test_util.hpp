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
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "bvt/error.hpp"
#include "bvt/matrix.hpp"

// Expects stmt to throw bvt::Error carrying the given code.
#define EXPECT_BVT_ERROR(stmt, err_code)                                   \
  do {                                                                     \
    try {                                                                  \
      stmt;                                                                \
      ADD_FAILURE() << "expected " << bvt::error_code_name(err_code);      \
    } catch (const bvt::Error& e) {                                        \
      EXPECT_EQ(e.code(), err_code) << e.what();                           \
    }                                                                      \
  } while (0)

namespace bvt::test {

inline std::vector<double> random_pm(std::mt19937_64& rng, std::size_t n) {
  std::bernoulli_distribution coin(0.5);
  std::vector<double> v(n);
  for (auto& x : v) x = coin(rng) ? 1.0 : -1.0;
  return v;
}

inline std::vector<double> random_01(std::mt19937_64& rng, std::size_t n, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  std::vector<double> v(n);
  for (auto& x : v) x = coin(rng) ? 1.0 : 0.0;
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                            double stddev = 1.0) {
  std::normal_distribution<float> normal(0.0f, static_cast<float>(stddev));
  Matrix m(rows, cols);
  for (float& v : m.data) v = normal(rng);
  return m;
}

inline Matrix random_pm_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  std::bernoulli_distribution coin(0.5);
  for (float& v : m.data) v = coin(rng) ? 1.0f : -1.0f;
  return m;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("bvt_test_" + std::to_string(rd()) + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace bvt::test
