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
#include <span>
#include <vector>

#include "bvt/matrix.hpp"

namespace bvt {

// How a stored bit maps to a value.
//   kPlusMinus: 1 -> +1, 0 -> -1   (Sign codomain)
//   kZeroOne:   1 ->  1, 0 ->  0   (Bool codomain)
enum class Encoding : std::uint8_t { kPlusMinus = 0, kZeroOne = 1 };

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

// Bit-packed binary vector. Bits are LSB-first inside 64-bit words and every
// bit at a position >= size() is zero, so whole-word popcounts need no mask.
class BitVector {
 public:
  BitVector() = default;
  BitVector(std::size_t len, Encoding encoding);

  // Takes ownership of words. Throws kInvalidInput when the word count or the
  // padding bits are not canonical.
  static BitVector from_words(std::vector<std::uint64_t> words, std::size_t len,
                              Encoding encoding);

  std::size_t size() const noexcept { return len_; }
  Encoding encoding() const noexcept { return encoding_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool bit(std::size_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }
  void set_bit(std::size_t i, bool value);

  // Value of element i under the encoding: -1/+1 or 0/1.
  int value(std::size_t i) const;

  std::size_t popcount() const noexcept;

  bool operator==(const BitVector&) const = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t len_ = 0;
  Encoding encoding_ = Encoding::kPlusMinus;
};

// Row-major bit matrix; every row is a canonical BitVector of length cols.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols, Encoding encoding);

  static BitMatrix from_rows(std::vector<BitVector> rows, std::size_t cols,
                             Encoding encoding);

  std::size_t rows() const noexcept { return data_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  Encoding encoding() const noexcept { return encoding_; }

  const BitVector& row(std::size_t r) const { return data_[r]; }
  BitVector& row(std::size_t r) { return data_[r]; }

  bool operator==(const BitMatrix&) const = default;

 private:
  std::vector<BitVector> data_;
  std::size_t cols_ = 0;
  Encoding encoding_ = Encoding::kPlusMinus;
};

// values must lie in the encoding's codomain, else kInvalidBinaryValue.
template <class T>
BitVector pack(std::span<const T> values, Encoding encoding);

template <class T>
BitVector pack(const std::vector<T>& values, Encoding encoding) {
  return pack(std::span<const T>(values), encoding);
}

std::vector<double> unpack(const BitVector& v);

// Packs a dense matrix row by row.
BitMatrix pack_matrix(const Matrix& m, Encoding encoding);
Matrix unpack_matrix(const BitMatrix& m);

BitVector complement(const BitVector& v);

// +-1 inner product: n - 2 * popcount(a ^ b).
std::int32_t dot_pm(const BitVector& a, const BitVector& b);

// sum of v_i over mask_i == 1: 2 * popcount(mask & v) - popcount(mask).
std::int32_t dot_mask_pm(const BitVector& mask, const BitVector& v);

// Integer stage of gemm_pm: out[i][j] = dot_pm(A.row(i), B.row(j)).
std::vector<std::int32_t> gemm_pm_int(const BitMatrix& a, const BitMatrix& b);

// out[i][j] = row_scales[i] * col_scales[j] * dot_pm(A.row(i), B.row(j)).
// B holds the right operand transposed (B.rows() output columns).
Matrix gemm_pm(const BitMatrix& a, const BitMatrix& b,
               std::span<const float> row_scales,
               std::span<const float> col_scales);

// Integer stage of gemm_mask_pm: out[i][j] = dot_mask_pm(A.row(i), V.row(j)).
std::vector<std::int32_t> gemm_mask_pm_int(const BitMatrix& a,
                                           const BitMatrix& v);

// out[i][j] = v_scales[j] * dot_mask_pm(A.row(i), V.row(j)), with V stored
// transposed (V.rows() output columns, V.cols() == A.cols()).
Matrix gemm_mask_pm(const BitMatrix& a, const BitMatrix& v,
                    std::span<const float> v_scales);

}  // namespace bvt
