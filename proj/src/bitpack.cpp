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

#include "bvt/bitpack.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "bvt/error.hpp"

namespace bvt {
namespace {

std::uint64_t tail_mask(std::size_t len) {
  const std::size_t rem = len % kWordBits;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

void check_pair(const BitVector& a, const BitVector& b, Encoding ea,
                Encoding eb) {
  if (a.size() != b.size())
    fail(ErrorCode::kDimensionMismatch,
         "bit vectors have lengths " + std::to_string(a.size()) + " and " +
             std::to_string(b.size()));
  if (a.encoding() != ea || b.encoding() != eb)
    fail(ErrorCode::kEncodingMismatch, "unexpected operand encoding");
}

}  // namespace

BitVector::BitVector(std::size_t len, Encoding encoding)
    : words_(words_for(len), 0), len_(len), encoding_(encoding) {}

BitVector BitVector::from_words(std::vector<std::uint64_t> words,
                                std::size_t len, Encoding encoding) {
  if (words.size() != words_for(len))
    fail(ErrorCode::kInvalidInput, "word count does not match bit length");
  if (!words.empty() && (words.back() & ~tail_mask(len)) != 0)
    fail(ErrorCode::kInvalidInput, "padding bits are not zero");
  BitVector v;
  v.words_ = std::move(words);
  v.len_ = len;
  v.encoding_ = encoding;
  return v;
}

void BitVector::set_bit(std::size_t i, bool value) {
  const std::uint64_t m = std::uint64_t{1} << (i % kWordBits);
  if (value)
    words_[i / kWordBits] |= m;
  else
    words_[i / kWordBits] &= ~m;
}

int BitVector::value(std::size_t i) const {
  const bool b = bit(i);
  if (encoding_ == Encoding::kPlusMinus) return b ? 1 : -1;
  return b ? 1 : 0;
}

std::size_t BitVector::popcount() const noexcept {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols, Encoding encoding)
    : data_(rows, BitVector(cols, encoding)), cols_(cols), encoding_(encoding) {}

BitMatrix BitMatrix::from_rows(std::vector<BitVector> rows, std::size_t cols,
                               Encoding encoding) {
  for (const auto& r : rows) {
    if (r.size() != cols)
      fail(ErrorCode::kDimensionMismatch, "row length differs from cols");
    if (r.encoding() != encoding)
      fail(ErrorCode::kEncodingMismatch, "row encoding differs from matrix");
  }
  BitMatrix m;
  m.data_ = std::move(rows);
  m.cols_ = cols;
  m.encoding_ = encoding;
  return m;
}

template <class T>
BitVector pack(std::span<const T> values, Encoding encoding) {
  BitVector out(values.size(), encoding);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const T x = values[i];
    bool bit = false;
    if (encoding == Encoding::kPlusMinus) {
      if (x == T(1))
        bit = true;
      else if (x != T(-1))
        fail(ErrorCode::kInvalidBinaryValue,
             "element " + std::to_string(i) + " is not -1/+1");
    } else {
      if (x == T(1))
        bit = true;
      else if (x != T(0))
        fail(ErrorCode::kInvalidBinaryValue,
             "element " + std::to_string(i) + " is not 0/1");
    }
    if (bit) out.set_bit(i, true);
  }
  return out;
}

template BitVector pack<float>(std::span<const float>, Encoding);
template BitVector pack<double>(std::span<const double>, Encoding);
template BitVector pack<std::int8_t>(std::span<const std::int8_t>, Encoding);
template BitVector pack<std::uint8_t>(std::span<const std::uint8_t>, Encoding);
template BitVector pack<int>(std::span<const int>, Encoding);

std::vector<double> unpack(const BitVector& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v.value(i);
  return out;
}

BitMatrix pack_matrix(const Matrix& m, Encoding encoding) {
  std::vector<BitVector> rows;
  rows.reserve(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) rows.push_back(pack(m.row(r), encoding));
  return BitMatrix::from_rows(std::move(rows), m.cols, encoding);
}

Matrix unpack_matrix(const BitMatrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      out(r, c) = static_cast<float>(m.row(r).value(c));
  return out;
}

BitVector complement(const BitVector& v) {
  std::vector<std::uint64_t> words(v.words().begin(), v.words().end());
  for (auto& w : words) w = ~w;
  if (!words.empty()) words.back() &= tail_mask(v.size());
  return BitVector::from_words(std::move(words), v.size(), v.encoding());
}

std::int32_t dot_pm(const BitVector& a, const BitVector& b) {
  check_pair(a, b, Encoding::kPlusMinus, Encoding::kPlusMinus);
  const auto wa = a.words();
  const auto wb = b.words();
  std::int32_t diff = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) diff += std::popcount(wa[i] ^ wb[i]);
  return static_cast<std::int32_t>(a.size()) - 2 * diff;
}

std::int32_t dot_mask_pm(const BitVector& mask, const BitVector& v) {
  check_pair(mask, v, Encoding::kZeroOne, Encoding::kPlusMinus);
  const auto wm = mask.words();
  const auto wv = v.words();
  std::int32_t both = 0;
  std::int32_t active = 0;
  for (std::size_t i = 0; i < wm.size(); ++i) {
    both += std::popcount(wm[i] & wv[i]);
    active += std::popcount(wm[i]);
  }
  return 2 * both - active;
}

namespace {

void check_gemm(const BitMatrix& a, const BitMatrix& b, Encoding ea,
                Encoding eb) {
  if (a.cols() != b.cols())
    fail(ErrorCode::kDimensionMismatch,
         "gemm operands have inner dimensions " + std::to_string(a.cols()) +
             " and " + std::to_string(b.cols()));
  if (a.encoding() != ea || b.encoding() != eb)
    fail(ErrorCode::kEncodingMismatch, "unexpected gemm operand encoding");
}

// Applies kernel to every (A row, B row) pair of word spans.
template <class RowKernel>
std::vector<std::int32_t> gemm_int(const BitMatrix& a, const BitMatrix& b,
                                   RowKernel kernel) {
  const std::size_t m = a.rows();
  const std::size_t n = b.rows();
  std::vector<std::int32_t> out(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ai = a.row(i).words();
    for (std::size_t j = 0; j < n; ++j)
      out[i * n + j] = kernel(ai, b.row(j).words());
  }
  return out;
}

}  // namespace

std::vector<std::int32_t> gemm_pm_int(const BitMatrix& a, const BitMatrix& b) {
  check_gemm(a, b, Encoding::kPlusMinus, Encoding::kPlusMinus);
  const auto k = static_cast<std::int32_t>(a.cols());
  return gemm_int(a, b, [k](std::span<const std::uint64_t> x,
                            std::span<const std::uint64_t> y) {
    std::int32_t diff = 0;
    for (std::size_t w = 0; w < x.size(); ++w) diff += std::popcount(x[w] ^ y[w]);
    return k - 2 * diff;
  });
}

Matrix gemm_pm(const BitMatrix& a, const BitMatrix& b,
               std::span<const float> row_scales,
               std::span<const float> col_scales) {
  require(row_scales.size() == a.rows(), ErrorCode::kDimensionMismatch,
          "gemm_pm: row_scales length differs from A.rows");
  require(col_scales.size() == b.rows(), ErrorCode::kDimensionMismatch,
          "gemm_pm: col_scales length differs from B.rows");
  const auto ints = gemm_pm_int(a, b);
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < out.rows; ++i)
    for (std::size_t j = 0; j < out.cols; ++j)
      out(i, j) = row_scales[i] * col_scales[j] *
                  static_cast<float>(ints[i * out.cols + j]);
  return out;
}

std::vector<std::int32_t> gemm_mask_pm_int(const BitMatrix& a,
                                           const BitMatrix& v) {
  check_gemm(a, v, Encoding::kZeroOne, Encoding::kPlusMinus);
  return gemm_int(a, v, [](std::span<const std::uint64_t> mask,
                           std::span<const std::uint64_t> y) {
    std::int32_t both = 0;
    std::int32_t active = 0;
    for (std::size_t w = 0; w < mask.size(); ++w) {
      both += std::popcount(mask[w] & y[w]);
      active += std::popcount(mask[w]);
    }
    return 2 * both - active;
  });
}

Matrix gemm_mask_pm(const BitMatrix& a, const BitMatrix& v,
                    std::span<const float> v_scales) {
  require(v_scales.size() == v.rows(), ErrorCode::kDimensionMismatch,
          "gemm_mask_pm: v_scales length differs from V.rows");
  const auto ints = gemm_mask_pm_int(a, v);
  Matrix out(a.rows(), v.rows());
  for (std::size_t i = 0; i < out.rows; ++i)
    for (std::size_t j = 0; j < out.cols; ++j)
      out(i, j) = v_scales[j] * static_cast<float>(ints[i * out.cols + j]);
  return out;
}

}  // namespace bvt
