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

#include "bvt/tensor.hpp"

#include "bvt/error.hpp"

namespace bvt {

std::uint64_t FloatTensor::element_count() const {
  std::uint64_t n = 1;
  for (std::uint64_t d : shape) n *= d;
  return n;
}

FloatTensor to_tensor(const Matrix& m) {
  return FloatTensor{{m.rows, m.cols}, m.data};
}

Matrix to_matrix(const FloatTensor& t) {
  require(t.shape.size() == 2, ErrorCode::kDimensionMismatch,
          "to_matrix: tensor is not rank 2");
  Matrix m(t.shape[0], t.shape[1]);
  require(m.data.size() == t.data.size(), ErrorCode::kDimensionMismatch,
          "to_matrix: data length differs from shape");
  m.data = t.data;
  return m;
}

}  // namespace bvt
