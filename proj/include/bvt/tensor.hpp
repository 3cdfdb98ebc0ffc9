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
#include <string>
#include <variant>
#include <vector>

#include "bvt/bitpack.hpp"
#include "bvt/matrix.hpp"

namespace bvt {

// Dense row-major float tensor of arbitrary rank.
struct FloatTensor {
  std::vector<std::uint64_t> shape;
  std::vector<float> data;

  std::uint64_t element_count() const;
  bool operator==(const FloatTensor&) const = default;
};

FloatTensor to_tensor(const Matrix& m);
// Rank-2 tensor to matrix; kDimensionMismatch otherwise.
Matrix to_matrix(const FloatTensor& t);

// Everything the tensor file format can hold.
using Tensor = std::variant<FloatTensor, BitVector, BitMatrix>;

struct NamedTensor {
  std::string name;
  FloatTensor tensor;
};

}  // namespace bvt
