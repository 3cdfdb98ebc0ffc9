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

// Straightforward 64-bit full-precision ViT forward written independently of
// the library model code. Reads weights by name from the exported masters.

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bvt/model.hpp"
#include "bvt/tensor.hpp"

namespace bvt::test {

class ReferenceVit {
 public:
  using Mat = std::vector<std::vector<double>>;

  ReferenceVit(const ModelConfig& cfg, const std::vector<NamedTensor>& masters) : cfg_(cfg) {
    for (const auto& t : masters) w_[t.name] = std::vector<double>(t.tensor.data.begin(),
                                                                   t.tensor.data.end());
  }

  // One image, channels x H x W, row-major.
  std::vector<double> forward(const std::vector<double>& image) const {
    const std::size_t d = cfg_.embed_dim;
    const std::size_t p = cfg_.patch_size;
    const std::size_t s = cfg_.image_size;
    const std::size_t g = s / p;

    Mat x(g * g + 1, std::vector<double>(d));
    const auto& cls = w_.at("class_token");
    const auto& pos = w_.at("position_embed");
    for (std::size_t c = 0; c < d; ++c) x[0][c] = cls[c] + pos[c];
    for (std::size_t py = 0; py < g; ++py) {
      for (std::size_t px = 0; px < g; ++px) {
        std::vector<double> patch;
        for (std::size_t ch = 0; ch < cfg_.channels; ++ch)
          for (std::size_t dy = 0; dy < p; ++dy)
            for (std::size_t dx = 0; dx < p; ++dx)
              patch.push_back(image[(ch * s + py * p + dy) * s + px * p + dx]);
        const std::size_t tok = 1 + py * g + px;
        x[tok] = affine("patch_embed", patch);
        for (std::size_t c = 0; c < d; ++c) x[tok][c] += pos[tok * d + c];
      }
    }

    for (std::size_t b = 0; b < cfg_.depth; ++b) {
      const std::string pre = "blocks." + std::to_string(b) + ".";
      Mat h = x;
      for (auto& row : h) row = norm(pre + "norm1", row);
      const Mat a = attention(pre + "attn.", h);
      add(x, a);

      h = x;
      Mat m(h.size());
      for (std::size_t t = 0; t < h.size(); ++t) {
        auto hidden = affine(pre + "fc1", norm(pre + "norm2", h[t]));
        for (double& v : hidden) v = 0.5 * v * (1.0 + std::erf(v / std::sqrt(2.0)));
        m[t] = affine(pre + "fc2", hidden);
      }
      add(x, m);
    }
    return affine("head", norm("final_norm", x[0]));
  }

 private:
  std::vector<double> affine(const std::string& name, const std::vector<double>& in) const {
    const auto& w = w_.at(name + ".weight");
    const auto& b = w_.at(name + ".bias");
    std::vector<double> out(b.size());
    for (std::size_t o = 0; o < out.size(); ++o) {
      double acc = b[o];
      for (std::size_t i = 0; i < in.size(); ++i) acc += w[o * in.size() + i] * in[i];
      out[o] = acc;
    }
    return out;
  }

  std::vector<double> norm(const std::string& name, const std::vector<double>& in) const {
    double mean = 0, var = 0;
    for (double v : in) mean += v;
    mean /= in.size();
    for (double v : in) var += (v - mean) * (v - mean);
    var /= in.size();
    const auto& gamma = w_.at(name + ".gamma");
    const auto& beta = w_.at(name + ".beta");
    std::vector<double> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i)
      out[i] = (in[i] - mean) / std::sqrt(var + 1e-5) * gamma[i] + beta[i];
    return out;
  }

  Mat attention(const std::string& pre, const Mat& x) const {
    const std::size_t t = x.size();
    const std::size_t heads = cfg_.heads;
    const std::size_t hd = cfg_.embed_dim / heads;
    Mat q(t), k(t), v(t);
    for (std::size_t i = 0; i < t; ++i) {
      q[i] = affine(pre + "query", x[i]);
      k[i] = affine(pre + "key", x[i]);
      v[i] = affine(pre + "value", x[i]);
    }
    Mat concat(t, std::vector<double>(cfg_.embed_dim, 0.0));
    for (std::size_t h = 0; h < heads; ++h) {
      for (std::size_t i = 0; i < t; ++i) {
        std::vector<double> sc(t);
        double mx = -INFINITY;
        for (std::size_t j = 0; j < t; ++j) {
          double dot = 0;
          for (std::size_t c = 0; c < hd; ++c) dot += q[i][h * hd + c] * k[j][h * hd + c];
          sc[j] = dot / std::sqrt(static_cast<double>(hd));
          mx = std::max(mx, sc[j]);
        }
        double sum = 0;
        for (double& s : sc) sum += (s = std::exp(s - mx));
        for (std::size_t j = 0; j < t; ++j)
          for (std::size_t c = 0; c < hd; ++c)
            concat[i][h * hd + c] += sc[j] / sum * v[j][h * hd + c];
      }
    }
    Mat out(t);
    for (std::size_t i = 0; i < t; ++i) out[i] = affine(pre + "proj", concat[i]);
    return out;
  }

  static void add(Mat& x, const Mat& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x[i].size(); ++j) x[i][j] += y[i][j];
  }

  ModelConfig cfg_;
  std::map<std::string, std::vector<double>> w_;
};

}  // namespace bvt::test
