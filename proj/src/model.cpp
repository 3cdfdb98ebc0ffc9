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

#include "bvt/model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "bvt/error.hpp"

namespace bvt {
namespace {

constexpr float kLayerNormEps = 1e-5f;
constexpr double kInitStddev = 0.02;

enum class Init { kNormal, kOnes, kZeros };

struct TensorSlot {
  std::string name;
  std::vector<std::uint64_t> shape;
  Init init;
};

std::vector<TensorSlot> master_layout(const ModelConfig& c) {
  const std::uint64_t d = c.embed_dim;
  const std::uint64_t f = c.hidden_dim();
  std::vector<TensorSlot> slots = {
      {"patch_embed.weight", {d, c.patch_dim()}, Init::kNormal},
      {"patch_embed.bias", {d}, Init::kNormal},
      {"class_token", {d}, Init::kNormal},
      {"position_embed", {c.tokens(), d}, Init::kNormal},
  };
  for (std::size_t i = 0; i < c.depth; ++i) {
    const std::string p = "blocks." + std::to_string(i) + ".";
    slots.push_back({p + "norm1.gamma", {d}, Init::kOnes});
    slots.push_back({p + "norm1.beta", {d}, Init::kZeros});
    for (const char* name : {"query", "key", "value", "proj"}) {
      slots.push_back({p + "attn." + name + ".weight", {d, d}, Init::kNormal});
      slots.push_back({p + "attn." + name + ".bias", {d}, Init::kNormal});
    }
    slots.push_back({p + "norm2.gamma", {d}, Init::kOnes});
    slots.push_back({p + "norm2.beta", {d}, Init::kZeros});
    slots.push_back({p + "fc1.weight", {f, d}, Init::kNormal});
    slots.push_back({p + "fc1.bias", {f}, Init::kNormal});
    slots.push_back({p + "fc2.weight", {d, f}, Init::kNormal});
    slots.push_back({p + "fc2.bias", {d}, Init::kNormal});
  }
  slots.push_back({"final_norm.gamma", {d}, Init::kOnes});
  slots.push_back({"final_norm.beta", {d}, Init::kZeros});
  slots.push_back({"head.weight", {c.num_classes, d}, Init::kNormal});
  slots.push_back({"head.bias", {c.num_classes}, Init::kNormal});
  return slots;
}

void require_finite(const Matrix& m, const std::string& where) {
  for (float v : m.data)
    if (!std::isfinite(v))
      fail(ErrorCode::kNumericalFailure, "non-finite activation in " + where);
}

void add_in_place(Matrix& x, const Matrix& y) {
  for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += y.data[i];
}

// Cursor over imported tensors in layout order.
class TensorReader {
 public:
  explicit TensorReader(const std::vector<NamedTensor>& t) : tensors_(t) {}

  const FloatTensor& next() { return tensors_[pos_++].tensor; }
  std::vector<float> vec() { return next().data; }
  Matrix mat() { return to_matrix(next()); }
  Linear linear() {
    Linear l;
    l.weight = mat();
    l.bias = vec();
    return l;
  }
  LayerNormParams norm() {
    LayerNormParams n;
    n.gamma = vec();
    n.beta = vec();
    return n;
  }

 private:
  const std::vector<NamedTensor>& tensors_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view stage_name(BinarizationStage s) {
  switch (s) {
    case BinarizationStage::kFullPrecision: return "full_precision";
    case BinarizationStage::kAttentionOnly: return "attention_only";
    case BinarizationStage::kFull: return "full";
  }
  return "?";
}

std::optional<BinarizationStage> parse_stage(std::string_view name) {
  for (auto s : {BinarizationStage::kFullPrecision, BinarizationStage::kAttentionOnly,
                 BinarizationStage::kFull})
    if (stage_name(s) == name) return s;
  return std::nullopt;
}

std::string_view activation_bits_name(ActivationBits b) {
  return b == ActivationBits::kBinary ? "binary" : "fp";
}

std::optional<ActivationBits> parse_activation_bits(std::string_view name) {
  if (name == "fp") return ActivationBits::kFullPrecision;
  if (name == "binary") return ActivationBits::kBinary;
  return std::nullopt;
}

void ModelConfig::validate() const {
  require(patch_size >= 1 && image_size >= patch_size, ErrorCode::kConfigError,
          "image_size must be >= patch_size >= 1");
  require(image_size % patch_size == 0, ErrorCode::kConfigError,
          "image_size must be divisible by patch_size");
  require(heads >= 1 && embed_dim >= 1, ErrorCode::kConfigError,
          "embed_dim and heads must be >= 1");
  require(embed_dim % heads == 0, ErrorCode::kConfigError,
          "embed_dim must be divisible by heads");
  require(channels >= 1 && mlp_ratio >= 1 && num_classes >= 1,
          ErrorCode::kConfigError,
          "channels, mlp_ratio and num_classes must be >= 1");
  if (!(beta > 0.0 && beta < 1.0))
    fail(ErrorCode::kInvalidBeta, "beta must lie in (0, 1)");
}

std::uint64_t parameter_count(const ModelConfig& c) {
  const std::uint64_t d = c.embed_dim;
  const std::uint64_t f = c.hidden_dim();
  const std::uint64_t per_block = 2 * d            // norm1
                                  + 4 * (d * d + d)  // q, k, v, proj
                                  + 2 * d            // norm2
                                  + (d * f + f)      // fc1
                                  + (f * d + d);     // fc2
  return (c.patch_dim() * d + d) + d + c.tokens() * d + c.depth * per_block +
         2 * d + (c.num_classes * d + c.num_classes);
}

void layer_norm_rows(Matrix& x, const LayerNormParams& p) {
  for (std::size_t r = 0; r < x.rows; ++r) {
    auto row = x.row(r);
    double mean = 0.0;
    for (float v : row) mean += v;
    mean /= static_cast<double>(row.size());
    double var = 0.0;
    for (float v : row) var += (v - mean) * (v - mean);
    var /= static_cast<double>(row.size());
    const auto inv = static_cast<float>(1.0 / std::sqrt(var + kLayerNormEps));
    const auto mu = static_cast<float>(mean);
    for (std::size_t c = 0; c < row.size(); ++c)
      row[c] = (row[c] - mu) * inv * p.gamma[c] + p.beta[c];
  }
}

float gelu(float x) {
  return 0.5f * x * (1.0f + std::erf(x / std::sqrt(2.0f)));
}

AttentionConfig Model::attention_config() const {
  const bool bin = cfg_.stage != BinarizationStage::kFullPrecision;
  return AttentionConfig{cfg_.heads, cfg_.head_dim(), cfg_.beta, bin, bin};
}

void Model::set_stage(BinarizationStage stage) {
  cfg_.stage = stage;
  for (auto& b : blocks_) {
    for (Projection* p : {&b.attention.query, &b.attention.key, &b.attention.value,
                          &b.attention.proj, &b.fc1, &b.fc2})
      p->rebinarize();
  }
}

Model set_stage(Model model, BinarizationStage stage) {
  model.set_stage(stage);
  return model;
}

Matrix Model::embed(const FloatTensor& images, std::size_t index) const {
  const std::size_t p = cfg_.patch_size;
  const std::size_t side = cfg_.image_size;
  const std::size_t per_side = cfg_.patches_per_side();
  const float* img = images.data.data() + index * cfg_.channels * side * side;

  Matrix patches(cfg_.patch_count(), cfg_.patch_dim());
  for (std::size_t py = 0; py < per_side; ++py)
    for (std::size_t px = 0; px < per_side; ++px) {
      float* out = patches.row(py * per_side + px).data();
      for (std::size_t c = 0; c < cfg_.channels; ++c)
        for (std::size_t dy = 0; dy < p; ++dy)
          for (std::size_t dx = 0; dx < p; ++dx)
            *out++ = img[(c * side + py * p + dy) * side + px * p + dx];
    }
  const Matrix embedded = linear_forward(patch_embed_, patches);

  Matrix tokens(cfg_.tokens(), cfg_.embed_dim);
  for (std::size_t c = 0; c < cfg_.embed_dim; ++c)
    tokens(0, c) = class_token_[c] + position_embed_(0, c);
  for (std::size_t r = 0; r < embedded.rows; ++r)
    for (std::size_t c = 0; c < cfg_.embed_dim; ++c)
      tokens(r + 1, c) = embedded(r, c) + position_embed_(r + 1, c);
  return tokens;
}

Matrix Model::forward(const FloatTensor& images) const {
  const std::size_t side = cfg_.image_size;
  std::uint64_t batch = 0;
  if (images.shape.size() == 4) {
    batch = images.shape[0];
    require(images.shape[1] == cfg_.channels && images.shape[2] == side &&
                images.shape[3] == side,
            ErrorCode::kDimensionMismatch, "forward: image shape differs from config");
  } else if (images.shape.size() == 3) {
    batch = 1;
    require(images.shape[0] == cfg_.channels && images.shape[1] == side &&
                images.shape[2] == side,
            ErrorCode::kDimensionMismatch, "forward: image shape differs from config");
  } else {
    fail(ErrorCode::kDimensionMismatch, "forward: images must be rank 3 or 4");
  }
  require(images.data.size() == images.element_count(), ErrorCode::kDimensionMismatch,
          "forward: tensor data length differs from shape");

  const AttentionConfig attn_cfg = attention_config();
  ProjectionMode mlp_mode = ProjectionMode::kFullPrecision;
  if (cfg_.stage == BinarizationStage::kFull)
    mlp_mode = cfg_.mlp_activation_bits == ActivationBits::kBinary
                   ? ProjectionMode::kBinary
                   : ProjectionMode::kBinaryWeights;

  Matrix logits(batch, cfg_.num_classes);
  for (std::size_t n = 0; n < batch; ++n) {
    Matrix x = embed(images, n);
    require_finite(x, "embedding");
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const TransformerBlock& b = blocks_[i];
      Matrix h = x;
      layer_norm_rows(h, b.norm1);
      add_in_place(x, binary_attention_forward(h, b.attention, attn_cfg));

      h = x;
      layer_norm_rows(h, b.norm2);
      Matrix hidden = project(b.fc1, h, mlp_mode);
      for (float& v : hidden.data) v = gelu(v);
      add_in_place(x, project(b.fc2, hidden, mlp_mode));
      require_finite(x, "block " + std::to_string(i));
    }
    Matrix cls(1, cfg_.embed_dim);
    for (std::size_t c = 0; c < cfg_.embed_dim; ++c) cls(0, c) = x(0, c);
    layer_norm_rows(cls, final_norm_);
    const Matrix out = linear_forward(head_, cls);
    require_finite(out, "head");
    for (std::size_t k = 0; k < cfg_.num_classes; ++k) logits(n, k) = out(0, k);
  }
  return logits;
}

std::uint64_t Model::parameter_count() const {
  std::uint64_t n = 0;
  for (const auto& t : export_masters()) n += t.tensor.element_count();
  return n;
}

std::vector<NamedTensor> Model::export_masters() const {
  std::vector<NamedTensor> out;
  auto vec = [&](std::string name, const std::vector<float>& v) {
    out.push_back({std::move(name), FloatTensor{{v.size()}, v}});
  };
  auto mat = [&](std::string name, const Matrix& m) {
    out.push_back({std::move(name), to_tensor(m)});
  };
  auto linear = [&](const std::string& name, const Linear& l) {
    mat(name + ".weight", l.weight);
    vec(name + ".bias", l.bias);
  };
  auto norm = [&](const std::string& name, const LayerNormParams& p) {
    vec(name + ".gamma", p.gamma);
    vec(name + ".beta", p.beta);
  };

  linear("patch_embed", patch_embed_);
  vec("class_token", class_token_);
  mat("position_embed", position_embed_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const std::string p = "blocks." + std::to_string(i) + ".";
    const TransformerBlock& b = blocks_[i];
    norm(p + "norm1", b.norm1);
    linear(p + "attn.query", b.attention.query.master);
    linear(p + "attn.key", b.attention.key.master);
    linear(p + "attn.value", b.attention.value.master);
    linear(p + "attn.proj", b.attention.proj.master);
    norm(p + "norm2", b.norm2);
    linear(p + "fc1", b.fc1.master);
    linear(p + "fc2", b.fc2.master);
  }
  norm("final_norm", final_norm_);
  linear("head", head_);
  return out;
}

Model Model::import_masters(const ModelConfig& cfg,
                            const std::vector<NamedTensor>& tensors) {
  cfg.validate();
  const auto layout = master_layout(cfg);
  if (tensors.size() != layout.size())
    fail(ErrorCode::kConfigError, "expected " + std::to_string(layout.size()) +
                                      " tensors, got " + std::to_string(tensors.size()));
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (tensors[i].name != layout[i].name)
      fail(ErrorCode::kConfigError,
           "tensor " + std::to_string(i) + " is '" + tensors[i].name +
               "', expected '" + layout[i].name + "'");
    if (tensors[i].tensor.shape != layout[i].shape ||
        tensors[i].tensor.data.size() != tensors[i].tensor.element_count())
      fail(ErrorCode::kConfigError, "tensor '" + layout[i].name + "' has the wrong shape");
  }

  Model m;
  m.cfg_ = cfg;
  TensorReader r(tensors);
  m.patch_embed_ = r.linear();
  m.class_token_ = r.vec();
  m.position_embed_ = r.mat();
  for (std::size_t i = 0; i < cfg.depth; ++i) {
    TransformerBlock b;
    b.norm1 = r.norm();
    b.attention.query = Projection::from_master(r.linear());
    b.attention.key = Projection::from_master(r.linear());
    b.attention.value = Projection::from_master(r.linear());
    b.attention.proj = Projection::from_master(r.linear());
    b.norm2 = r.norm();
    b.fc1 = Projection::from_master(r.linear());
    b.fc2 = Projection::from_master(r.linear());
    m.blocks_.push_back(std::move(b));
  }
  m.final_norm_ = r.norm();
  m.head_ = r.linear();
  return m;
}

Model build_model(const ModelConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, kInitStddev);
  std::vector<NamedTensor> tensors;
  for (const TensorSlot& slot : master_layout(cfg)) {
    FloatTensor t{slot.shape, {}};
    t.data.resize(t.element_count());
    for (float& v : t.data) {
      switch (slot.init) {
        case Init::kNormal: v = static_cast<float>(normal(rng)); break;
        case Init::kOnes: v = 1.0f; break;
        case Init::kZeros: v = 0.0f; break;
      }
    }
    tensors.push_back({slot.name, std::move(t)});
  }
  return Model::import_masters(cfg, tensors);
}

}  // namespace bvt
