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
#include <fstream>
#include <random>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "bvt/io.hpp"
#include "reference_vit.hpp"
#include "test_util.hpp"

namespace bvt {
namespace {

ModelConfig small_config() {
  ModelConfig c;
  c.image_size = 8;
  c.patch_size = 4;
  c.embed_dim = 16;
  c.heads = 2;
  c.depth = 2;
  c.mlp_ratio = 2;
  c.num_classes = 5;
  return c;
}

FloatTensor random_images(const ModelConfig& c, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  FloatTensor t{{n, c.channels, c.image_size, c.image_size}, {}};
  t.data.resize(t.element_count());
  for (float& v : t.data) v = u(rng);
  return t;
}

Model with_stage(const ModelConfig& c, BinarizationStage s) {
  ModelConfig x = c;
  x.stage = s;
  return build_model(x);
}

TEST(ParameterCount, ReferenceConfigByHand) {
  // D = 64, F = 256, 64 patches of dim 48, 65 tokens, 10 classes:
  //   patch 48*64 + 64 = 3136, cls 64, pos 65*64 = 4160,
  //   block 128 + 4*(4096 + 64) + 128 + (16384 + 256) + (16384 + 64) = 49984,
  //   final norm 128, head 640 + 10 = 650.
  const ModelConfig c;
  EXPECT_EQ(parameter_count(c), 3136u + 64 + 4160 + 2 * 49984 + 128 + 650);
  EXPECT_EQ(parameter_count(c), 108106u);
  EXPECT_EQ(build_model(c).parameter_count(), 108106u);
}

TEST(ParameterCount, ClosedFormMatchesExportedTensors) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    ModelConfig c;
    c.patch_size = 1 + rng() % 4;
    c.image_size = c.patch_size * (1 + rng() % 4);
    c.heads = 1 + rng() % 3;
    c.embed_dim = c.heads * (1 + rng() % 6);
    c.depth = rng() % 3;
    c.mlp_ratio = 1 + rng() % 3;
    c.num_classes = 1 + rng() % 5;
    c.channels = 1 + rng() % 3;
    const Model m = build_model(c);
    EXPECT_EQ(m.parameter_count(), parameter_count(c));
  }
}

TEST(BuildModel, SameSeedSameBytes) {
  const ModelConfig c = small_config();
  EXPECT_EQ(serialize_model(build_model(c)), serialize_model(build_model(c)));
  ModelConfig other = c;
  other.seed = 43;
  EXPECT_NE(build_model(c).export_masters()[0].tensor,
            build_model(other).export_masters()[0].tensor);
}

TEST(BuildModel, InitialisationFollowsDocumentedScheme) {
  const Model m = build_model(small_config());
  for (const auto& t : m.export_masters()) {
    const bool gamma = t.name.ends_with(".gamma");
    const bool beta = t.name.ends_with(".beta");
    for (float v : t.tensor.data) {
      if (gamma) {
        ASSERT_EQ(v, 1.0f) << t.name;
      } else if (beta) {
        ASSERT_EQ(v, 0.0f) << t.name;
      } else {
        ASSERT_LT(std::fabs(v), 0.02f * 7) << t.name;
      }
    }
  }
  const auto masters = m.export_masters();
  EXPECT_EQ(masters.front().name, "patch_embed.weight");
  EXPECT_EQ(masters.back().name, "head.bias");
}

TEST(BuildModel, RejectsInvalidConfigs) {
  ModelConfig c = small_config();
  c.image_size = 10;
  EXPECT_BVT_ERROR(build_model(c), ErrorCode::kConfigError);
  c = small_config();
  c.embed_dim = 15;
  EXPECT_BVT_ERROR(build_model(c), ErrorCode::kConfigError);
  c = small_config();
  c.heads = 0;
  EXPECT_BVT_ERROR(build_model(c), ErrorCode::kConfigError);
  c = small_config();
  c.beta = 1.0;
  EXPECT_BVT_ERROR(build_model(c), ErrorCode::kInvalidBeta);
}

TEST(Forward, DepthZeroIsEmbeddingPlusHead) {
  ModelConfig c = small_config();
  c.depth = 0;
  const Model m = build_model(c);
  const Matrix logits = m.forward(random_images(c, 3, 1));
  EXPECT_EQ(logits.rows, 3u);
  EXPECT_EQ(logits.cols, 5u);
  for (float v : logits.data) EXPECT_TRUE(std::isfinite(v));
}

TEST(Forward, IdenticalImagesGiveIdenticalRows) {
  const ModelConfig c = small_config();
  for (auto stage : {BinarizationStage::kFullPrecision, BinarizationStage::kAttentionOnly,
                     BinarizationStage::kFull}) {
    const Model m = with_stage(c, stage);
    FloatTensor one = random_images(c, 1, 2);
    FloatTensor three{{3, c.channels, c.image_size, c.image_size}, {}};
    for (int i = 0; i < 3; ++i) three.data.insert(three.data.end(), one.data.begin(), one.data.end());
    const Matrix logits = m.forward(three);
    for (std::size_t k = 0; k < c.num_classes; ++k) {
      EXPECT_EQ(logits(0, k), logits(1, k));
      EXPECT_EQ(logits(0, k), logits(2, k));
    }
    // A rank-3 single image gives the same row.
    FloatTensor single{{c.channels, c.image_size, c.image_size}, one.data};
    EXPECT_EQ(m.forward(single).data, std::vector<float>(logits.row(0).begin(), logits.row(0).end()));
  }
}

TEST(Forward, RejectsWrongShapes) {
  const ModelConfig c = small_config();
  const Model m = build_model(c);
  EXPECT_BVT_ERROR(m.forward(FloatTensor{{1, 3, 8, 9}, std::vector<float>(216)}),
                   ErrorCode::kDimensionMismatch);
  EXPECT_BVT_ERROR(m.forward(FloatTensor{{3, 8}, std::vector<float>(24)}),
                   ErrorCode::kDimensionMismatch);
}

TEST(Forward, NonFiniteInputNamesTheLayer) {
  const ModelConfig c = small_config();
  FloatTensor img = random_images(c, 1, 3);
  img.data[5] = NAN;
  try {
    build_model(c).forward(img);
    FAIL() << "expected NumericalFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumericalFailure);
    EXPECT_NE(std::string(e.what()).find("embedding"), std::string::npos) << e.what();
  }
}

TEST(Forward, FullPrecisionMatchesDoubleReference) {
  for (ModelConfig c : {small_config(), ModelConfig{}}) {
    const Model m = build_model(c);
    const test::ReferenceVit ref(c, m.export_masters());
    const FloatTensor imgs = random_images(c, 2, 4);
    const Matrix logits = m.forward(imgs);
    const std::size_t per = c.channels * c.image_size * c.image_size;
    for (std::size_t n = 0; n < 2; ++n) {
      const std::vector<double> img(imgs.data.begin() + n * per,
                                    imgs.data.begin() + (n + 1) * per);
      const auto expected = ref.forward(img);
      double scale = 0.0;
      for (double v : expected) scale = std::max(scale, std::fabs(v));
      for (std::size_t k = 0; k < c.num_classes; ++k)
        EXPECT_NEAR(logits(n, k), expected[k], 1e-4 * scale);
    }
  }
}

TEST(Forward, ZeroImageMatchesGolden) {
  std::ifstream in(BVT_GOLDEN_DIR "/zero_image_logits.json");
  ASSERT_TRUE(in) << "missing golden file";
  const auto golden = nlohmann::json::parse(in);
  const ModelConfig c = config_from_json(golden.at("config").dump());
  const auto expected = golden.at("logits").get<std::vector<double>>();

  const Model m = build_model(c);
  FloatTensor zero{{c.channels, c.image_size, c.image_size}, {}};
  zero.data.assign(zero.element_count(), 0.0f);
  const Matrix logits = m.forward(zero);
  ASSERT_EQ(logits.cols, expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_NEAR(logits(0, k), expected[k], 1e-5);
}

TEST(Stages, RoundTripRestoresFullPrecisionForward) {
  const ModelConfig c = small_config();
  const FloatTensor imgs = random_images(c, 2, 5);
  Model m = build_model(c);
  const Matrix fp = m.forward(imgs);
  const auto masters = m.export_masters();
  m.set_stage(BinarizationStage::kAttentionOnly);
  EXPECT_NE(m.forward(imgs), fp);
  m.set_stage(BinarizationStage::kFullPrecision);
  EXPECT_EQ(m.forward(imgs), fp);
  EXPECT_EQ(m.parameter_count(), parameter_count(c));
  const auto after = m.export_masters();
  ASSERT_EQ(after.size(), masters.size());
  for (std::size_t i = 0; i < masters.size(); ++i) EXPECT_EQ(after[i].tensor, masters[i].tensor);
}

TEST(Stages, PathIndependent) {
  const ModelConfig c = small_config();
  const FloatTensor imgs = random_images(c, 2, 6);
  const Model staged = set_stage(set_stage(build_model(c), BinarizationStage::kAttentionOnly),
                                 BinarizationStage::kFull);
  const Model direct = with_stage(c, BinarizationStage::kFull);
  EXPECT_EQ(staged.forward(imgs), direct.forward(imgs));
  EXPECT_EQ(staged.stage(), BinarizationStage::kFull);
}

// When the MLP masters are already of the form alpha * sign(W), binarizing
// them is lossless, so AttentionOnly and Full may differ only by rounding.
TEST(Stages, AttentionOnlyAndFullDifferOnlyThroughMlpWeights) {
  const ModelConfig c = small_config();
  auto masters = build_model(c).export_masters();
  for (auto& t : masters)
    if (t.name.find(".fc") != std::string::npos && t.name.ends_with(".weight"))
      for (float& v : t.tensor.data) v = v >= 0 ? 0.02f : -0.02f;
  ModelConfig ao = c, full = c;
  ao.stage = BinarizationStage::kAttentionOnly;
  full.stage = BinarizationStage::kFull;
  const FloatTensor imgs = random_images(c, 2, 7);
  const Matrix a = Model::import_masters(ao, masters).forward(imgs);
  const Matrix b = Model::import_masters(full, masters).forward(imgs);
  for (std::size_t i = 0; i < a.data.size(); ++i) EXPECT_NEAR(a.data[i], b.data[i], 1e-5);

  // With the original masters the MLP binarization is visible.
  EXPECT_NE(with_stage(c, BinarizationStage::kAttentionOnly).forward(imgs),
            with_stage(c, BinarizationStage::kFull).forward(imgs));
}

TEST(Stages, BinaryMlpActivationsChangeTheFullForward) {
  ModelConfig c = small_config();
  c.stage = BinarizationStage::kFull;
  const FloatTensor imgs = random_images(c, 1, 8);
  const Matrix fp_act = build_model(c).forward(imgs);
  c.mlp_activation_bits = ActivationBits::kBinary;
  const Matrix bin_act = build_model(c).forward(imgs);
  EXPECT_NE(fp_act, bin_act);
  for (float v : bin_act.data) EXPECT_TRUE(std::isfinite(v));
}

TEST(Stages, NamesRoundTrip) {
  for (auto s : {BinarizationStage::kFullPrecision, BinarizationStage::kAttentionOnly,
                 BinarizationStage::kFull})
    EXPECT_EQ(parse_stage(stage_name(s)), s);
  EXPECT_FALSE(parse_stage("half").has_value());
  EXPECT_EQ(parse_activation_bits("binary"), ActivationBits::kBinary);
}

TEST(ImportMasters, RejectsMismatchedTensors) {
  const ModelConfig c = small_config();
  auto masters = build_model(c).export_masters();
  auto missing = masters;
  missing.pop_back();
  EXPECT_BVT_ERROR(Model::import_masters(c, missing), ErrorCode::kConfigError);
  auto renamed = masters;
  renamed[2].name = "cls";
  EXPECT_BVT_ERROR(Model::import_masters(c, renamed), ErrorCode::kConfigError);
  auto reshaped = masters;
  reshaped[0].tensor.shape = {1, reshaped[0].tensor.data.size()};
  EXPECT_BVT_ERROR(Model::import_masters(c, reshaped), ErrorCode::kConfigError);
}

TEST(Gelu, ExactErfForm) {
  for (float x : {-3.0f, -1.0f, 0.0f, 0.5f, 2.0f})
    EXPECT_NEAR(gelu(x), 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))), 1e-6);
}

}  // namespace
}  // namespace bvt
