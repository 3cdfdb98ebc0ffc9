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

#include "bvt/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <type_traits>

#include <json.hpp>

#include "bvt/error.hpp"

namespace bvt {
namespace {

using json = nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "file formats assume a little-endian host");

template <typename T>
void put(Bytes& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

// Bounds-checked little-endian reader. Offsets in errors are absolute.
class Reader {
 public:
  Reader(std::span<const std::uint8_t> data, std::size_t base)
      : data_(data), base_(base) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t offset() const { return base_ + pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n)
      throw FormatError(offset(), std::string("truncated ") + what + ": need " +
                                      std::to_string(n) + " bytes, have " +
                                      std::to_string(remaining()));
  }

  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    need(n, what);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

void put_header(Bytes& out, DType dtype, const std::vector<std::uint64_t>& dims) {
  out.insert(out.end(), std::begin(kTensorMagic), std::end(kTensorMagic));
  put(out, static_cast<std::uint8_t>(dtype));
  put(out, static_cast<std::uint8_t>(dims.size()));
  for (std::uint64_t d : dims) put(out, d);
}

void put_words(Bytes& out, const BitVector& v) {
  for (std::uint64_t w : v.words()) put(out, w);
}

Encoding encoding_of(DType d) {
  return d == DType::kPackedPlusMinus ? Encoding::kPlusMinus : Encoding::kZeroOne;
}

DType dtype_of(Encoding e) {
  return e == Encoding::kPlusMinus ? DType::kPackedPlusMinus : DType::kPackedZeroOne;
}

// Multiplies with an overflow check against the bytes actually available.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, std::size_t offset) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw FormatError(offset, "tensor dimensions overflow");
  return a * b;
}

BitVector read_bit_row(Reader& r, std::uint64_t len, Encoding enc) {
  const std::size_t start = r.offset();
  const std::uint64_t n_words = words_for(len);
  r.need(checked_mul(n_words, 8, start), "packed row");
  std::vector<std::uint64_t> words(n_words);
  for (auto& w : words) w = r.get<std::uint64_t>("packed word");
  try {
    return BitVector::from_words(std::move(words), len, enc);
  } catch (const Error& e) {
    throw FormatError(start, std::string("non-canonical packed row: ") + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  const Bytes b = read_file(path);
  return std::string(b.begin(), b.end());
}

}  // namespace

Bytes encode_tensor(const Tensor& t) {
  Bytes out;
  if (const auto* f = std::get_if<FloatTensor>(&t)) {
    require(f->shape.size() <= 255, ErrorCode::kInvalidInput, "tensor rank above 255");
    require(f->data.size() == f->element_count(), ErrorCode::kDimensionMismatch,
            "tensor data length differs from shape");
    put_header(out, DType::kF32, f->shape);
    for (float v : f->data) put(out, v);
  } else if (const auto* v = std::get_if<BitVector>(&t)) {
    put_header(out, dtype_of(v->encoding()), {v->size()});
    put_words(out, *v);
  } else {
    const auto& m = std::get<BitMatrix>(t);
    put_header(out, dtype_of(m.encoding()), {m.rows(), m.cols()});
    for (std::size_t r = 0; r < m.rows(); ++r) put_words(out, m.row(r));
  }
  return out;
}

Tensor decode_tensor(std::span<const std::uint8_t> data, std::size_t* consumed,
                     std::size_t base_offset) {
  Reader r(data, base_offset);
  const auto magic = r.take(4, "magic");
  if (std::memcmp(magic.data(), kTensorMagic, 4) != 0)
    throw FormatError(base_offset, "bad tensor magic");
  const std::size_t dtype_at = r.offset();
  const auto dtype_code = r.get<std::uint8_t>("dtype");
  if (dtype_code > 2)
    throw FormatError(dtype_at, "unknown dtype " + std::to_string(dtype_code));
  const auto dtype = static_cast<DType>(dtype_code);
  const std::size_t rank_at = r.offset();
  const auto rank = r.get<std::uint8_t>("rank");
  std::vector<std::uint64_t> dims(rank);
  for (auto& d : dims) d = r.get<std::uint64_t>("dims");

  Tensor result;
  if (dtype == DType::kF32) {
    std::uint64_t count = 1;
    for (auto d : dims) count = checked_mul(count, d, rank_at);
    r.need(checked_mul(count, 4, rank_at), "f32 payload");
    FloatTensor f{dims, std::vector<float>(count)};
    for (float& v : f.data) v = r.get<float>("f32 payload");
    result = std::move(f);
  } else {
    const Encoding enc = encoding_of(dtype);
    if (rank == 1) {
      result = read_bit_row(r, dims[0], enc);
    } else if (rank == 2) {
      const std::uint64_t rows = dims[0], cols = dims[1];
      r.need(checked_mul(rows, checked_mul(words_for(cols), 8, rank_at), rank_at),
             "packed payload");
      std::vector<BitVector> vs;
      vs.reserve(rows);
      for (std::uint64_t i = 0; i < rows; ++i) vs.push_back(read_bit_row(r, cols, enc));
      result = BitMatrix::from_rows(std::move(vs), cols, enc);
    } else {
      throw FormatError(rank_at, "packed tensors must have rank 1 or 2");
    }
  }

  if (consumed)
    *consumed = r.pos();
  else if (r.remaining() != 0)
    throw FormatError(r.offset(), std::to_string(r.remaining()) + " trailing bytes");
  return result;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::kIoError, "read failed: " + path.string());
  return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) fail(ErrorCode::kIoError, "write failed: " + path.string());
}

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  write_file(path, encode_tensor(t));
}

Tensor read_tensor(const std::filesystem::path& path) {
  return decode_tensor(read_file(path));
}

void write_attention_dump(const std::filesystem::path& path,
                          const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.empty() ? 0 : rows.front().size();
  FloatTensor t{{rows.size(), n}, {}};
  t.data.reserve(rows.size() * n);
  for (const auto& row : rows) {
    require(row.size() == n, ErrorCode::kDimensionMismatch,
            "attention dump rows differ in length");
    for (double v : row) t.data.push_back(static_cast<float>(v));
  }
  write_tensor(path, t);
}

std::vector<std::vector<double>> read_attention_dump(const std::filesystem::path& path) {
  const Tensor t = read_tensor(path);
  const auto* f = std::get_if<FloatTensor>(&t);
  if (!f || f->shape.size() != 2)
    throw FormatError(4, "attention dump must be a rank-2 f32 tensor");
  const std::size_t rows = f->shape[0], cols = f->shape[1];
  std::vector<std::vector<double>> out(rows, std::vector<double>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[r][c] = f->data[r * cols + c];
  return out;
}

namespace {

json config_json(const ModelConfig& c) {
  return json{{"image_size", c.image_size},
              {"patch_size", c.patch_size},
              {"channels", c.channels},
              {"embed_dim", c.embed_dim},
              {"heads", c.heads},
              {"depth", c.depth},
              {"mlp_ratio", c.mlp_ratio},
              {"num_classes", c.num_classes},
              {"beta", c.beta},
              {"stage", std::string(stage_name(c.stage))},
              {"mlp_activation_bits", std::string(activation_bits_name(c.mlp_activation_bits))},
              {"seed", c.seed}};
}

ModelConfig config_from(const json& j) {
  if (!j.is_object()) fail(ErrorCode::kConfigError, "config must be a JSON object");
  ModelConfig c;
  auto count = [](const json& v, const std::string& key) -> std::size_t {
    if (!v.is_number_unsigned())
      fail(ErrorCode::kConfigError, "'" + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "image_size") c.image_size = count(v, key);
    else if (key == "patch_size") c.patch_size = count(v, key);
    else if (key == "channels") c.channels = count(v, key);
    else if (key == "embed_dim") c.embed_dim = count(v, key);
    else if (key == "heads") c.heads = count(v, key);
    else if (key == "depth") c.depth = count(v, key);
    else if (key == "mlp_ratio") c.mlp_ratio = count(v, key);
    else if (key == "num_classes") c.num_classes = count(v, key);
    else if (key == "seed") c.seed = count(v, key);
    else if (key == "beta") {
      if (!v.is_number()) fail(ErrorCode::kConfigError, "'beta' must be a number");
      c.beta = v.get<double>();
    } else if (key == "stage") {
      const auto s = v.is_string() ? parse_stage(v.get<std::string>()) : std::nullopt;
      if (!s)
        fail(ErrorCode::kConfigError,
             "'stage' must be full_precision, attention_only or full");
      c.stage = *s;
    } else if (key == "mlp_activation_bits") {
      const auto b =
          v.is_string() ? parse_activation_bits(v.get<std::string>()) : std::nullopt;
      if (!b) fail(ErrorCode::kConfigError, "'mlp_activation_bits' must be fp or binary");
      c.mlp_activation_bits = *b;
    } else {
      fail(ErrorCode::kConfigError, "unknown config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

}  // namespace

std::string config_to_json(const ModelConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

ModelConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(e.byte, std::string("config is not valid JSON: ") + e.what());
  }
  return config_from(j);
}

ModelConfig read_config_file(const std::filesystem::path& path) {
  return config_from_json(read_text(path));
}

void write_config_file(const std::filesystem::path& path, const ModelConfig& cfg) {
  const std::string text = config_to_json(cfg);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Bytes serialize_model(const Model& model) {
  const auto masters = model.export_masters();
  std::vector<Bytes> blobs;
  json manifest = json::array();
  for (const auto& t : masters) {
    blobs.push_back(encode_tensor(t.tensor));
    manifest.push_back(
        {{"name", t.name}, {"shape", t.tensor.shape}, {"bytes", blobs.back().size()}});
  }
  const std::string header =
      json{{"config", config_json(model.config())}, {"tensors", manifest}}.dump();

  Bytes out(std::begin(kModelMagic), std::end(kModelMagic));
  put(out, kModelFormatVersion);
  put(out, static_cast<std::uint64_t>(header.size()));
  out.insert(out.end(), header.begin(), header.end());
  for (const auto& b : blobs) out.insert(out.end(), b.begin(), b.end());
  return out;
}

Model deserialize_model(std::span<const std::uint8_t> data) {
  Reader r(data, 0);
  const auto magic = r.take(4, "magic");
  if (std::memcmp(magic.data(), kModelMagic, 4) != 0)
    throw FormatError(0, "bad model magic");
  const std::size_t version_at = r.offset();
  const auto version = r.get<std::uint32_t>("version");
  if (version != kModelFormatVersion)
    throw FormatError(version_at, "unsupported model version " + std::to_string(version));
  const auto header_len = r.get<std::uint64_t>("manifest length");
  const std::size_t header_at = r.offset();
  const auto header = r.take(header_len, "manifest");

  json j;
  ModelConfig cfg;
  try {
    j = json::parse(header.begin(), header.end());
    cfg = config_from(j.at("config"));
  } catch (const json::exception& e) {
    throw FormatError(header_at, std::string("bad manifest: ") + e.what());
  } catch (const Error& e) {
    throw FormatError(header_at, std::string("bad manifest config: ") + e.what());
  }
  const json* entries = nullptr;
  if (j.contains("tensors") && j["tensors"].is_array()) entries = &j["tensors"];
  if (!entries) throw FormatError(header_at, "manifest lacks a tensor list");

  std::vector<NamedTensor> tensors;
  for (const auto& e : *entries) {
    const std::size_t at = r.offset();
    if (!e.is_object() || !e.contains("name") || !e["name"].is_string() ||
        !e.contains("bytes") || !e["bytes"].is_number_unsigned())
      throw FormatError(header_at, "malformed manifest entry");
    const auto name = e["name"].get<std::string>();
    const auto blob = r.take(e["bytes"].get<std::uint64_t>(), "tensor blob");
    Tensor t = decode_tensor(blob, nullptr, at);
    auto* f = std::get_if<FloatTensor>(&t);
    if (!f) throw FormatError(at, "master tensor '" + name + "' is not f32");
    tensors.push_back({name, std::move(*f)});
  }
  if (r.remaining() != 0)
    throw FormatError(r.offset(), std::to_string(r.remaining()) + " trailing bytes");

  try {
    return Model::import_masters(cfg, tensors);
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(header_at, std::string("manifest does not match config: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const Model& model) {
  write_file(path, serialize_model(model));
}

Model load_model(const std::filesystem::path& path) {
  return deserialize_model(read_file(path));
}

}  // namespace bvt
