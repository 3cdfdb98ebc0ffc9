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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bvt/analysis.hpp"
#include "bvt/backward.hpp"
#include "bvt/bitpack.hpp"
#include "bvt/error.hpp"
#include "bvt/io.hpp"
#include "bvt/metrics.hpp"
#include "bvt/model.hpp"
#include "bvt/sab.hpp"
#include "bvt/synthetic.hpp"

namespace bvt::cli {
namespace {

using json = nlohmann::json;

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

// Shared by every subcommand.
struct Common {
  std::uint64_t seed = 42;
  bool json = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  sub->add_flag("--json", c.json, "Machine-readable JSON output");
}

struct SampleSource {
  std::string input;
  std::string synthetic;
};

void add_source(CLI::App* sub, SampleSource& s) {
  auto* in = sub->add_option("--input", s.input, "Attention dump (rank-2 f32 tensor file)");
  auto* syn = sub->add_option("--synthetic", s.synthetic,
                              "Synthetic Dirichlet rows: n,count,concentration");
  in->excludes(syn);
}

std::vector<AttentionSample> load_samples(const SampleSource& s, std::uint64_t seed) {
  if (!s.input.empty()) {
    auto rows = read_attention_dump(s.input);
    if (rows.empty() || rows.front().empty())
      fail(ErrorCode::kInvalidInput, "attention dump holds no rows");
    std::vector<AttentionSample> out;
    out.reserve(rows.size());
    for (auto& r : rows) out.push_back(sample_from_attention(std::move(r)));
    return out;
  }
  std::string text = s.synthetic.empty() ? "196,10000,0.05" : s.synthetic;
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::size_t n = 0, count = 0;
  double conc = 0.0;
  std::string rest;
  if (!(in >> n >> count >> conc) || (in >> rest) || n == 0 || count == 0 || !(conc > 0))
    fail(ErrorCode::kInvalidInput,
         "--synthetic expects n,count,concentration with positive values");
  return long_tailed_samples(seed, count, n, conc);
}

std::vector<std::vector<double>> attention_rows(const std::vector<AttentionSample>& s) {
  std::vector<std::vector<double>> rows;
  rows.reserve(s.size());
  for (const auto& x : s) rows.push_back(x.attention);
  return rows;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      fail(ErrorCode::kInvalidInput, std::string("bad value '") + item + "' in " + what);
    out.push_back(v);
  }
  if (out.empty()) fail(ErrorCode::kInvalidInput, std::string(what) + " is empty");
  return out;
}

ModelConfig load_config(const std::string& path, const CLI::Option* seed_opt,
                        std::uint64_t seed) {
  ModelConfig cfg = path.empty() ? ModelConfig{} : read_config_file(path);
  if (path.empty() || seed_opt->count() > 0) cfg.seed = seed;
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------

int cmd_fit_beta(const Common& c, const SampleSource& src, int iters,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
  const auto rows = attention_rows(load_samples(src, c.seed));
  const BetaFit fit = fit_beta(rows, iters);
  if (c.json) {
    out << json{{"beta", fit.beta}, {"residual", fit.residual}, {"samples", fit.samples},
                {"iterations", iters}}
               .dump(2)
        << "\n";
  } else {
    out << "beta=" << num(fit.beta) << "\nresidual=" << num(fit.residual)
        << "\nsamples=" << fit.samples << "\n";
  }
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << std::setprecision(17) << "beta=" << fit.beta << "\nresidual=" << fit.residual
      << "\nsamples=" << fit.samples << "\niterations=" << iters << "\n";
    if (!f) fail(ErrorCode::kIoError, "cannot write " + out_path);
  }
  if (!(fit.beta > 0.0) || !std::isfinite(fit.beta)) {
    err << "check failed: fitted beta is not a positive finite number\n";
    return 1;
  }
  return 0;
}

int cmd_quant_error(const Common& c, const SampleSource& src, double beta, int iters,
                    const std::string& methods_text, bool methods_given,
                    std::ostream& out, std::ostream& err) {
  const auto rows = load_samples(src, c.seed);
  std::vector<QuantMethod> methods;
  for (std::stringstream ss(methods_text); ss.good();) {
    std::string name;
    std::getline(ss, name, ',');
    const auto m = parse_quant_method(name);
    if (!m) fail(ErrorCode::kInvalidInput, "unknown method '" + name + "'");
    methods.push_back(*m);
  }
  if (!methods_given && rows.size() < 2) {
    std::erase(methods, QuantMethod::kLearnedThreshold);
    err << "note: learned-T skipped, it needs at least two rows\n";
  }
  const auto results = compare_methods(rows, beta, iters, methods);

  auto find = [&](QuantMethod m) -> std::optional<double> {
    for (const auto& r : results)
      if (r.method == m) return r.mean_error;
    return std::nullopt;
  };

  if (c.json) {
    json j = {{"beta", beta}, {"iterations", iters}, {"samples", rows.size()}};
    json ms = json::array();
    for (const auto& r : results) {
      json e = {{"method", quant_method_name(r.method)},
                {"mean_error", r.mean_error},
                {"samples", r.samples}};
      if (r.threshold) e["threshold"] = *r.threshold;
      ms.push_back(e);
    }
    j["methods"] = ms;
    out << j.dump(2) << "\n";
  } else {
    out << std::left << std::setw(16) << "method" << std::setw(18) << "mean_error"
        << "samples\n";
    for (const auto& r : results) {
      out << std::setw(16) << quant_method_name(r.method) << std::setw(18)
          << num(r.mean_error) << r.samples;
      if (r.threshold) out << "  (T=" << num(*r.threshold) << ")";
      out << "\n";
    }
  }

  int rc = 0;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) {
      err << "check failed: " << msg << "\n";
      rc = 1;
    }
  };
  const auto bool_e = find(QuantMethod::kBool);
  const auto noscale = find(QuantMethod::kApproxNoScale);
  const auto approx = find(QuantMethod::kApprox);
  const auto cd = find(QuantMethod::kOptimal);
  if (bool_e && approx && *approx > *bool_e)
    err << "warning: approx error exceeds bool error\n";
  if (bool_e && noscale) check(*bool_e >= *noscale, "bool >= approx-noscale");
  if (noscale && approx) check(*noscale >= *approx, "approx-noscale >= approx");
  if (approx && cd) check(*approx <= 1.5 * *cd, "approx <= 1.5 x cd");
  return rc;
}

int cmd_sweep_beta(const Common& c, const SampleSource& src, const std::string& betas_text,
                   std::ostream& out) {
  const auto rows = load_samples(src, c.seed);
  const auto betas = parse_list(betas_text, "--betas");
  const auto points = sweep_beta(rows, betas);
  std::optional<double> base;
  for (const auto& p : points)
    if (p.beta == kDefaultBeta) base = p.approx_noscale_error;

  if (c.json) {
    json arr = json::array();
    for (const auto& p : points) {
      json e = {{"beta", p.beta},
                {"approx_error", p.approx_error},
                {"approx_noscale_error", p.approx_noscale_error},
                {"active_fraction", p.active_fraction}};
      if (base && *base > 0) e["noscale_ratio"] = p.approx_noscale_error / *base;
      arr.push_back(e);
    }
    out << json{{"samples", rows.size()}, {"points", arr}}.dump(2) << "\n";
    return 0;
  }
  out << std::left << std::setw(8) << "beta" << std::setw(16) << "approx" << std::setw(16)
      << "approx-noscale" << std::setw(12) << "ratio" << "active\n";
  for (const auto& p : points) {
    out << std::setw(8) << num(p.beta) << std::setw(16) << num(p.approx_error)
        << std::setw(16) << num(p.approx_noscale_error) << std::setw(12)
        << (base && *base > 0 ? num(p.approx_noscale_error / *base) : "-")
        << num(p.active_fraction) << "\n";
  }
  return 0;
}

int cmd_bench(const Common& c, std::size_t m, std::size_t n, std::size_t k, std::size_t reps,
              double min_speedup, std::ostream& out, std::ostream& err) {
  const BenchResult r = run_bench(m, n, k, reps, c.seed);
  if (c.json) {
    out << json{{"m", m}, {"n", n}, {"k", k}, {"reps", reps}, {"correct", r.correct},
                {"packed_seconds", r.packed_seconds}, {"float_seconds", r.float_seconds},
                {"speedup", r.speedup}}
               .dump(2)
        << "\n";
  } else {
    out << "shape " << m << "x" << k << " * " << k << "x" << n << ", best of " << reps
        << "\npacked  " << num(r.packed_seconds) << " s\nfloat   " << num(r.float_seconds)
        << " s\nspeedup " << num(r.speedup) << "x\n";
  }
  if (!r.correct) {
    err << "check failed: packed GEMM disagrees with float GEMM\n";
    return 1;
  }
  if (min_speedup > 0 && r.speedup < min_speedup) {
    err << "check failed: speedup " << num(r.speedup) << " below " << num(min_speedup) << "\n";
    return 1;
  }
  return 0;
}

json report_json(const OpsReport& r) {
  return {{"bops", r.bops},
          {"flops", r.flops},
          {"total_ops", r.total_ops},
          {"size_bytes", r.size_bytes}};
}

int cmd_ops(const Common& c, ModelConfig cfg, bool breakdown, std::ostream& out,
            std::ostream& err) {
  constexpr BinarizationStage kStages[] = {BinarizationStage::kFullPrecision,
                                           BinarizationStage::kAttentionOnly,
                                           BinarizationStage::kFull};
  std::vector<OpsReport> reports;
  json stages = json::object();
  for (auto s : kStages) {
    cfg.stage = s;
    reports.push_back(count_ops(cfg));
    json e = report_json(reports.back());
    if (breakdown) {
      json layers = json::array();
      for (const auto& l : cost_breakdown(cfg))
        layers.push_back({{"name", l.name}, {"bops", l.bops}, {"flops", l.flops}});
      e["layers"] = layers;
    }
    stages[std::string(stage_name(s))] = e;
  }

  if (c.json) {
    out << json{{"parameters", parameter_count(cfg)}, {"stages", stages}}.dump(2) << "\n";
  } else {
    out << "parameters " << parameter_count(cfg) << "\n";
    out << std::left << std::setw(16) << "stage" << std::setw(14) << "bops" << std::setw(16)
        << "flops" << std::setw(16) << "total_ops" << "size_bytes\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      out << std::setw(16) << stage_name(kStages[i]) << std::setw(14) << reports[i].bops
          << std::setw(16) << num(reports[i].flops) << std::setw(16)
          << num(reports[i].total_ops) << reports[i].size_bytes << "\n";
      if (breakdown) {
        cfg.stage = kStages[i];
        for (const auto& l : cost_breakdown(cfg))
          out << "  " << std::setw(28) << l.name << std::setw(14) << l.bops << num(l.flops)
              << "\n";
      }
    }
  }

  int rc = 0;
  for (const auto& r : reports)
    if (r.total_ops != static_cast<double>(r.bops) / 64.0 + r.flops) {
      err << "check failed: total_ops != bops/64 + flops\n";
      rc = 1;
    }
  if (cfg.depth >= 1) {
    for (std::size_t i = 1; i < reports.size(); ++i) {
      if (!(reports[i].size_bytes < reports[i - 1].size_bytes)) {
        err << "check failed: size does not decrease at " << stage_name(kStages[i]) << "\n";
        rc = 1;
      }
      if (!(reports[i].total_ops < reports[i - 1].total_ops)) {
        err << "check failed: OPs do not decrease at " << stage_name(kStages[i]) << "\n";
        rc = 1;
      }
    }
  }
  return rc;
}

int cmd_init(const Common& c, ModelConfig cfg, const std::string& stage,
             const std::string& out_path, std::ostream& out) {
  if (!stage.empty()) {
    const auto s = parse_stage(stage);
    if (!s) fail(ErrorCode::kConfigError, "unknown stage '" + stage + "'");
    cfg.stage = *s;
  }
  const Model model = build_model(cfg);
  save_model(out_path, model);
  if (c.json)
    out << json{{"path", out_path}, {"parameters", model.parameter_count()},
                {"stage", stage_name(model.stage())}}
               .dump(2)
        << "\n";
  else
    out << "wrote " << out_path << " (" << model.parameter_count() << " parameters, stage "
        << stage_name(model.stage()) << ")\n";
  return 0;
}

FloatTensor random_images(const ModelConfig& cfg, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  FloatTensor t{{count, cfg.channels, cfg.image_size, cfg.image_size}, {}};
  t.data.resize(t.element_count());
  for (float& v : t.data) v = u(rng);
  return t;
}

int cmd_forward(const Common& c, const std::string& config_path, const std::string& weights,
                const std::string& stage, const std::string& input, std::size_t images,
                const std::string& out_path, std::ostream& out) {
  Model model = load_model(weights);
  if (!config_path.empty()) {
    const ModelConfig cfg = read_config_file(config_path);
    ModelConfig expected = model.config();
    expected.stage = cfg.stage;
    expected.seed = cfg.seed;
    if (!(cfg == expected))
      fail(ErrorCode::kConfigError, "--config architecture differs from the weights file");
    model.set_stage(cfg.stage);
  }
  if (!stage.empty()) {
    const auto s = parse_stage(stage);
    if (!s) fail(ErrorCode::kConfigError, "unknown stage '" + stage + "'");
    model.set_stage(*s);
  }

  FloatTensor batch;
  if (!input.empty()) {
    Tensor t = read_tensor(input);
    auto* f = std::get_if<FloatTensor>(&t);
    if (!f) fail(ErrorCode::kInvalidInput, "input images must be an f32 tensor");
    batch = std::move(*f);
  } else {
    batch = random_images(model.config(), images, c.seed);
  }
  const Matrix logits = model.forward(batch);
  if (!out_path.empty()) write_tensor(out_path, to_tensor(logits));

  if (c.json) {
    json rows = json::array();
    for (std::size_t r = 0; r < logits.rows; ++r)
      rows.push_back(std::vector<float>(logits.row(r).begin(), logits.row(r).end()));
    out << json{{"stage", stage_name(model.stage())}, {"logits", rows}}.dump(2) << "\n";
  } else {
    out << std::setprecision(9);
    for (std::size_t r = 0; r < logits.rows; ++r) {
      for (std::size_t k = 0; k < logits.cols; ++k) out << (k ? " " : "") << logits(r, k);
      out << "\n";
    }
  }
  return 0;
}

int cmd_gradcheck(const Common& c, std::size_t trials, std::size_t n, double step, double tol,
                  std::ostream& out, std::ostream& err) {
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const VectorFunction f = [](std::span<const double> x) { return softmax(x); };

  double worst = 0.0;
  std::size_t failed = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> x(n), g(n);
    for (auto& v : x) v = 2.0 * normal(rng);
    for (auto& v : g) v = normal(rng);
    const auto s = softmax(x);
    const auto report = finite_diff_check(f, x, softmax_vjp(s, g), g, step);
    worst = std::max(worst, report.max_rel_err);
    if (!(report.max_rel_err < tol)) ++failed;
  }

  // Constant upstream gradient: annihilated by the softmax-aware rule, passed
  // through by the softmax-blind one.
  std::vector<double> x(n);
  for (auto& v : x) v = normal(rng);
  const auto s = softmax(x);
  const std::vector<double> g_const(n, 0.75);
  double sab_norm = 0.0, bibert_norm = 0.0;
  for (double v : sab_backward(s, g_const)) sab_norm = std::max(sab_norm, std::abs(v));
  for (double v : bibert_backward(g_const)) bibert_norm = std::max(bibert_norm, std::abs(v));
  const bool sab_zero = sab_norm <= 1e-15;
  const bool bibert_nonzero = bibert_norm > 0.0;

  if (c.json) {
    out << json{{"trials", trials}, {"n", n}, {"step", step}, {"tolerance", tol},
                {"max_rel_err", worst}, {"failed", failed},
                {"sab_constant_grad_max", sab_norm},
                {"bibert_constant_grad_max", bibert_norm}}
               .dump(2)
        << "\n";
  } else {
    out << "softmax_vjp: " << trials - failed << "/" << trials << " probes pass, max rel err "
        << num(worst) << " (tol " << num(tol) << ")\n"
        << "sab_backward(const g) max |r| = " << num(sab_norm) << "\n"
        << "bibert_backward(const g) max |r| = " << num(bibert_norm) << "\n";
  }
  int rc = 0;
  if (failed) {
    err << "check failed: " << failed << " softmax_vjp probes above tolerance\n";
    rc = 1;
  }
  if (!sab_zero || !bibert_nonzero) {
    err << "check failed: constant-gradient behaviour of sab/bibert backward\n";
    rc = 1;
  }
  return rc;
}

int cmd_dump_synthetic(const Common& c, const SampleSource& src, const std::string& out_path,
                       std::ostream& out) {
  const auto rows = attention_rows(load_samples(src, c.seed));
  write_attention_dump(out_path, rows);
  out << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return 0;
}

}  // namespace

BenchResult run_bench(std::size_t m, std::size_t n, std::size_t k, std::size_t reps,
                      std::uint64_t seed) {
  require(m >= 1 && n >= 1 && k >= 1 && reps >= 1, ErrorCode::kInvalidInput,
          "bench: sizes and reps must be >= 1");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  Matrix a(m, k), b(n, k);
  for (float& v : a.data) v = coin(rng) ? 1.0f : -1.0f;
  for (float& v : b.data) v = coin(rng) ? 1.0f : -1.0f;
  const BitMatrix pa = pack_matrix(a, Encoding::kPlusMinus);
  const BitMatrix pb = pack_matrix(b, Encoding::kPlusMinus);
  const std::vector<float> ra(m, 1.0f), rb(n, 1.0f);

  BenchResult r{m, n, k, reps};
  using clock = std::chrono::steady_clock;
  auto time = [&](auto&& fn) {
    double best = INFINITY;
    for (std::size_t i = 0; i < reps; ++i) {
      const auto t0 = clock::now();
      fn();
      best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count());
    }
    return best;
  };

  Matrix packed_out, float_out;
  r.packed_seconds = time([&] { packed_out = gemm_pm(pa, pb, ra, rb); });
  r.float_seconds = time([&] { float_out = matmul_nt(a, b); });
  // Integer-valued sums below 2^24 are exact in float, so equality is exact.
  r.correct = packed_out == float_out;
  r.speedup = r.float_seconds / r.packed_seconds;
  return r;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Binary vision-transformer toolkit"};
  app.name("bvt");
  app.require_subcommand(1);

  Common common;
  SampleSource src;
  int iters = kDefaultSabIterations;
  double beta = kDefaultBeta;
  std::string out_path, methods = "bool,cd,approx,approx-noscale,learned-T";
  std::string betas = "0.05,0.2,0.25,0.35,0.45";
  std::size_t bm = 1024, bn = 1024, bk = 1024, reps = 5;
  double min_speedup = 0.0;
  std::string config_path, weights, stage, input;
  bool breakdown = false;
  std::size_t images = 1, trials = 100, grad_n = 32;
  double step = 1e-5, tol = 1e-5;

  auto* fit = app.add_subcommand("fit-beta", "Regress optimal thresholds on row maxima");
  add_common(fit, common);
  add_source(fit, src);
  fit->add_option("--iters", iters, "Coordinate-descent iterations")->capture_default_str();
  fit->add_option("--out", out_path, "Write key=value results here");

  auto* qe = app.add_subcommand("quant-error", "Mean quantization error per method");
  add_common(qe, common);
  add_source(qe, src);
  qe->add_option("--beta", beta, "Threshold coefficient")->capture_default_str();
  qe->add_option("--iters", iters, "Coordinate-descent iterations")->capture_default_str();
  auto* methods_opt =
      qe->add_option("--methods", methods, "Comma-separated methods")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep-beta", "Approximation error across beta values");
  add_common(sweep, common);
  add_source(sweep, src);
  sweep->add_option("--betas", betas, "Comma-separated beta values")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Packed GEMM vs naive float GEMM");
  add_common(bench, common);
  bench->add_option("--m", bm)->capture_default_str();
  bench->add_option("--n", bn)->capture_default_str();
  bench->add_option("--k", bk)->capture_default_str();
  bench->add_option("--reps", reps)->capture_default_str();
  bench->add_option("--min-speedup", min_speedup, "Fail below this speedup (0 = report only)")
      ->capture_default_str();

  auto* ops = app.add_subcommand("ops", "OPs and size per binarization stage");
  add_common(ops, common);
  ops->add_option("--config", config_path, "Model config JSON (default: reference config)");
  ops->add_flag("--breakdown", breakdown, "Per-layer costs");

  auto* init = app.add_subcommand("init", "Build a seeded model and save it");
  add_common(init, common);
  init->add_option("--config", config_path, "Model config JSON (default: reference config)");
  init->add_option("--stage", stage, "full_precision | attention_only | full");
  init->add_option("--out", out_path, "Model file")->required();

  auto* fwd = app.add_subcommand("forward", "Run a saved model");
  add_common(fwd, common);
  fwd->add_option("--config", config_path, "Config JSON; must match the weights, sets the stage");
  fwd->add_option("--weights", weights, "Model file")->required();
  fwd->add_option("--stage", stage, "Override the stage");
  auto* in_opt = fwd->add_option("--input", input, "Images tensor file (rank 3 or 4 f32)");
  fwd->add_option("--images", images, "Random images when --input is absent")
      ->capture_default_str()
      ->excludes(in_opt);
  fwd->add_option("--out", out_path, "Write logits as a tensor file");

  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of the softmax VJP");
  add_common(grad, common);
  grad->add_option("--trials", trials)->capture_default_str();
  grad->add_option("--n", grad_n)->capture_default_str();
  grad->add_option("--step", step)->capture_default_str();
  grad->add_option("--tol", tol)->capture_default_str();

  auto* dump = app.add_subcommand("dump-synthetic", "Write synthetic attention rows");
  add_common(dump, common);
  add_source(dump, src);
  dump->add_option("--out", out_path, "Attention dump path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*fit) return cmd_fit_beta(common, src, iters, out_path, out, err);
    if (*qe)
      return cmd_quant_error(common, src, beta, iters, methods, methods_opt->count() > 0, out,
                             err);
    if (*sweep) return cmd_sweep_beta(common, src, betas, out);
    if (*bench) return cmd_bench(common, bm, bn, bk, reps, min_speedup, out, err);
    if (*ops)
      return cmd_ops(common, load_config(config_path, ops->get_option("--seed"), common.seed),
                     breakdown, out, err);
    if (*init)
      return cmd_init(common,
                      load_config(config_path, init->get_option("--seed"), common.seed),
                      stage, out_path, out);
    if (*fwd)
      return cmd_forward(common, config_path, weights, stage, input, images, out_path, out);
    if (*grad) return cmd_gradcheck(common, trials, grad_n, step, tol, out, err);
    if (*dump) return cmd_dump_synthetic(common, src, out_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace bvt::cli
