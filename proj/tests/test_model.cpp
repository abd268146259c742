// Copyright 2026 The prompttts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "fixtures.hpp"
#include "model/checkpoint.hpp"
#include "model/diffusion.hpp"
#include "model/model_config.hpp"
#include "model/prosody_features.hpp"
#include "model/tts_model.hpp"
#include "toy_corpus.hpp"
#include "util/random.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace ptts;
using namespace ptts::model;
using ptts::testing::tiny_config;

namespace {

Matrix random_mel(Eigen::Index frames, Rng& rng, int bands = 80) {
  Matrix m(frames, bands);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-8.0, 1.0);
  return m;
}

std::vector<int> random_ids(std::size_t n, Rng& rng, int vocab) {
  std::vector<int> ids(n);
  for (auto& v : ids) v = static_cast<int>(rng.below(vocab));
  return ids;
}

PromptTrack open_prompt(std::size_t n, Rng& rng, std::size_t visible) {
  PromptTrack p;
  for (std::size_t i = 0; i < n; ++i) {
    p.values.push_back(i < visible ? rng.normal() : 0.0);
    p.mask.push_back(i >= visible);
  }
  return p;
}

}  // namespace

TEST_CASE("model config defaults and validation") {
  const ModelConfig c;
  CHECK(c.hidden_dim == 256);
  CHECK(c.n_mels == 80);
  CHECK(c.spk_embed_dim == 256);
  CHECK(c.basis_dim == 128);
  CHECK(c.basis_count == 2000);
  CHECK(c.predictor_layers.duration == 2);
  CHECK(c.predictor_layers.pitch == 4);
  CHECK(c.predictor_layers.energy == 2);
  CHECK(c.decoder_layers == 20);
  CHECK(c.decoder_kernel == 3);
  CHECK(c.decoder_dilation == 1);
  CHECK(c.diffusion_steps == 100);
  CHECK(c.conformer_heads == 2);
  CHECK(c.conformer_kernel == 9);
  CHECK(c.variant == Variant::Baseline);
  CHECK_NOTHROW(c.validate());

  ModelConfig bad = c;
  bad.decoder_kernel = 4;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.basis_count = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.beta_end = 2.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("model config text round-trips") {
  ModelConfig c = tiny_config(Variant::Ns2Prompting);
  c.beta_end = 0.0512345678901;
  const std::string text = format_model_config(c, "model.");
  CHECK(parse_model_config(text, "model.") == c);
  CHECK(get_model_field(c, "variant") == "ns2_prompting");
  for (Variant v : kAllVariants) CHECK(parse_variant(variant_name(v)) == v);
  CHECK_THROWS_AS(parse_variant("gru"), ConfigError);
  ModelConfig d;
  CHECK_THROWS_AS(set_model_field(d, "nope", "1"), ConfigError);
  CHECK_THROWS_AS(set_model_field(d, "hidden_dim", "1.5"), ConfigError);
  set_model_field(d, "predictor_layers.pitch", "6");
  CHECK(d.predictor_layers.pitch == 6);
}

TEST_CASE("prosody feature maps") {
  const ModelConfig c;
  SUBCASE("pitch interpolation bridges unvoiced gaps") {
    const auto p = interpolate_pitch({0, 100, 0, 0, 200, 0}, {false, true, false, false, true, false});
    CHECK(p[0] == 100.0);
    CHECK(p[2] == doctest::Approx(100.0 + 100.0 / 3));
    CHECK(p[3] == doctest::Approx(100.0 + 200.0 / 3));
    CHECK(p[5] == 200.0);
    CHECK(interpolate_pitch({0, 0}, {false, false}) == std::vector<double>{0, 0});
  }
  SUBCASE("pitch feature inverts") {
    const std::vector<double> hz{80, 150.5, 420};
    const auto back = feature_to_pitch(pitch_to_feature(hz, c), c);
    for (std::size_t i = 0; i < hz.size(); ++i) CHECK(back[i] == doctest::Approx(hz[i]));
  }
  SUBCASE("energy and durations invert") {
    const std::vector<double> e{0.0, 1.5, 30.0};
    const auto eb = feature_to_energy(energy_to_feature(e));
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(eb[i] == doctest::Approx(e[i]));
    const std::vector<int> d{0, 1, 7, 40};
    CHECK(feature_to_durations(durations_to_feature(d), 0) == d);
    CHECK(feature_to_durations({-3.0, 0.1}, 1) == std::vector<int>{1, 1});
  }
  SUBCASE("mel normalisation maps the range onto [-1, 1] and inverts") {
    features::FeatureMatrix m(1, 3);
    m << c.mel_min, c.mel_max, 0.0;
    const auto n = normalize_mel(m, c);
    CHECK(n(0, 0) == doctest::Approx(-1.0));
    CHECK(n(0, 1) == doctest::Approx(1.0));
    CHECK((denormalize_mel(n, c) - m).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("encoders: shape, determinism, order sensitivity, errors") {
  const auto cfg = tiny_config();
  TtsModel m(cfg, 3);
  Rng rng(1);
  const std::vector<int> ids = random_ids(7, rng, cfg.vocab_size);
  const auto h = m.linguistic_encode(ids);
  CHECK(h.resolution == Resolution::Phoneme);
  CHECK(h.values.rows() == 7);
  CHECK(h.values.cols() == cfg.hidden_dim);
  CHECK(m.linguistic_encode(ids).values.value() == h.values.value());

  const std::vector<int> five{1, 2, 3, 4, 5};
  const std::vector<int> permuted{5, 4, 3, 2, 1};
  CHECK(m.linguistic_encode(five).values.value() != m.linguistic_encode(permuted).values.value());

  const auto s = m.style_adaptive_encode(h);
  CHECK(s.values.rows() == 7);
  CHECK(s.values.cols() == cfg.hidden_dim);
  CHECK(m.style_adaptive_encode(h).values.value() == s.values.value());
  CHECK(m.style_adaptive_encode(m.linguistic_encode(five)).values.value() !=
        m.style_adaptive_encode(m.linguistic_encode(permuted)).values.value());

  const std::vector<int> unknown{1, cfg.vocab_size};
  CHECK_THROWS_AS(m.linguistic_encode(unknown), ModelError);
  CHECK_THROWS_AS(m.linguistic_encode(std::vector<int>{}), ModelError);
  const std::vector<int> d(7, 2);
  CHECK_THROWS_AS(m.style_adaptive_encode(m.length_regulate(h, d)), ModelError);
}

TEST_CASE("timbre encoder") {
  auto cfg = tiny_config();
  TtsModel m(cfg, 4);
  Rng rng(2);
  const Matrix mel = random_mel(40, rng);
  const auto a = m.timbre_encode(mel);
  CHECK(a.rows() == 1);
  CHECK(a.cols() == cfg.spk_embed_dim);
  CHECK(m.timbre_encode(mel).value() == a.value());
  for (Eigen::Index len : {8, 9, 31, 128, 512}) {
    CHECK(m.timbre_encode(random_mel(len, rng)).cols() == cfg.spk_embed_dim);
  }
  CHECK_THROWS_AS(m.timbre_encode(random_mel(7, rng)), ModelError);
  CHECK_THROWS_AS(m.timbre_encode(random_mel(20, rng, 40)), ModelError);

  SUBCASE("default width is 256") {
    ModelConfig full = tiny_config();
    full.spk_embed_dim = 256;
    TtsModel wide(full, 1);
    CHECK(wide.timbre_encode(mel).cols() == 256);
  }
}

TEST_CASE("length regulation") {
  TtsModel m(tiny_config(), 5);
  const std::vector<int> ids{2, 3};
  const auto h = m.linguistic_encode(ids);
  const std::vector<int> d{2, 1};
  const auto f = m.length_regulate(h, d);
  CHECK(f.resolution == Resolution::Frame);
  REQUIRE(f.values.rows() == 3);
  CHECK(f.values.value().row(0) == h.values.value().row(0));
  CHECK(f.values.value().row(1) == h.values.value().row(0));
  CHECK(f.values.value().row(2) == h.values.value().row(1));
  const std::vector<int> zero{0, 3};
  const auto g = m.length_regulate(h, zero);
  CHECK(g.values.rows() == 3);
  CHECK(g.values.value().row(0) == h.values.value().row(1));
  const std::vector<int> negative{-1, 3};
  CHECK_THROWS_AS(m.length_regulate(h, negative), ModelError);
  const std::vector<int> short_list{3};
  CHECK_THROWS_AS(m.length_regulate(h, short_list), ModelError);
}

TEST_CASE("shape discipline over random sizes") {
  for (Variant v : kAllVariants) {
    TtsModel m(tiny_config(v), 6);
    Rng rng(static_cast<std::uint64_t>(v) + 10);
    const auto speaker = m.timbre_encode(random_mel(12, rng));
    for (int trial = 0; trial < 6; ++trial) {
      const std::size_t p = 1 + rng.below(64);
      const auto h = m.style_adaptive_encode(m.linguistic_encode(random_ids(p, rng, 16)));
      CHECK(h.length() == static_cast<Eigen::Index>(p));
      std::vector<int> dur(p);
      long total = 0;
      for (auto& d : dur) total += d = static_cast<int>(rng.below(4));
      if (total == 0) total += dur[0] = 1;
      PredictorContext ctx;
      ctx.speaker = speaker;
      ctx.prompt_mel = random_mel(1 + static_cast<Eigen::Index>(rng.below(10)), rng);
      const auto dpred =
          m.predict_prosody(ProsodyKind::Duration, h, open_prompt(p, rng, p / 2), ctx);
      CHECK(dpred.rows() == static_cast<Eigen::Index>(p));
      CHECK(dpred.cols() == 1);
      CHECK((dpred.value().array() >= 0.0).all());
      const auto hf = m.length_regulate(h, dur);
      CHECK(hf.length() == total);
      const auto n = static_cast<std::size_t>(total);
      const auto pitch = m.predict_prosody(ProsodyKind::Pitch, hf, open_prompt(n, rng, n / 3), ctx);
      const auto energy = m.predict_prosody(ProsodyKind::Energy, hf, open_prompt(n, rng, 0), ctx);
      CHECK(pitch.rows() == total);
      CHECK(energy.rows() == total);
      const auto cond = m.decoder_condition(hf, pitch, energy, speaker);
      CHECK(cond.rows() == total);
      CHECK(cond.cols() == m.config().hidden_dim);
      CHECK(std::isfinite(cond.value().sum()));
      CHECK_THROWS_AS(
          m.predict_prosody(ProsodyKind::Pitch, hf, open_prompt(n + 1, rng, 0), ctx), ModelError);
      CHECK_THROWS_AS(m.predict_prosody(ProsodyKind::Pitch, h, open_prompt(p, rng, 0), ctx),
                      ModelError);
    }
  }
}

TEST_CASE("decoder condition reduces to h for zero inputs") {
  TtsModel m(tiny_config(), 7);
  const std::vector<int> ids{1, 2, 3};
  const std::vector<int> d{2, 2, 1};
  const auto hf = m.length_regulate(m.linguistic_encode(ids), d);
  const auto c = m.decoder_condition(hf, nn::constant(Matrix::Zero(5, 1)),
                                     nn::constant(Matrix::Zero(5, 1)),
                                     nn::constant(Matrix::Zero(1, m.config().spk_embed_dim)));
  CHECK(c.value() == hf.values.value());
  CHECK_THROWS_AS(m.decoder_condition(hf, nn::constant(Matrix::Zero(4, 1)),
                                      nn::constant(Matrix::Zero(5, 1)),
                                      nn::constant(Matrix::Zero(1, m.config().spk_embed_dim))),
                  ModelError);
}

TEST_CASE("variant isolation of the speaker channel") {
  Rng rng(8);
  const Matrix mel_a = random_mel(20, rng), mel_b = random_mel(20, rng);
  const std::vector<int> ids{1, 4, 2, 7};
  auto input_for = [&](Variant v, const Matrix& ref) {
    TtsModel m(tiny_config(v), 9);
    PredictorContext ctx;
    ctx.speaker = m.timbre_encode(ref);
    Rng r(1);
    const auto h = m.linguistic_encode(ids);
    return m.predictor_input(ProsodyKind::Duration, h, open_prompt(4, r, 2), ctx).value();
  };
  // Baseline predictor inputs do not depend on the speaker at all.
  CHECK(input_for(Variant::Baseline, mel_a) == input_for(Variant::Baseline, mel_b));
  CHECK(input_for(Variant::CnnPredictor, mel_a) == input_for(Variant::CnnPredictor, mel_b));
  // Addall injects it.
  CHECK(input_for(Variant::AddallSpk, mel_a) != input_for(Variant::AddallSpk, mel_b));
  CHECK(input_for(Variant::Baseline, mel_a) != input_for(Variant::AddallSpk, mel_a));

  // Baseline input is exactly h + prompt projection: replacing the speaker
  // with an undefined tensor changes nothing.
  TtsModel base(tiny_config(), 9);
  Rng r(1);
  const auto prompt = open_prompt(4, r, 2);
  const auto h = base.linguistic_encode(ids);
  PredictorContext with;
  with.speaker = base.timbre_encode(mel_a);
  CHECK(base.predictor_input(ProsodyKind::Duration, h, prompt, with).value() ==
        base.predictor_input(ProsodyKind::Duration, h, prompt, {}).value());

  TtsModel addall(tiny_config(Variant::AddallSpk), 9);
  CHECK_THROWS_AS(addall.predictor_input(ProsodyKind::Duration, h, prompt, {}), ModelError);
}

TEST_CASE("implicit prompting reads the prompt mel") {
  TtsModel m(tiny_config(Variant::Ns2Prompting), 10);
  Rng rng(3);
  const std::vector<int> ids{1, 2, 3};
  const auto h = m.linguistic_encode(ids);
  PredictorContext a, b;
  a.prompt_mel = random_mel(6, rng);
  b.prompt_mel = random_mel(6, rng);
  const auto prompt = open_prompt(3, rng, 1);
  CHECK(m.predictor_input(ProsodyKind::Duration, h, prompt, a).value() !=
        m.predictor_input(ProsodyKind::Duration, h, prompt, b).value());
  // The explicit prompt values are not consumed by this variant.
  auto other = prompt;
  other.values[0] += 3.0;
  CHECK(m.predictor_input(ProsodyKind::Duration, h, prompt, a).value() ==
        m.predictor_input(ProsodyKind::Duration, h, other, a).value());
}

TEST_CASE("diffusion schedule") {
  const DiffusionSchedule s(100, 1e-4, 0.06);
  CHECK(s.steps() == 100);
  CHECK(s.beta(1) == doctest::Approx(1e-4));
  CHECK(s.beta(100) == doctest::Approx(0.06));
  CHECK(s.beta(50) - s.beta(49) == doctest::Approx(s.beta(2) - s.beta(1)));
  CHECK(s.alpha_bar_prev(1) == 1.0);

  SUBCASE("closed form equals iterated single steps") {
    double mean_coef = 1.0, var = 0.0;
    for (int t = 1; t <= 100; ++t) {
      mean_coef *= std::sqrt(1.0 - s.beta(t));
      var = (1.0 - s.beta(t)) * var + s.beta(t);
      CHECK(mean_coef == doctest::Approx(std::sqrt(s.alpha_bar(t))).epsilon(1e-12));
      CHECK(var == doctest::Approx(1.0 - s.alpha_bar(t)).epsilon(1e-12));
    }
    // Monte Carlo: iterate the chain on samples and compare with corrupt().
    Rng rng(4);
    const int n = 20000, t = 40;
    double m_iter = 0, v_iter = 0, m_closed = 0, v_closed = 0;
    for (int i = 0; i < n; ++i) {
      double x = 0.7;
      for (int k = 1; k <= t; ++k) x = std::sqrt(1 - s.beta(k)) * x + std::sqrt(s.beta(k)) * rng.normal();
      Matrix x0(1, 1), eps(1, 1);
      x0(0, 0) = 0.7;
      eps(0, 0) = rng.normal();
      const double y = s.corrupt(x0, t, eps)(0, 0);
      m_iter += x;
      v_iter += x * x;
      m_closed += y;
      v_closed += y * y;
    }
    m_iter /= n;
    m_closed /= n;
    v_iter = v_iter / n - m_iter * m_iter;
    v_closed = v_closed / n - m_closed * m_closed;
    CHECK(std::abs(m_iter - m_closed) < 0.03);
    CHECK(std::abs(v_iter - v_closed) < 0.03);
  }
  SUBCASE("posterior variance") {
    for (int t = 2; t <= 100; ++t) {
      CHECK(s.posterior_variance(t) ==
            doctest::Approx(s.beta(t) * (1 - s.alpha_bar_prev(t)) / (1 - s.alpha_bar(t))));
    }
  }
  CHECK_THROWS(DiffusionSchedule(10, 0.1, 0.01));
}

TEST_CASE("diffusion loss and sampling") {
  const auto cfg = tiny_config();
  TtsModel m(cfg, 11);
  Rng rng(5);
  const std::vector<int> ids{1, 2, 3};
  const std::vector<int> d{3, 2, 3};
  const auto hf = m.length_regulate(m.linguistic_encode(ids), d);
  const auto cond = m.decoder_condition(hf, nn::constant(Matrix::Ones(8, 1)),
                                        nn::constant(Matrix::Ones(8, 1)),
                                        m.timbre_encode(random_mel(10, rng)));
  Matrix x0(8, 80), noise(8, 80);
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    x0.data()[i] = rng.uniform(-1, 1);
    noise.data()[i] = rng.normal();
  }
  const double loss = m.diffusion_loss(x0, cond, 5, noise).item();
  CHECK(std::isfinite(loss));
  CHECK(loss > 0.0);
  // At t = 1 the corrupted input is nearly clean.
  const Matrix x1 = m.schedule().corrupt(x0, 1, noise);
  CHECK((x1 - x0).cwiseAbs().maxCoeff() < 0.05 * noise.cwiseAbs().maxCoeff() + 1e-3);
  CHECK_THROWS_AS(m.diffusion_loss(x0, cond, 0, noise), ModelError);
  CHECK_THROWS_AS(m.diffusion_loss(x0.topRows(7), cond, 3, noise.topRows(7)), ModelError);

  const std::vector<int> many(9, 7);
  const auto hf63 = m.length_regulate(m.linguistic_encode(random_ids(9, rng, 16)), many);
  const auto cond63 = m.decoder_condition(hf63, nn::constant(Matrix::Zero(63, 1)),
                                          nn::constant(Matrix::Zero(63, 1)),
                                          nn::constant(Matrix::Zero(1, cfg.spk_embed_dim)));
  const Matrix a = m.diffusion_sample(cond63, 63, 42);
  CHECK(a.rows() == 63);
  CHECK(a.cols() == 80);
  CHECK(m.diffusion_sample(cond63, 63, 42) == a);
  CHECK(m.diffusion_sample(cond63, 63, 43) != a);
  CHECK((a.array().abs() <= 1.0 + 1e-12).all());
  CHECK_THROWS_AS(m.diffusion_sample(cond63, 0, 1), ModelError);
  CHECK_THROWS_AS(m.diffusion_sample(cond63, 62, 1), ModelError);
}

TEST_CASE("predictor loss gradients match finite differences") {
  auto cfg = tiny_config();
  cfg.hidden_dim = 8;
  cfg.ffn_dim = 8;
  TtsModel m(cfg, 12);
  Rng rng(6);
  const std::vector<int> ids{1, 2, 3};
  const auto target = Matrix::Constant(3, 1, 0.7).eval();
  const auto prompt = open_prompt(3, rng, 1);
  auto loss = [&] {
    const auto h = m.style_adaptive_encode(m.linguistic_encode(ids));
    return nn::masked_l1(m.predict_prosody(ProsodyKind::Duration, h, prompt), target,
                         prompt.mask);
  };
  m.parameters().zero_grad();
  nn::backward(loss());
  int checked = 0;
  for (const auto& [name, t] : m.parameters().all()) {
    if (name.rfind("duration_predictor", 0) != 0 || t.grad().size() == 0) continue;
    auto& value = const_cast<Matrix&>(t.value());
    const double g = t.grad()(0, 0);
    const double orig = value(0, 0);
    const double eps = 1e-6;
    value(0, 0) = orig + eps;
    double up;
    {
      nn::NoGradGuard ng;
      up = loss().item();
    }
    value(0, 0) = orig - eps;
    double down;
    {
      nn::NoGradGuard ng;
      down = loss().item();
    }
    value(0, 0) = orig;
    const double numeric = (up - down) / (2 * eps);
    CHECK(std::abs(numeric - g) <= 1e-5 * std::max({std::abs(numeric), std::abs(g), 1e-3}));
    ++checked;
  }
  CHECK(checked > 5);
}

TEST_CASE("checkpoints") {
  const auto dir = ptts::testing::scratch_dir("ckpt");
  TtsModel m(tiny_config(Variant::AttenPredictor), 13);
  save_checkpoint(dir / "a.ckpt", m, {"a", "b"}, 42);
  const Checkpoint c = load_checkpoint(dir / "a.ckpt");
  CHECK(c.step == 42);
  CHECK(c.phoneme_symbols == std::vector<std::string>{"a", "b"});
  CHECK(c.model->config() == m.config());
  CHECK(c.model->parameters().checksum() == m.parameters().checksum());

  TtsModel other(tiny_config(Variant::AttenPredictor), 99);
  CHECK(other.parameters().checksum() != m.parameters().checksum());
  load_weights(dir / "a.ckpt", other);
  CHECK(other.parameters().checksum() == m.parameters().checksum());

  TtsModel mismatched(tiny_config(Variant::Baseline), 13);
  CHECK_THROWS_AS(load_weights(dir / "a.ckpt", mismatched), ModelError);

  std::ofstream(dir / "junk.ckpt") << "junk";
  CHECK_THROWS_AS(load_checkpoint(dir / "junk.ckpt"), ModelError);
  CHECK_THROWS_AS(load_checkpoint(dir / "absent.ckpt"), ModelError);
  {
    std::ifstream in(dir / "a.ckpt", std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::ofstream(dir / "cut.ckpt", std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  }
  CHECK_THROWS_AS(load_checkpoint(dir / "cut.ckpt"), ModelError);
}
