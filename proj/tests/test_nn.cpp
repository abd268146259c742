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


#include "nn/autograd.hpp"
#include "nn/layers.hpp"
#include "nn/optimizer.hpp"
#include "nn/parameters.hpp"
#include "util/random.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace ptts;
using namespace ptts::nn;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng, double scale = 1.0) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.normal();
  return m;
}

using Fn = std::function<Tensor(const std::vector<Tensor>&)>;

// Projects f's output onto a fixed random direction and compares the
// analytic gradient of every input element with central differences.
double max_grad_error(const Fn& f, const std::vector<Matrix>& inputs, std::uint64_t seed = 5) {
  std::vector<Tensor> leaves;
  for (const auto& m : inputs) leaves.push_back(leaf(m, true));
  Tensor out = f(leaves);
  Rng rng(seed);
  const Matrix dir = random_matrix(out.rows(), out.cols(), rng);
  backward(sum_all(mul(out, constant(dir))));

  auto objective = [&](const std::vector<Matrix>& xs) {
    NoGradGuard g;
    std::vector<Tensor> ts;
    for (const auto& m : xs) ts.push_back(constant(m));
    return f(ts).value().cwiseProduct(dir).sum();
  };
  double worst = 0.0;
  const double eps = 1e-6;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (Eigen::Index i = 0; i < inputs[k].size(); ++i) {
      auto plus = inputs, minus = inputs;
      plus[k].data()[i] += eps;
      minus[k].data()[i] -= eps;
      const double numeric = (objective(plus) - objective(minus)) / (2 * eps);
      const double analytic = leaves[k].grad().size() ? leaves[k].grad().data()[i] : 0.0;
      const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-3});
      worst = std::max(worst, std::abs(numeric - analytic) / denom);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("elementwise and matrix ops have correct gradients") {
  Rng rng(1);
  const Matrix a = random_matrix(3, 4, rng), b = random_matrix(4, 2, rng);
  const Matrix c = random_matrix(3, 4, rng), row = random_matrix(1, 4, rng);
  CHECK(max_grad_error([](auto& x) { return matmul(x[0], x[1]); }, {a, b}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return add(x[0], x[1]); }, {a, c}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return add(x[0], x[1]); }, {a, row}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return sub(x[0], x[1]); }, {a, c}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return mul(x[0], x[1]); }, {a, row}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return scale(x[0], -1.7); }, {a}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return transpose(x[0]); }, {a}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return silu(x[0]); }, {a}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return sigmoid(x[0]); }, {a}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return nn::tanh(x[0]); }, {a}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return softplus(x[0]); }, {a}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return nn::exp(x[0]); }, {a}) < 1e-6);
  CHECK(max_grad_error([](auto& x) { return softmax_rows(x[0]); }, {a}) < 1e-6);
}

TEST_CASE("normalisation, convolution and shape ops have correct gradients") {
  Rng rng(2);
  const Matrix x = random_matrix(7, 3, rng);
  const Matrix g = random_matrix(1, 3, rng), b = random_matrix(1, 3, rng);
  CHECK(max_grad_error([](auto& v) { return layer_norm(v[0], v[1], v[2]); }, {x, g, b}) < 1e-5);
  const Matrix w = random_matrix(3 * 3, 2, rng), bias = random_matrix(1, 2, rng);
  CHECK(max_grad_error([](auto& v) { return conv1d(v[0], v[1], v[2], 3, 1); }, {x, w, bias}) <
        1e-6);
  CHECK(max_grad_error([](auto& v) { return conv1d(v[0], v[1], v[2], 3, 2); }, {x, w, bias}) <
        1e-6);
  const Matrix dw = random_matrix(5, 3, rng), db = random_matrix(1, 3, rng);
  CHECK(max_grad_error([](auto& v) { return depthwise_conv1d(v[0], v[1], v[2], 5, 1); },
                       {x, dw, db}) < 1e-6);
  CHECK(max_grad_error(
            [](auto& v) {
              std::vector<Tensor> parts{v[0], v[1]};
              return concat_cols(parts);
            },
            {x, x}) < 1e-6);
  CHECK(max_grad_error(
            [](auto& v) {
              std::vector<Tensor> parts{v[0], v[1]};
              return concat_rows(parts);
            },
            {x, x}) < 1e-6);
  CHECK(max_grad_error([](auto& v) { return slice_cols(v[0], 1, 2); }, {x}) < 1e-6);
  CHECK(max_grad_error([](auto& v) { return slice_rows(v[0], 2, 3); }, {x}) < 1e-6);
  const std::vector<int> counts{2, 0, 1, 3, 0, 1, 1};
  CHECK(max_grad_error([&](auto& v) { return repeat_rows(v[0], counts); }, {x}) < 1e-6);
  CHECK(max_grad_error([](auto& v) { return broadcast_rows(v[0], 4); }, {g}) < 1e-6);
  CHECK(max_grad_error([](auto& v) { return mean_rows(v[0]); }, {x}) < 1e-6);
  const std::vector<int> ids{3, 1, 3, 0};
  CHECK(max_grad_error([&](auto& v) { return gather_rows(v[0], ids); }, {x}) < 1e-6);
  const Matrix target = random_matrix(7, 3, rng);
  CHECK(max_grad_error([&](auto& v) { return mse(v[0], target); }, {x}) < 1e-6);
}

TEST_CASE("attention and composite blocks have correct gradients") {
  Rng rng(3);
  ParameterStore store;
  MultiHeadAttention mha(store, "mha", 4, 2, rng);
  ConformerBlock conformer(store, "conf", 4, 2, 3, rng);
  FftBlock fft(store, "fft", 4, 2, 8, 3, rng);
  const Matrix q = random_matrix(5, 4, rng), kv = random_matrix(6, 4, rng);
  CHECK(max_grad_error([&](auto& v) { return mha(v[0], v[1]); }, {q, kv}) < 1e-5);
  CHECK(max_grad_error([&](auto& v) { return conformer(v[0]); }, {q}) < 1e-5);
  CHECK(max_grad_error([&](auto& v) { return fft(v[0]); }, {q}) < 1e-5);
}

TEST_CASE("conv1d agrees with a direct loop") {
  Rng rng(4);
  const int cin = 3, cout = 2, k = 3, dil = 2;
  const Matrix x = random_matrix(9, cin, rng), w = random_matrix(k * cin, cout, rng);
  Matrix expected = Matrix::Zero(9, cout);
  for (int t = 0; t < 9; ++t) {
    for (int tap = 0; tap < k; ++tap) {
      const int src = t + (tap - k / 2) * dil;
      if (src < 0 || src >= 9) continue;
      for (int i = 0; i < cin; ++i) {
        for (int o = 0; o < cout; ++o) expected(t, o) += x(src, i) * w(tap * cin + i, o);
      }
    }
  }
  const Matrix got = conv1d(constant(x), constant(w), Tensor(), k, dil).value();
  CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("softmax rows sum to one and layer norm standardises") {
  Rng rng(6);
  const Matrix x = random_matrix(4, 6, rng, 5.0);
  const Matrix s = softmax_rows(constant(x)).value();
  for (Eigen::Index r = 0; r < s.rows(); ++r) CHECK(s.row(r).sum() == doctest::Approx(1.0));
  const Matrix n =
      layer_norm(constant(x), constant(Matrix::Ones(1, 6)), constant(Matrix::Zero(1, 6))).value();
  for (Eigen::Index r = 0; r < n.rows(); ++r) {
    CHECK(std::abs(n.row(r).mean()) < 1e-12);
    CHECK((n.row(r).array().square().mean()) == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("repeat_rows expands and omits zero counts") {
  Matrix h(2, 2);
  h << 1, 2, 3, 4;
  const std::vector<int> counts{2, 1};
  const Matrix out = repeat_rows(constant(h), counts).value();
  REQUIRE(out.rows() == 3);
  CHECK(out.row(0) == h.row(0));
  CHECK(out.row(1) == h.row(0));
  CHECK(out.row(2) == h.row(1));
  const std::vector<int> skip{0, 2};
  CHECK(repeat_rows(constant(h), skip).value().rows() == 2);
}

TEST_CASE("masked_l1 averages masked positions only") {
  Matrix pred(4, 1), target(4, 1);
  pred << 1, 1, 1, 1;
  target << 1, 2, 3, 4;
  CHECK(masked_l1(constant(pred), target, {false, false, true, true}).item() == 2.5);
  CHECK(masked_l1(constant(pred), target, {false, false, false, false}).item() == 0.0);
}

TEST_CASE("no-grad scope records no graph") {
  Tensor a = leaf(Matrix::Ones(2, 2), true);
  {
    NoGradGuard g;
    CHECK_FALSE(grad_enabled());
    CHECK_FALSE(add(a, a).requires_grad());
  }
  CHECK(grad_enabled());
  CHECK(add(a, a).requires_grad());
}

TEST_CASE("adam leaves frozen modules untouched and clips the global norm") {
  Rng rng(7);
  ParameterStore store;
  Linear enc(store, "enc.proj", 3, 3, rng);
  Linear dec(store, "dec.proj", 3, 3, rng);
  const auto enc_before = store.checksum("enc");
  const auto dec_before = store.checksum("dec");
  Adam adam;
  for (int i = 0; i < 3; ++i) {
    store.zero_grad();
    backward(sum_all(dec(enc(constant(random_matrix(4, 3, rng))))));
    adam.step(store, {"enc"});
  }
  CHECK(store.checksum("enc") == enc_before);
  CHECK(store.checksum("dec") != dec_before);
  CHECK(adam.steps_taken() == 3);
  CHECK(is_frozen("enc.proj.weight", {"enc"}));
  CHECK_FALSE(is_frozen("encoder.proj.weight", {"enc"}));
}

TEST_CASE("learning-rate schedule warms up then decays") {
  AdamOptions o;
  o.learning_rate = 1e-3;
  o.warmup_steps = 10;
  CHECK(scheduled_learning_rate(o, 1) < scheduled_learning_rate(o, 5));
  CHECK(scheduled_learning_rate(o, 10) == doctest::Approx(1e-3));
  CHECK(scheduled_learning_rate(o, 40) < scheduled_learning_rate(o, 10));
}

TEST_CASE("sinusoidal positions differ across rows") {
  const Matrix p = sinusoidal_positions(5, 8);
  CHECK(p.rows() == 5);
  CHECK(p.cols() == 8);
  CHECK((p.row(1) - p.row(2)).norm() > 0.0);
  CHECK(sinusoidal_embedding(3.0, 8).cols() == 8);
  CHECK((sinusoidal_embedding(3.0, 8) - sinusoidal_embedding(4.0, 8)).norm() > 0.0);
}

TEST_CASE("parameter store rejects duplicate names") {
  ParameterStore store;
  store.create("a", Matrix::Zero(1, 1));
  CHECK_THROWS(store.create("a", Matrix::Zero(1, 1)));
  CHECK_THROWS(store.get("missing"));
  CHECK(in_module("decoder.denoiser.x", "decoder"));
  CHECK_FALSE(in_module("decoderx.y", "decoder"));
}
