// Copyright 2026, The radar-moseve Authors
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

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstring>

#include "moseve/autodiff/checkpoint.hpp"
#include "moseve/autodiff/grad_check.hpp"
#include "moseve/autodiff/ops.hpp"
#include "moseve/autodiff/optim.hpp"
#include "moseve/errors.hpp"
#include "support.hpp"

using namespace moseve;
using ad::Tensor;

TEST_CASE("affine matches the hand product") {
  const Tensor x = Tensor::from({2, 3}, {1, 2, 3, -1, 0, 2});
  const Tensor w = Tensor::from({3, 2}, {1, 0, 0, 1, 2, -1});
  const Tensor b = Tensor::from({2}, {0.5, -0.5});
  const Tensor y = ad::affine(x, w, b);
  CHECK(test::values(y) == std::vector<double>{1 + 6 + 0.5, 2 - 3 - 0.5, -1 + 4 + 0.5, 0 - 2 - 0.5});
  CHECK_THROWS_AS(ad::affine(x, Tensor::zeros({2, 2}), b), DimensionError);
}

TEST_CASE("backward of sum(x*w) gives w and x") {
  const Tensor x = Tensor::from({3}, {1, 2, 3}, true);
  const Tensor w = Tensor::from({3}, {-1, 0.5, 4}, true);
  ad::sum(ad::mul(x, w)).backward();
  CHECK(std::vector<double>(x.grad().begin(), x.grad().end()) == std::vector<double>{-1, 0.5, 4});
  CHECK(std::vector<double>(w.grad().begin(), w.grad().end()) == std::vector<double>{1, 2, 3});
}

TEST_CASE("leaf gradients accumulate across backward calls") {
  Tensor x = Tensor::from({2}, {1, 2}, true);
  ad::sum(ad::square(x)).backward();
  ad::sum(ad::square(x)).backward();
  CHECK(x.grad()[0] == doctest::Approx(4.0));
  CHECK(x.grad()[1] == doctest::Approx(8.0));
  x.zero_grad();
  CHECK(x.grad()[0] == 0.0);
}

TEST_CASE("backward requires a scalar") {
  const Tensor x = Tensor::from({2}, {1, 2}, true);
  CHECK_THROWS_AS(ad::square(x).backward(), ContractError);
}

TEST_CASE("no-grad guard stops recording") {
  const Tensor x = Tensor::from({2}, {1, 2}, true);
  {
    ad::NoGradGuard guard;
    CHECK_FALSE(ad::grad_enabled());
    CHECK_FALSE(ad::square(x).requires_grad());
  }
  CHECK(ad::grad_enabled());
  CHECK(ad::square(x).requires_grad());
}

TEST_CASE("softmax rows sum to one and match exp ratios") {
  std::mt19937_64 rng(3);
  const Tensor x = test::random_tensor(rng, {5, 4}, false, 20.0);
  const Tensor s = ad::softmax_lastdim(x);
  for (std::size_t r = 0; r < 5; ++r) {
    double total = 0.0, denom = 0.0, mx = -1e300;
    for (std::size_t c = 0; c < 4; ++c) mx = std::max(mx, x.at(r, c));
    for (std::size_t c = 0; c < 4; ++c) denom += std::exp(x.at(r, c) - mx);
    for (std::size_t c = 0; c < 4; ++c) {
      total += s.at(r, c);
      CHECK(s.at(r, c) == doctest::Approx(std::exp(x.at(r, c) - mx) / denom).epsilon(1e-12));
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  const Tensor ls = ad::log_softmax_lastdim(x);
  for (std::size_t i = 0; i < ls.numel(); ++i) CHECK(std::exp(ls[i]) == doctest::Approx(s[i]).epsilon(1e-12));
}

TEST_CASE("softmax_groups normalizes each block per column") {
  std::mt19937_64 rng(4);
  const Tensor x = test::random_tensor(rng, {6, 3}, false, 5.0);
  const Tensor s = ad::softmax_groups(x, 3);
  const Tensor g = ad::group_sum(s, 3);
  CHECK(g.shape() == ad::Shape{2, 3});
  for (std::size_t i = 0; i < g.numel(); ++i) CHECK(std::abs(g[i] - 1.0) < 1e-12);
  CHECK_THROWS_AS(ad::softmax_groups(x, 4), DimensionError);
}

TEST_CASE("gather_rows scatter-adds repeated indices") {
  const Tensor src = Tensor::from({3, 2}, {1, 2, 3, 4, 5, 6}, true);
  const std::vector<std::size_t> idx{2, 0, 2};
  const Tensor g = ad::gather_rows(src, idx);
  CHECK(test::values(g) == std::vector<double>{5, 6, 1, 2, 5, 6});
  ad::sum(g).backward();
  CHECK(std::vector<double>(src.grad().begin(), src.grad().end()) == std::vector<double>{1, 1, 0, 0, 2, 2});
  const std::vector<std::size_t> bad{3};
  CHECK_THROWS_AS(ad::gather_rows(src, bad), IndexError);
}

TEST_CASE("fused gather ops equal their compositions") {
  std::mt19937_64 rng(21);
  const Tensor a = test::random_tensor(rng, {4, 3});
  const Tensor b = test::random_tensor(rng, {5, 3});
  const Tensor c = test::random_tensor(rng, {6, 3});
  const Tensor v = test::random_tensor(rng, {5, 3});
  const std::vector<std::size_t> ra{0, 0, 1, 3, 3, 2}, rb{4, 1, 1, 0, 2, 4};
  CHECK(test::values(ad::gather_difference(a, ra, b, rb, c)) ==
        test::values(ad::add(ad::sub(ad::gather_rows(a, ra), ad::gather_rows(b, rb)), c)));
  const Tensor w = ad::softmax_groups(c, 3);
  const auto fused = test::values(ad::weighted_gather_sum(w, v, rb, c, 3));
  const auto plain = test::values(ad::group_sum(ad::mul(w, ad::add(ad::gather_rows(v, rb), c)), 3));
  REQUIRE(fused.size() == plain.size());
  for (std::size_t i = 0; i < fused.size(); ++i) CHECK(fused[i] == doctest::Approx(plain[i]).epsilon(1e-14));

  CHECK(ad::grad_check([&] { return ad::gather_difference(a, ra, b, rb, c); }, {a, b, c}, 1e-6).passed);
  const Tensor wl = test::random_tensor(rng, {6, 3});
  CHECK(ad::grad_check([&] { return ad::weighted_gather_sum(wl, v, rb, c, 2); }, {wl, v, c}, 1e-6).passed);
  const std::vector<std::size_t> bad{0, 0, 9, 0, 0, 0};
  CHECK_THROWS_AS(ad::weighted_gather_sum(wl, v, bad, c, 3), IndexError);
  CHECK_THROWS_AS(ad::weighted_gather_sum(wl, v, rb, c, 4), DimensionError);
}

TEST_CASE("weighted_nll equals the hand formula") {
  const Tensor logp = Tensor::from({2, 2}, {std::log(0.25), std::log(0.75), std::log(0.6), std::log(0.4)});
  const std::vector<int> labels{1, 0};
  const std::vector<double> weights{2.0, 0.5};
  const double expected = -(0.5 * std::log(0.75) + 2.0 * std::log(0.6)) / 2.0;
  CHECK(ad::weighted_nll(logp, labels, weights).item() == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("grad_check accepts correct gradients and flags a wrong one") {
  std::mt19937_64 rng(9);
  const Tensor x = test::random_tensor(rng, {4, 3});
  const Tensor w = test::random_tensor(rng, {3, 2});
  const Tensor b = test::random_tensor(rng, {2});
  auto fragment = [&] { return ad::softmax_lastdim(ad::relu(ad::affine(x, w, b))); };
  CHECK(ad::grad_check(fragment, {x, w, b}, 1e-6).passed);

  // A forward pass whose recorded backward drops a factor of two.
  auto broken = [&] {
    auto y = ad::square(x);
    return Tensor::make_result(y.shape(), test::values(y), {x}, [](ad::TensorNode& self) {
      auto& in = *self.parents[0];
      in.ensure_grad();
      for (std::size_t i = 0; i < in.value.size(); ++i) in.grad[i] += self.grad[i] * in.value[i];
    });
  };
  const auto r = ad::grad_check(broken, {x}, 1e-4);
  CHECK_FALSE(r.passed);
  CHECK(r.max_rel_error > 0.3);
}

TEST_CASE("tensor storage is 64-byte aligned and reused buffers are fully overwritten") {
  for (std::size_t n : {1u, 3u, 8u, 100u, 4096u, 70000u}) {
    const Tensor t = Tensor::full({n}, 2.5);
    CHECK(reinterpret_cast<std::uintptr_t>(t.data().data()) % 64 == 0);
  }
  // Free a buffer full of NaN, then take a same-sized one back from the pool.
  { const Tensor junk = Tensor::full({64, 8}, std::nan("")); }
  const Tensor a = Tensor::full({64, 8}, 1.0);
  const Tensor y = ad::relu(ad::add(a, a));
  CHECK(reinterpret_cast<std::uintptr_t>(y.data().data()) % 64 == 0);
  for (double v : y.data()) CHECK(v == 2.0);
}

TEST_CASE("grad_check steps past a nearby ReLU kink") {
  // The kink sits 5e-6 away: a 1e-5 central difference straddles it and reads
  // (1.5e-5 - 0) / 2e-5 = 0.75 instead of the true slope 1.
  const Tensor x = Tensor::from({1}, {5e-6}, true);
  auto fragment = [&] { return ad::relu(x); };
  ad::GradCheckOptions plain;
  plain.refinements = 0;
  const auto r0 = ad::grad_check(fragment, {x}, 1e-4, plain);
  CHECK_FALSE(r0.passed);
  CHECK(r0.max_rel_error == doctest::Approx(0.25).epsilon(1e-6));
  const auto r = ad::grad_check(fragment, {x}, 1e-4);
  CHECK(r.passed);
  CHECK(r.refined == 1);
}

TEST_CASE("adam first step moves each weight by lr against the gradient sign") {
  // With zero initial moments the bias-corrected first step is lr * g / (|g| + eps).
  const Tensor p = Tensor::from({3}, {1.0, -2.0, 0.5}, true);
  ad::ParameterList params{{"p", p}};
  ad::AdamOptions opt;
  opt.learning_rate = 0.1;
  opt.weight_decay = 0.0;
  ad::AdamState state(params, opt);
  ad::sum(ad::mul(p, Tensor::from({3}, {3.0, -0.5, 0.0}))).backward();
  ad::adam_step(params, state);
  CHECK(p[0] == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(-1.9).epsilon(1e-9));
  CHECK(p[2] == 0.5);
  CHECK(state.step() == 1);
}

TEST_CASE("adam weight decay is added to the gradient") {
  Tensor p = Tensor::from({1}, {2.0}, true);
  ad::ParameterList params{{"p", p}};
  ad::AdamOptions opt;
  opt.learning_rate = 0.01;
  opt.weight_decay = 0.5;
  ad::AdamState state(params, opt);
  p.zero_grad();
  ad::adam_step(params, state);  // effective gradient 0.5 * 2 = 1
  CHECK(p[0] == doctest::Approx(1.99).epsilon(1e-9));
}

TEST_CASE("step schedule halves every period") {
  const ad::LrSchedule s{1e-3, 0.5, 20};
  CHECK(s.rate(0) == 1e-3);
  CHECK(s.rate(19) == 1e-3);
  CHECK(s.rate(20) == 5e-4);
  CHECK(s.rate(59) == 2.5e-4);
}

TEST_CASE("checkpoint encoding round-trips bit-exactly") {
  ad::CheckpointData d;
  d.metadata["model"] = "eve";
  d.metadata["seed"] = "18446744073709551615";
  d.arrays.push_back({"a.w", {2, 2}, {1.0 / 3.0, -0.0, 1e-300, std::nextafter(1.0, 2.0)}});
  d.arrays.push_back({"b", {1}, {42.0}});
  const auto bytes = ad::encode_checkpoint(d);
  const auto back = ad::decode_checkpoint(bytes);
  CHECK(back.metadata == d.metadata);
  REQUIRE(back.arrays.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.arrays[i].name == d.arrays[i].name);
    CHECK(back.arrays[i].shape == d.arrays[i].shape);
    CHECK(std::memcmp(back.arrays[i].values.data(), d.arrays[i].values.data(), 8 * d.arrays[i].values.size()) == 0);
  }
  auto truncated = bytes;
  truncated.resize(bytes.size() - 3);
  CHECK_THROWS_AS(ad::decode_checkpoint(truncated), ParseError);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(ad::decode_checkpoint(bad), ParseError);
}

TEST_CASE("restore rejects missing or misshapen arrays") {
  const Tensor p = Tensor::zeros({2, 2}, true);
  ad::ParameterList params{{"p", p}};
  CHECK_THROWS(ad::restore(params, {}));
  CHECK_THROWS(ad::restore(params, {{"p", {4}, {1, 2, 3, 4}}}));
  ad::restore(params, {{"p", {2, 2}, {1, 2, 3, 4}}});
  CHECK(test::values(p) == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("duplicate parameter names are refused") {
  const Tensor p = Tensor::zeros({1}, true);
  CHECK_THROWS_AS(ad::check_unique_names({{"a", p}, {"a", p}}), ContractError);
}
