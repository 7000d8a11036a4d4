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

#include <filesystem>

#include "moseve/autodiff/ops.hpp"
#include "moseve/errors.hpp"
#include "moseve/network/losses.hpp"
#include "moseve/network/model_io.hpp"
#include "moseve/network/pipeline.hpp"
#include "moseve/sim/scene.hpp"
#include "support.hpp"
#include "support_net.hpp"

using namespace moseve;
using ad::Tensor;
using geom::Motion;
using geom::RadarFrame;
using geom::RadarPoint;

namespace {

RadarFrame static_frame(std::mt19937_64& rng, std::size_t n, double ego) {
  RadarFrame f;
  for (auto p : test::random_cloud(rng, n, 20.0)) {
    p.v = ego * p.y / p.range();
    f.points.push_back(p);
  }
  f.labels = std::vector<Motion>(n, Motion::kStatic);
  f.ego_v = ego;
  return f;
}

}  // namespace

TEST_CASE("doppler loss vanishes at the true speed and matches the L1 oracle elsewhere") {
  std::mt19937_64 rng(1);
  const auto f = static_frame(rng, 40, 6.5);
  const auto statics = net::static_points(f);
  CHECK(net::doppler_loss(Tensor::scalar(6.5), statics).item() < 1e-12);
  double oracle = 0.0;
  for (const auto& p : statics) oracle += std::abs(5.0 * p.y / p.range() - p.v);
  CHECK(net::doppler_loss(Tensor::scalar(5.0), statics).item() == doctest::Approx(oracle / 40).epsilon(1e-12));
  CHECK_THROWS_AS(net::doppler_loss(Tensor::scalar(5.0), {}), ArgumentError);
}

TEST_CASE("eve loss adds the squared error") {
  const std::vector<RadarPoint> statics{{0, 10, 0, 3.0}};
  // Point straight ahead: projection is v_hat itself.
  CHECK(net::eve_loss(Tensor::scalar(4.0), 3.5, statics).item() == doctest::Approx(1.0 + 0.25));
  CHECK(net::squared_error(Tensor::scalar(1.0), -1.0).item() == 4.0);
}

TEST_CASE("static_points needs labels") {
  RadarFrame f;
  f.points = {{1, 1, 0, 0}};
  CHECK_THROWS_AS(net::static_points(f), ArgumentError);
  f.labels = std::vector<Motion>{Motion::kMoving};
  CHECK(net::static_points(f).empty());
}

TEST_CASE("mos loss is class-weighted cross entropy") {
  const Tensor logits = Tensor::from({2, 2}, {0.0, 1.0, 2.0, -1.0});
  const std::vector<Motion> labels{Motion::kMoving, Motion::kStatic};
  const double l0 = -std::log(std::exp(1.0) / (1.0 + std::exp(1.0)));
  const double l1 = -std::log(std::exp(2.0) / (std::exp(2.0) + std::exp(-1.0)));
  CHECK(net::mos_loss(logits, labels, {0.5, 2.0}).item() == doctest::Approx((2.0 * l0 + 0.5 * l1) / 2).epsilon(1e-14));
}

TEST_CASE("inverse frequency weights") {
  const auto w = net::inverse_frequency_weights(300, 100);
  CHECK(w[1] / w[0] == doctest::Approx(3.0));
  CHECK(w[0] + w[1] == doctest::Approx(2.0));
  CHECK(net::inverse_frequency_weights(10, 0) == std::array<double, 2>{1.0, 1.0});
}

TEST_CASE("argmax labels") {
  const Tensor logits = Tensor::from({3, 2}, {0.0, 1.0, 1.0, 0.0, 0.5, 0.5});
  CHECK(net::argmax_labels(logits) == std::vector<Motion>{Motion::kMoving, Motion::kStatic, Motion::kStatic});
}

TEST_CASE("network outputs have the documented shapes and are seeded") {
  const auto seq = sim::simulate_sequence(test::small_scene(3));
  const auto& prev = seq.frames[0];
  const auto& cur = seq.frames[10];
  const net::EveNetwork eve(test::tiny_eve(), 1);
  const Tensor v = eve.forward(cur, prev, 5);
  CHECK(v.numel() == 1);
  CHECK(eve.predict(cur, prev, 5) == v.item());

  const net::MosNetwork mos(test::tiny_mos(), 1);
  const Tensor logits = mos.forward(cur, prev, 5);
  CHECK(logits.shape() == ad::Shape{cur.size(), 2});
  CHECK(mos.predict(cur, prev, 5) == mos.predict(cur, prev, 5));
  CHECK(net::argmax_labels(logits) == mos.predict(cur, prev, 5));
}

TEST_CASE("initialization is a function of the seed") {
  const net::EveNetwork a(test::tiny_eve(), 7), b(test::tiny_eve(), 7), c(test::tiny_eve(), 8);
  const auto pa = a.parameters(), pb = b.parameters(), pc = c.parameters();
  REQUIRE(pa.size() == pb.size());
  bool differs = false;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(test::values(pa[i].tensor) == test::values(pb[i].tensor));
    differs = differs || test::values(pa[i].tensor) != test::values(pc[i].tensor);
  }
  CHECK(differs);
  ad::check_unique_names(pa);
  ad::check_unique_names(net::MosNetwork(test::tiny_mos(), 1).parameters());
}

TEST_CASE("checkpoints reproduce predictions exactly") {
  const auto dir = std::filesystem::temp_directory_path() / "moseve_net_io";
  std::filesystem::create_directories(dir);
  const auto seq = sim::simulate_sequence(test::small_scene(4));
  const auto& prev = seq.frames[1];
  const auto& cur = seq.frames[11];

  net::MosConfig mc = test::tiny_mos();
  mc.velocity_input = net::VelocityInput::kRaw;
  mc.class_weights = {0.7, 1.3};
  const net::MosNetwork mos(mc, 3);
  KeyValues extra;
  extra.set("epoch", 4);
  net::save_mos(dir / "m.ckpt", mos, extra);
  const auto loaded = net::load_mos(dir / "m.ckpt");
  CHECK(loaded.metadata.get("epoch") == "4");
  CHECK(loaded.net.config().velocity_input == net::VelocityInput::kRaw);
  CHECK(loaded.net.config().class_weights == mc.class_weights);
  CHECK(test::values(loaded.net.forward(cur, prev, 9)) == test::values(mos.forward(cur, prev, 9)));

  const net::EveNetwork eve(test::tiny_eve(), 3);
  net::save_eve(dir / "e.ckpt", eve, {});
  CHECK(net::load_eve(dir / "e.ckpt").net.predict(cur, prev, 2) == eve.predict(cur, prev, 2));
  CHECK_THROWS_AS(net::load_mos(dir / "e.ckpt"), ValidationError);
  CHECK_THROWS_AS(net::load_eve(dir / "m.ckpt"), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("velocity input modes") {
  std::mt19937_64 rng(5);
  auto f = static_frame(rng, 10, 3.0);
  f.points.push_back({0, 0, 1, 2.0});
  f.labels->push_back(Motion::kStatic);
  const auto comp = net::prepare_mos_frame(f, 3.0, net::VelocityInput::kCompensated);
  CHECK(comp.dropped == 1);
  CHECK(comp.frame.size() == 10);
  for (const auto& p : comp.frame.points) CHECK(std::abs(p.v) < 1e-12);
  const auto raw = net::prepare_mos_frame(f, 3.0, net::VelocityInput::kRaw);
  CHECK(raw.frame.points == f.points);
  const auto none = net::prepare_mos_frame(f, 3.0, net::VelocityInput::kNone);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(none.frame.points[i].v == 0.0);
    CHECK(none.frame.points[i].x == f.points[i].x);
  }
}

TEST_CASE("expand labels marks dropped points static") {
  const auto out = net::expand_labels({Motion::kMoving, Motion::kMoving}, {0, 2}, 4);
  CHECK(out == std::vector<Motion>{Motion::kMoving, Motion::kStatic, Motion::kMoving, Motion::kStatic});
}

TEST_CASE("pipeline runs end to end") {
  const auto seq = sim::simulate_sequence(test::small_scene(6));
  const net::EveNetwork eve(test::tiny_eve(), 1);
  const net::MosNetwork mos(test::tiny_mos(), 1);
  const auto r = net::predict_pipeline(eve, mos, seq.frames[10], seq.frames[0], 3);
  CHECK(r.labels.size() == seq.frames[10].size());
  CHECK(std::isfinite(r.ego_v));
  RadarFrame empty;
  CHECK_THROWS_AS(net::predict_with_velocity(mos, empty, seq.frames[0], 1.0, 1.0, 3), ArgumentError);
}

TEST_CASE("config validation") {
  auto c = test::tiny_eve();
  c.backbone.k = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  auto m = test::tiny_mos();
  m.head_sizes.back() = 3;
  CHECK_THROWS_AS(m.validate(), ValidationError);
  CHECK_THROWS(net::velocity_input_from_string("doppler"));
  KeyValues kv;
  test::tiny_mos().to_kv(kv);
  const auto back = net::MosConfig::from_kv(kv);
  CHECK(back.decoder_widths == test::tiny_mos().decoder_widths);
  CHECK(back.encoder.stage_radii == test::tiny_mos().encoder.stage_radii);
}
