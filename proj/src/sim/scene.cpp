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

#include "moseve/sim/scene.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include "moseve/errors.hpp"

namespace moseve::sim {

namespace {

struct Scatterer {
  std::size_t track = 0;
  // Offset from the track center (world position for the background).
  Vec3 offset{};
};

double norm(const Vec3& p) { return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]); }

std::size_t uniform_count(Rng& rng, std::size_t lo, std::size_t hi) { return lo + uniform_index(rng, hi - lo + 1); }

}  // namespace

void SceneConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("scene: " + what); };
  if (!(velocity_noise >= 0.0) || !(position_noise >= 0.0)) fail("noise sigmas must be non-negative");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must lie in [0, 1)");
  if (object_scatterers_min < 1 || object_scatterers_min > object_scatterers_max) {
    fail("object scatterer range must be non-empty and start at 1 or more");
  }
  if (!(object_extent >= 0.0)) fail("object extent must be non-negative");
  if (!(object_speed_min >= 0.0 && object_speed_min <= object_speed_max && std::isfinite(object_speed_max))) {
    fail("object speed range must be finite, non-negative and ordered");
  }
  if (!(ego_speed_min <= ego_speed_max && std::isfinite(ego_speed_min) && std::isfinite(ego_speed_max))) {
    fail("ego speed range must be finite and ordered");
  }
  for (double s : ego_profile) {
    if (!std::isfinite(s)) fail("ego profile entries must be finite");
  }
  if (!ego_profile.empty() && ego_profile.size() != frames) fail("ego profile needs one speed per frame");
  if (ego_segment_frames < 1) fail("ego segment length must be at least one frame");
  if (!(fov_x > object_extent)) fail("fov_x must exceed the object extent");
  if (!(fov_y_min > 0.0 && fov_y_max - fov_y_min > 2.0 * object_extent)) {
    fail("fov y range must start ahead of the sensor and fit an object");
  }
  if (!(fov_z_min < fov_z_max)) fail("fov z range must be ordered");
  if (frames < 1) fail("at least one frame required");
  if (!(frame_rate > 0.0)) fail("frame rate must be positive");
}

void SceneConfig::to_kv(KeyValues& kv, const std::string& prefix) const {
  kv.set(prefix + "static_count", static_count);
  kv.set(prefix + "static_object_count", static_object_count);
  kv.set(prefix + "moving_count", moving_count);
  kv.set(prefix + "object_scatterers_min", object_scatterers_min);
  kv.set(prefix + "object_scatterers_max", object_scatterers_max);
  kv.set(prefix + "object_extent", object_extent);
  kv.set(prefix + "object_speed_min", object_speed_min);
  kv.set(prefix + "object_speed_max", object_speed_max);
  kv.set(prefix + "ego_profile", ego_profile);
  kv.set(prefix + "ego_speed_min", ego_speed_min);
  kv.set(prefix + "ego_speed_max", ego_speed_max);
  kv.set(prefix + "ego_segment_frames", ego_segment_frames);
  kv.set(prefix + "fov_x", fov_x);
  kv.set(prefix + "fov_y_min", fov_y_min);
  kv.set(prefix + "fov_y_max", fov_y_max);
  kv.set(prefix + "fov_z_min", fov_z_min);
  kv.set(prefix + "fov_z_max", fov_z_max);
  kv.set(prefix + "velocity_noise", velocity_noise);
  kv.set(prefix + "position_noise", position_noise);
  kv.set(prefix + "dropout", dropout);
  kv.set(prefix + "frames", frames);
  kv.set(prefix + "frame_rate", frame_rate);
  kv.set(prefix + "seed", std::to_string(seed));
}

SceneConfig SceneConfig::from_kv(const KeyValues& kv, const std::string& prefix) {
  SceneConfig c;
  auto size = [&](const char* key, std::size_t fallback) {
    const auto v = kv.get_int(prefix + key, static_cast<std::int64_t>(fallback));
    if (v < 0) throw ValidationError("key '" + prefix + key + "' must be non-negative");
    return static_cast<std::size_t>(v);
  };
  c.static_count = size("static_count", c.static_count);
  c.static_object_count = size("static_object_count", c.static_object_count);
  c.moving_count = size("moving_count", c.moving_count);
  c.object_scatterers_min = size("object_scatterers_min", c.object_scatterers_min);
  c.object_scatterers_max = size("object_scatterers_max", c.object_scatterers_max);
  c.object_extent = kv.get_double(prefix + "object_extent", c.object_extent);
  c.object_speed_min = kv.get_double(prefix + "object_speed_min", c.object_speed_min);
  c.object_speed_max = kv.get_double(prefix + "object_speed_max", c.object_speed_max);
  c.ego_profile = kv.get_doubles(prefix + "ego_profile", c.ego_profile);
  c.ego_speed_min = kv.get_double(prefix + "ego_speed_min", c.ego_speed_min);
  c.ego_speed_max = kv.get_double(prefix + "ego_speed_max", c.ego_speed_max);
  c.ego_segment_frames = size("ego_segment_frames", c.ego_segment_frames);
  c.fov_x = kv.get_double(prefix + "fov_x", c.fov_x);
  c.fov_y_min = kv.get_double(prefix + "fov_y_min", c.fov_y_min);
  c.fov_y_max = kv.get_double(prefix + "fov_y_max", c.fov_y_max);
  c.fov_z_min = kv.get_double(prefix + "fov_z_min", c.fov_z_min);
  c.fov_z_max = kv.get_double(prefix + "fov_z_max", c.fov_z_max);
  c.velocity_noise = kv.get_double(prefix + "velocity_noise", c.velocity_noise);
  c.position_noise = kv.get_double(prefix + "position_noise", c.position_noise);
  c.dropout = kv.get_double(prefix + "dropout", c.dropout);
  c.frames = size("frames", c.frames);
  c.frame_rate = kv.get_double(prefix + "frame_rate", c.frame_rate);
  const std::string seed = kv.get_string(prefix + "seed", "0");
  const auto res = std::from_chars(seed.data(), seed.data() + seed.size(), c.seed);
  if (res.ec != std::errc() || res.ptr != seed.data() + seed.size()) {
    throw ValidationError("key '" + prefix + "seed': expected an unsigned integer, got '" + seed + "'");
  }
  c.validate();
  return c;
}

double measure_point(const Vec3& ego_v, const Vec3& object_v, const Vec3& p, double sigma, Rng& rng) {
  const double r = norm(p);
  if (!(r > 0.0)) throw ArgumentError("measure_point: point at the sensor origin");
  double v = 0.0;
  for (int i = 0; i < 3; ++i) v += (ego_v[i] - object_v[i]) * p[i];
  v /= r;
  if (sigma > 0.0) v += std::normal_distribution<double>(0.0, sigma)(rng);
  return v;
}

std::vector<double> ego_speed_profile(const SceneConfig& config) {
  if (!config.ego_profile.empty()) return config.ego_profile;
  Rng rng(mix_seed({config.seed, 1}));
  std::vector<double> out(config.frames);
  double speed = 0.0;
  for (std::size_t f = 0; f < config.frames; ++f) {
    if (f % config.ego_segment_frames == 0) speed = uniform_real(rng, config.ego_speed_min, config.ego_speed_max);
    out[f] = speed;
  }
  return out;
}

LabeledSequence simulate_sequence(const SceneConfig& config) {
  config.validate();
  if (config.static_count == 0 && config.static_object_count == 0 && config.moving_count == 0) {
    throw ArgumentError("simulate_sequence: scene has no scatterers");
  }
  const std::size_t frames = config.frames;
  const double dt = 1.0 / config.frame_rate;
  const auto speeds = ego_speed_profile(config);
  std::vector<double> ego_y(frames, 0.0);
  for (std::size_t f = 1; f < frames; ++f) ego_y[f] = ego_y[f - 1] + speeds[f - 1] * dt;
  const auto [ego_lo, ego_hi] = std::minmax_element(ego_y.begin(), ego_y.end());
  const double y_lo = config.fov_y_min + *ego_lo, y_hi = config.fov_y_max + *ego_hi;

  LabeledSequence seq;
  seq.config = config;
  Rng layout(mix_seed({config.seed, 2}));
  std::vector<Scatterer> scatterers;

  ObjectTrack background;
  background.positions.assign(frames, Vec3{});
  background.velocities.assign(frames, Vec3{});
  seq.tracks.push_back(background);
  for (std::size_t i = 0; i < config.static_count; ++i) {
    scatterers.push_back({0,
                          {uniform_real(layout, -config.fov_x, config.fov_x),
                           uniform_real(layout, y_lo, y_hi),
                           uniform_real(layout, config.fov_z_min, config.fov_z_max)}});
  }

  const double ext = config.object_extent;
  auto add_cluster = [&](ObjectTrack track) {
    const std::size_t n = uniform_count(layout, config.object_scatterers_min, config.object_scatterers_max);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ext * std::sqrt(uniform_unit(layout));
      const double phi = uniform_real(layout, 0.0, 2.0 * std::numbers::pi);
      scatterers.push_back({track.id,
                            {r * std::cos(phi), r * std::sin(phi),
                             uniform_real(layout, config.fov_z_min, config.fov_z_max)}});
    }
    seq.tracks.push_back(std::move(track));
  };

  for (std::size_t i = 0; i < config.static_object_count; ++i) {
    ObjectTrack t;
    t.id = seq.tracks.size();
    t.extent = ext;
    const Vec3 c{uniform_real(layout, -config.fov_x + ext, config.fov_x - ext),
                 uniform_real(layout, y_lo + ext, y_hi - ext), 0.0};
    t.positions.assign(frames, c);
    t.velocities.assign(frames, Vec3{});
    add_cluster(std::move(t));
  }

  // Movers are placed so that their center sits inside the field of view at
  // the middle frame.
  const std::size_t mid = (frames - 1) / 2;
  for (std::size_t i = 0; i < config.moving_count; ++i) {
    ObjectTrack t;
    t.id = seq.tracks.size();
    t.kind = geom::Motion::kMoving;
    t.extent = ext;
    const double speed = uniform_real(layout, config.object_speed_min, config.object_speed_max);
    const double heading = uniform_real(layout, 0.0, 2.0 * std::numbers::pi);
    const Vec3 vel{speed * std::cos(heading), speed * std::sin(heading), 0.0};
    const Vec3 c_mid{uniform_real(layout, -config.fov_x + ext, config.fov_x - ext),
                     ego_y[mid] + uniform_real(layout, config.fov_y_min + ext, config.fov_y_max - ext), 0.0};
    for (std::size_t f = 0; f < frames; ++f) {
      const double tau = (static_cast<double>(f) - static_cast<double>(mid)) * dt;
      t.positions.push_back({c_mid[0] + vel[0] * tau, c_mid[1] + vel[1] * tau, 0.0});
      t.velocities.push_back(vel);
    }
    add_cluster(std::move(t));
  }

  std::normal_distribution<double> pos_noise(0.0, config.position_noise > 0.0 ? config.position_noise : 1.0);
  for (std::size_t f = 0; f < frames; ++f) {
    Rng rng(mix_seed({config.seed, 3, f}));
    const Vec3 ego_v{0.0, speeds[f], 0.0};
    geom::RadarFrame frame;
    frame.timestamp = static_cast<double>(f) * dt;
    frame.ego_v = speeds[f];
    std::vector<geom::Motion> labels;
    for (const auto& s : scatterers) {
      if (uniform_unit(rng) < config.dropout) continue;
      const ObjectTrack& track = seq.tracks[s.track];
      const Vec3& c = track.positions[f];
      const Vec3 p{c[0] + s.offset[0], c[1] + s.offset[1] - ego_y[f], c[2] + s.offset[2]};
      if (std::abs(p[0]) > config.fov_x || p[1] < config.fov_y_min || p[1] > config.fov_y_max ||
          p[2] < config.fov_z_min || p[2] > config.fov_z_max) {
        continue;
      }
      geom::RadarPoint q{p[0], p[1], p[2], measure_point(ego_v, track.velocities[f], p, config.velocity_noise, rng)};
      if (config.position_noise > 0.0) {
        q.x += pos_noise(rng);
        q.y += pos_noise(rng);
        q.z += pos_noise(rng);
      }
      frame.points.push_back(q);
      labels.push_back(track.kind);
    }
    for (std::size_t i = frame.points.size(); i > 1; --i) {
      const std::size_t j = uniform_index(rng, i);
      std::swap(frame.points[i - 1], frame.points[j]);
      std::swap(labels[i - 1], labels[j]);
    }
    frame.labels = std::move(labels);
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

}  // namespace moseve::sim
