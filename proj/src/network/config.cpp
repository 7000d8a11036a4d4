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

#include "moseve/network/config.hpp"

#include <algorithm>

#include "moseve/errors.hpp"

namespace moseve::net {

void BackboneConfig::validate() const {
  if (stage_rates.size() != 4 || stage_widths.size() != 4 || stage_radii.size() != 4) {
    throw ValidationError("backbone: rates, widths and radii need four entries each");
  }
  if (stage_rates[0] != 1 || stage_rates[3] != 1) {
    throw ValidationError("backbone: first and last stage must keep full resolution (rate 1)");
  }
  if (std::any_of(stage_rates.begin(), stage_rates.end(), [](std::size_t r) { return r == 0; })) {
    throw ValidationError("backbone: sampling rates must be positive");
  }
  if (std::any_of(stage_widths.begin(), stage_widths.end(), [](std::size_t w) { return w == 0; })) {
    throw ValidationError("backbone: widths must be positive");
  }
  if (stage_widths[3] != stage_widths[2]) throw ValidationError("backbone: fusion stage must keep the stage-3 width");
  if (std::any_of(stage_radii.begin(), stage_radii.end(), [](double r) { return !(r > 0.0); })) {
    throw ValidationError("backbone: radii must be positive");
  }
  if (k < 1 || stride < 1) throw ValidationError("backbone: k and stride must be at least 1");
  if (!(coord_scale > 0.0) || !(velocity_scale > 0.0)) throw ValidationError("backbone: scales must be positive");
}

std::vector<std::size_t> BackboneConfig::stage_counts(std::size_t n) const {
  std::vector<std::size_t> counts;
  std::size_t current = n;
  for (std::size_t r : stage_rates) {
    current = std::max<std::size_t>(1, current / r);
    counts.push_back(current);
  }
  return counts;
}

void BackboneConfig::to_kv(KeyValues& kv, const std::string& prefix) const {
  kv.set(prefix + "stage_rates", stage_rates);
  kv.set(prefix + "stage_widths", stage_widths);
  kv.set(prefix + "stage_radii", stage_radii);
  kv.set(prefix + "k", k);
  kv.set(prefix + "stride", stride);
  kv.set(prefix + "coord_scale", coord_scale);
  kv.set(prefix + "velocity_scale", velocity_scale);
}

BackboneConfig BackboneConfig::from_kv(const KeyValues& kv, const std::string& prefix) {
  BackboneConfig c;
  c.stage_rates = kv.get_sizes(prefix + "stage_rates", c.stage_rates);
  c.stage_widths = kv.get_sizes(prefix + "stage_widths", c.stage_widths);
  c.stage_radii = kv.get_doubles(prefix + "stage_radii", c.stage_radii);
  c.k = static_cast<int>(kv.get_int(prefix + "k", c.k));
  c.stride = static_cast<int>(kv.get_int(prefix + "stride", c.stride));
  c.coord_scale = kv.get_double(prefix + "coord_scale", c.coord_scale);
  c.velocity_scale = kv.get_double(prefix + "velocity_scale", c.velocity_scale);
  c.validate();
  return c;
}

void EveConfig::validate() const {
  backbone.validate();
  if (head_sizes.empty() || head_sizes.back() != 1) throw ValidationError("eve: head must end in a single output");
  if (time_gap < 1) throw ValidationError("eve: time gap must be at least one frame");
}

void EveConfig::to_kv(KeyValues& kv, const std::string& prefix) const {
  backbone.to_kv(kv, prefix);
  kv.set(prefix + "head_sizes", head_sizes);
  kv.set(prefix + "time_gap", time_gap);
}

EveConfig EveConfig::from_kv(const KeyValues& kv, const std::string& prefix) {
  EveConfig c;
  c.backbone = BackboneConfig::from_kv(kv, prefix);
  c.head_sizes = kv.get_sizes(prefix + "head_sizes", c.head_sizes);
  c.time_gap = static_cast<int>(kv.get_int(prefix + "time_gap", c.time_gap));
  c.validate();
  return c;
}

std::string to_string(VelocityInput v) {
  switch (v) {
    case VelocityInput::kCompensated:
      return "compensated";
    case VelocityInput::kRaw:
      return "raw";
    case VelocityInput::kNone:
      return "none";
  }
  return "compensated";
}

VelocityInput velocity_input_from_string(const std::string& s) {
  if (s == "compensated") return VelocityInput::kCompensated;
  if (s == "raw") return VelocityInput::kRaw;
  if (s == "none") return VelocityInput::kNone;
  throw ValidationError("unknown velocity input mode '" + s + "' (expected compensated, raw or none)");
}

void MosConfig::validate() const {
  encoder.validate();
  if (decoder_widths.size() != 2) throw ValidationError("mos: decoder needs two upsampling widths");
  if (decoder_widths.back() != 32) throw ValidationError("mos: segmentation feature width must be 32");
  if (head_sizes.empty() || head_sizes.back() != 2) throw ValidationError("mos: head must end in two logits");
  if (!(class_weights[0] > 0.0) || !(class_weights[1] > 0.0)) {
    throw ValidationError("mos: class weights must be positive");
  }
  if (time_gap < 1) throw ValidationError("mos: time gap must be at least one frame");
}

void MosConfig::to_kv(KeyValues& kv, const std::string& prefix) const {
  encoder.to_kv(kv, prefix);
  kv.set(prefix + "decoder_widths", decoder_widths);
  kv.set(prefix + "head_sizes", head_sizes);
  kv.set(prefix + "class_weights", std::vector<double>{class_weights[0], class_weights[1]});
  kv.set(prefix + "velocity_input", to_string(velocity_input));
  kv.set(prefix + "time_gap", time_gap);
}

MosConfig MosConfig::from_kv(const KeyValues& kv, const std::string& prefix) {
  MosConfig c;
  c.encoder = BackboneConfig::from_kv(kv, prefix);
  c.decoder_widths = kv.get_sizes(prefix + "decoder_widths", c.decoder_widths);
  c.head_sizes = kv.get_sizes(prefix + "head_sizes", c.head_sizes);
  const auto w = kv.get_doubles(prefix + "class_weights", {c.class_weights[0], c.class_weights[1]});
  if (w.size() != 2) throw ValidationError("mos: class_weights needs two entries");
  c.class_weights = {w[0], w[1]};
  c.velocity_input = velocity_input_from_string(kv.get_string(prefix + "velocity_input", "compensated"));
  c.time_gap = static_cast<int>(kv.get_int(prefix + "time_gap", c.time_gap));
  c.validate();
  return c;
}

}  // namespace moseve::net
