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

#include "moseve/network/pipeline.hpp"

#include "moseve/errors.hpp"
#include "moseve/geometry/velocity.hpp"

namespace moseve::net {

MosInput prepare_mos_frame(const RadarFrame& frame, double ego_v, VelocityInput mode) {
  MosInput out;
  if (mode == VelocityInput::kCompensated) {
    auto comp = geom::velocity_compensate(ego_v, frame);
    out.frame = std::move(comp.frame);
    out.kept = std::move(comp.kept);
    out.dropped = comp.dropped;
    return out;
  }
  frame.validate();
  out.frame = frame;
  out.kept.resize(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) out.kept[i] = i;
  if (mode == VelocityInput::kNone) {
    for (auto& p : out.frame.points) p.v = 0.0;
  }
  return out;
}

std::vector<geom::Motion> expand_labels(const std::vector<geom::Motion>& kept_labels,
                                        const std::vector<std::size_t>& kept, std::size_t source_size) {
  if (kept_labels.size() != kept.size()) throw DimensionError("expand_labels: label and index counts differ");
  std::vector<geom::Motion> out(source_size, geom::Motion::kStatic);
  for (std::size_t i = 0; i < kept.size(); ++i) out.at(kept[i]) = kept_labels[i];
  return out;
}

PipelineResult predict_with_velocity(const MosNetwork& mos, const RadarFrame& frame_t, const RadarFrame& frame_prev,
                                     double ego_v_t, double ego_v_prev, std::uint64_t seed) {
  if (frame_t.empty() || frame_prev.empty()) throw ArgumentError("predict: empty input frame");
  const auto mode = mos.config().velocity_input;
  const MosInput cur = prepare_mos_frame(frame_t, ego_v_t, mode);
  const MosInput prev = prepare_mos_frame(frame_prev, ego_v_prev, mode);
  if (cur.frame.empty() || prev.frame.empty()) throw ArgumentError("predict: no point survives compensation");
  PipelineResult out;
  out.ego_v = ego_v_t;
  out.dropped = cur.dropped;
  out.labels = expand_labels(mos.predict(cur.frame, prev.frame, seed), cur.kept, frame_t.size());
  return out;
}

PipelineResult predict_pipeline(const EveNetwork& eve, const MosNetwork& mos, const RadarFrame& frame_t,
                                const RadarFrame& frame_prev, std::uint64_t seed) {
  const double v_hat = eve.predict(frame_t, frame_prev, mix_seed({seed, 0xe}));
  return predict_with_velocity(mos, frame_t, frame_prev, v_hat, v_hat, mix_seed({seed, 0xf}));
}

}  // namespace moseve::net
