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

#pragma once

#include <cstdint>
#include <vector>

#include "moseve/network/models.hpp"

namespace moseve::net {

/// A frame as the MOS network sees it, with the source index of each point.
struct MosInput {
  RadarFrame frame;
  std::vector<std::size_t> kept;
  std::size_t dropped = 0;
};

/// Applies the velocity channel mode: Eq. 7 compensation with `ego_v`, the raw
/// measurement, or zeros.
MosInput prepare_mos_frame(const RadarFrame& frame, double ego_v, VelocityInput mode);

/// Scatters labels predicted on kept points back to the source frame; points
/// without a prediction are static.
std::vector<geom::Motion> expand_labels(const std::vector<geom::Motion>& kept_labels,
                                        const std::vector<std::size_t>& kept, std::size_t source_size);

struct PipelineResult {
  double ego_v = 0.0;
  std::vector<geom::Motion> labels;
  /// Points of the current frame left out of compensation.
  std::size_t dropped = 0;
};

/// MOS on a frame pair given per-frame ego speeds (estimates or ground truth).
PipelineResult predict_with_velocity(const MosNetwork& mos, const RadarFrame& frame_t, const RadarFrame& frame_prev,
                                     double ego_v_t, double ego_v_prev, std::uint64_t seed);

/// EVE on the pair, compensation of both frames with the estimate, then MOS.
PipelineResult predict_pipeline(const EveNetwork& eve, const MosNetwork& mos, const RadarFrame& frame_t,
                                const RadarFrame& frame_prev, std::uint64_t seed);

}  // namespace moseve::net
