// Copyright 2026 The RRoI Toolkit Authors. All Rights Reserved.
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
// ==============================================================================

#ifndef RROI_ENCODING_H_
#define RROI_ENCODING_H_

#include <array>

#include "rroi/geometry.h"

namespace rroi {

// Regression offsets of a target box in the frame of an anchor box.
// tx, ty are normalized by the anchor sides, tw, th are log ratios and
// ttheta is the angle difference in turns.
struct OffsetVector {
  double tx = 0.0;
  double ty = 0.0;
  double tw = 0.0;
  double th = 0.0;
  double ttheta = 0.0;

  std::array<double, 5> as_array() const { return {tx, ty, tw, th, ttheta}; }
  static OffsetVector FromArray(const std::array<double, 5>& v) {
    return {v[0], v[1], v[2], v[3], v[4]};
  }

  friend bool operator==(const OffsetVector&, const OffsetVector&) = default;
};

// Bound applied to tw and th before exponentiation in decode().
inline constexpr double kLogScaleClip = 4.0;

// Context enlargement used before second-stage warping.
inline constexpr double kContextLongFactor = 1.2;
inline constexpr double kContextShortFactor = 1.4;

// Offsets of `target` relative to `anchor`:
//   tx = ((x* - xr) cos(tr) + (y* - yr) sin(tr)) / wr
//   ty = ((y* - yr) cos(tr) - (x* - xr) sin(tr)) / hr
//   tw = log(w* / wr), th = log(h* / hr)
//   ttheta = ((t* - tr) mod 2pi) / 2pi, with mod into [0, 2pi)
// Neither box is canonicalized first.
OffsetVector encode(const OrientedBox& anchor, const OrientedBox& target);

// Inverse of encode(), followed by canonicalize(). tw and th are clipped to
// [-kLogScaleClip, kLogScaleClip].
OffsetVector clip_log_scales(const OffsetVector& offsets);
OrientedBox decode(const OrientedBox& anchor, const OffsetVector& offsets);

// Same offsets with ttheta moved into [-0.5, 0.5) by a whole turn. decode()
// gives the same box for either form; regression heads whose anchors are
// already close to the target need this form so that small clockwise and
// counter-clockwise errors stay close in value.
OffsetVector wrap_angle_offset(const OffsetVector& offsets);

// Horizontal special case: both boxes are lifted with theta = 0, so the
// result reduces to (dx / w, dy / h, log ratios, 0).
OffsetVector encode_horizontal(const AlignedBox& anchor, const AlignedBox& target);

// Scales the long side by long_factor and the short side by short_factor,
// keeping center and orientation. Both factors must be >= 1.
OrientedBox enlarge_context(const OrientedBox& box,
                            double long_factor = kContextLongFactor,
                            double short_factor = kContextShortFactor);

}  // namespace rroi

#endif  // RROI_ENCODING_H_
