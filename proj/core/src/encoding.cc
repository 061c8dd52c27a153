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

#include "rroi/encoding.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rroi/errors.h"

namespace rroi {

OffsetVector encode(const OrientedBox& anchor, const OrientedBox& target) {
  const double c = std::cos(anchor.theta());
  const double s = std::sin(anchor.theta());
  const double dx = target.cx() - anchor.cx();
  const double dy = target.cy() - anchor.cy();

  double dtheta = std::fmod(target.theta() - anchor.theta(), 2.0 * kPi);
  if (dtheta < 0.0) dtheta += 2.0 * kPi;
  double ttheta = dtheta / (2.0 * kPi);
  if (ttheta >= 1.0) ttheta = 0.0;

  return {(dx * c + dy * s) / anchor.w(),
          (dy * c - dx * s) / anchor.h(),
          std::log(target.w() / anchor.w()),
          std::log(target.h() / anchor.h()),
          ttheta};
}

OffsetVector clip_log_scales(const OffsetVector& offsets) {
  OffsetVector out = offsets;
  out.tw = std::clamp(out.tw, -kLogScaleClip, kLogScaleClip);
  out.th = std::clamp(out.th, -kLogScaleClip, kLogScaleClip);
  return out;
}

OrientedBox decode(const OrientedBox& anchor, const OffsetVector& offsets) {
  const OffsetVector t = clip_log_scales(offsets);
  const double c = std::cos(anchor.theta());
  const double s = std::sin(anchor.theta());
  const double lx = t.tx * anchor.w();
  const double ly = t.ty * anchor.h();
  return canonicalize(anchor.cx() + lx * c - ly * s,
                      anchor.cy() + lx * s + ly * c,
                      anchor.w() * std::exp(t.tw),
                      anchor.h() * std::exp(t.th),
                      anchor.theta() + 2.0 * kPi * t.ttheta);
}

OffsetVector wrap_angle_offset(const OffsetVector& offsets) {
  OffsetVector out = offsets;
  out.ttheta -= std::floor(out.ttheta + 0.5);
  return out;
}

OffsetVector encode_horizontal(const AlignedBox& anchor, const AlignedBox& target) {
  return encode(lift(anchor), lift(target));
}

OrientedBox enlarge_context(const OrientedBox& box, double long_factor,
                            double short_factor) {
  if (!(long_factor >= 1.0) || !(short_factor >= 1.0) ||
      !std::isfinite(long_factor) || !std::isfinite(short_factor)) {
    throw InvalidArgument("context factors must be finite and >= 1 (got " +
                          std::to_string(long_factor) + ", " +
                          std::to_string(short_factor) + ")");
  }
  const OrientedBox c = canonicalize(box);
  return canonicalize(c.cx(), c.cy(), c.w() * long_factor, c.h() * short_factor,
                      c.theta());
}

}  // namespace rroi
