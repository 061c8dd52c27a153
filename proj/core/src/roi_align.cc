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

#include "rroi/roi_align.h"

#include <cmath>
#include <string>
#include <vector>

#include "rroi/errors.h"

namespace rroi {

FeatureTensor::FeatureTensor(std::size_t height, std::size_t width,
                             std::size_t channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  if (height == 0 || width == 0 || channels == 0) {
    throw ShapeError("feature tensor dimensions must be >= 1");
  }
  data_.assign(height * width * channels, fill);
}

FeatureTensor::FeatureTensor(std::size_t height, std::size_t width,
                             std::size_t channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  if (height == 0 || width == 0 || channels == 0) {
    throw ShapeError("feature tensor dimensions must be >= 1");
  }
  if (data_.size() != height * width * channels) {
    throw ShapeError("feature tensor data has " + std::to_string(data_.size()) +
                     " values, expected " +
                     std::to_string(height * width * channels));
  }
}

PooledFeature::PooledFeature(std::size_t k, std::size_t channels)
    : k_(k), channels_(channels), data_(k * k * channels, 0.0) {
  if (k == 0 || channels == 0) throw ShapeError("pooled feature dimensions must be >= 1");
}

Point transform_point(const OrientedBox& rroi, double x, double y) {
  const double c = std::cos(rroi.theta());
  const double s = std::sin(rroi.theta());
  const double lx = x - 0.5 * rroi.w();
  const double ly = y - 0.5 * rroi.h();
  return {c * lx - s * ly + rroi.cx(), s * lx + c * ly + rroi.cy()};
}

namespace {

double grid_value(const FeatureTensor& f, long long y, long long x, std::size_t c) {
  if (x < 0 || y < 0 || x >= static_cast<long long>(f.width()) ||
      y >= static_cast<long long>(f.height())) {
    return 0.0;
  }
  return f.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x), c);
}

void check_align_args(std::size_t k, std::size_t n) {
  if (k == 0) throw ShapeError("k must be >= 1");
  if (n == 0) throw ShapeError("samples_per_bin_side must be >= 1");
}

// Shared sampling loop. `channel_of(i, j, c)` picks the input channel.
template <typename ChannelOf>
PooledFeature align_impl(const FeatureTensor& feature, const OrientedBox& rroi,
                         std::size_t k, std::size_t n, std::size_t channels_out,
                         ChannelOf channel_of) {
  PooledFeature out(k, channels_out);
  const double c = std::cos(rroi.theta());
  const double s = std::sin(rroi.theta());
  const double bin_w = rroi.w() / static_cast<double>(k);
  const double bin_h = rroi.h() / static_cast<double>(k);
  const double step_w = bin_w / static_cast<double>(n);
  const double step_h = bin_h / static_cast<double>(n);
  const double inv_count = 1.0 / static_cast<double>(n * n);

  std::vector<Point> points(n * n);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t sx = 0; sx < n; ++sx) {
        for (std::size_t sy = 0; sy < n; ++sy) {
          const double lx = static_cast<double>(i) * bin_w +
                            (static_cast<double>(sx) + 0.5) * step_w - 0.5 * rroi.w();
          const double ly = static_cast<double>(j) * bin_h +
                            (static_cast<double>(sy) + 0.5) * step_h - 0.5 * rroi.h();
          points[sx * n + sy] = {c * lx - s * ly + rroi.cx(), s * lx + c * ly + rroi.cy()};
        }
      }
      // Mean as first sample plus mean deviation, so constant fields pool
      // to exactly their value.
      for (std::size_t ch = 0; ch < channels_out; ++ch) {
        const std::size_t in_ch = channel_of(i, j, ch);
        const double first = bilinear_sample(feature, points[0].x, points[0].y, in_ch);
        double deviation = 0.0;
        for (std::size_t p = 1; p < points.size(); ++p) {
          deviation += bilinear_sample(feature, points[p].x, points[p].y, in_ch) - first;
        }
        out.at(i, j, ch) = first + deviation * inv_count;
      }
    }
  }
  return out;
}

}  // namespace

double bilinear_sample(const FeatureTensor& feature, double x, double y,
                       std::size_t c) {
  if (c >= feature.channels()) {
    throw ShapeError("channel " + std::to_string(c) + " out of range");
  }
  if (!std::isfinite(x) || !std::isfinite(y)) return 0.0;
  if (x <= -1.0 || y <= -1.0 || x >= static_cast<double>(feature.width()) ||
      y >= static_cast<double>(feature.height())) {
    return 0.0;
  }
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const auto x0 = static_cast<long long>(fx);
  const auto y0 = static_cast<long long>(fy);
  const double ax = x - fx;
  const double ay = y - fy;
  // Interpolating differences (rather than weighting corners) keeps
  // constant neighbourhoods exact; zero-weight neighbours are not read.
  const double v00 = grid_value(feature, y0, x0, c);
  const double top =
      ax > 0.0 ? v00 + ax * (grid_value(feature, y0, x0 + 1, c) - v00) : v00;
  if (!(ay > 0.0)) return top;
  const double v10 = grid_value(feature, y0 + 1, x0, c);
  const double bottom =
      ax > 0.0 ? v10 + ax * (grid_value(feature, y0 + 1, x0 + 1, c) - v10) : v10;
  const double v = top + ay * (bottom - top);
  return v;
}

PooledFeature rps_roi_align(const FeatureTensor& feature, const OrientedBox& rroi,
                            std::size_t k, std::size_t samples_per_bin_side) {
  check_align_args(k, samples_per_bin_side);
  const std::size_t groups = k * k;
  if (feature.channels() % groups != 0) {
    throw ShapeError("feature has " + std::to_string(feature.channels()) +
                     " channels, not divisible by k*k = " + std::to_string(groups));
  }
  const std::size_t channels_out = feature.channels() / groups;
  return align_impl(feature, rroi, k, samples_per_bin_side, channels_out,
                    [=](std::size_t i, std::size_t j, std::size_t c) {
                      return (i * k + j) * channels_out + c;
                    });
}

PooledFeature roi_align(const FeatureTensor& feature, const OrientedBox& rroi,
                        std::size_t k, std::size_t samples_per_bin_side) {
  check_align_args(k, samples_per_bin_side);
  return align_impl(feature, rroi, k, samples_per_bin_side, feature.channels(),
                    [](std::size_t, std::size_t, std::size_t c) { return c; });
}

}  // namespace rroi
