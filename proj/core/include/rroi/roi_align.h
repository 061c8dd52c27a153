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

#ifndef RROI_ROI_ALIGN_H_
#define RROI_ROI_ALIGN_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rroi/geometry.h"

namespace rroi {

// Dense H x W x C grid, indexed (y, x, c) with c fastest. Pixel centers sit
// at integer coordinates.
class FeatureTensor {
 public:
  FeatureTensor(std::size_t height, std::size_t width, std::size_t channels,
                double fill = 0.0);
  FeatureTensor(std::size_t height, std::size_t width, std::size_t channels,
                std::vector<double> data);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t channels() const { return channels_; }

  double& at(std::size_t y, std::size_t x, std::size_t c) {
    return data_[(y * width_ + x) * channels_ + c];
  }
  double at(std::size_t y, std::size_t x, std::size_t c) const {
    return data_[(y * width_ + x) * channels_ + c];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

 private:
  std::size_t height_;
  std::size_t width_;
  std::size_t channels_;
  std::vector<double> data_;
};

// K x K x C_out output, indexed (i, j, c) where i runs along the box's w
// side and j along its h side.
class PooledFeature {
 public:
  PooledFeature(std::size_t k, std::size_t channels);

  std::size_t k() const { return k_; }
  std::size_t channels() const { return channels_; }
  std::size_t size() const { return data_.size(); }

  double& at(std::size_t i, std::size_t j, std::size_t c) {
    return data_[(i * k_ + j) * channels_ + c];
  }
  double at(std::size_t i, std::size_t j, std::size_t c) const {
    return data_[(i * k_ + j) * channels_ + c];
  }

  // Flattened in (i, j, c) order.
  std::span<const double> data() const { return data_; }

 private:
  std::size_t k_;
  std::size_t channels_;
  std::vector<double> data_;
};

struct AlignConfig {
  std::size_t k = 7;
  std::size_t samples_per_bin_side = 2;
};

// Maps RRoI-local coordinates (x in [0, w], y in [0, h]) to the image.
Point transform_point(const OrientedBox& rroi, double x, double y);

// Bilinear interpolation with zero padding: grid points outside the tensor
// contribute 0.
double bilinear_sample(const FeatureTensor& feature, double x, double y,
                       std::size_t c);

// Rotated position-sensitive RoI Align. The feature must have k*k*C_out
// channels; bin (i, j) of output channel c reads input channel
// (i * k + j) * C_out + c. Each bin is the mean of n x n bilinear samples.
PooledFeature rps_roi_align(const FeatureTensor& feature, const OrientedBox& rroi,
                            std::size_t k, std::size_t samples_per_bin_side);

// Rotated RoI Align without position sensitivity: output channel c reads
// input channel c in every bin.
PooledFeature roi_align(const FeatureTensor& feature, const OrientedBox& rroi,
                        std::size_t k, std::size_t samples_per_bin_side);

}  // namespace rroi

#endif  // RROI_ROI_ALIGN_H_
