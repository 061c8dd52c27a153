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

#ifndef RROI_NMS_H_
#define RROI_NMS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "rroi/geometry.h"

namespace rroi {

struct Detection {
  OrientedBox box;
  double score = 0.0;  // in [0, 1]
  std::size_t class_id = 0;
};

// Throws InvalidArgument when the score is outside [0, 1] or non-finite.
Detection make_detection(const OrientedBox& box, double score, std::size_t class_id);

struct NmsOptions {
  double iou_thresh = 0.5;
  bool class_agnostic = false;
};

// Indices of detections in descending score order (ties: lower index first).
std::vector<std::size_t> score_order(std::span<const Detection> dets);

// Greedy rotated NMS. A detection is kept iff its oriented IoU with every
// higher-ranked kept detection of the same class (any class when
// class_agnostic) is <= iou_thresh. Returns kept indices in score order.
std::vector<std::size_t> rotated_nms(std::span<const Detection> dets,
                                     const NmsOptions& options);
std::vector<std::size_t> rotated_nms(std::span<const Detection> dets,
                                     double iou_thresh);

// Same greedy rule with axis-aligned IoU.
std::vector<std::size_t> aligned_nms(std::span<const AlignedBox> boxes,
                                     std::span<const double> scores,
                                     double iou_thresh);

// Order-preserving filter keeping detections with score >= min_score.
std::vector<Detection> score_filter(std::span<const Detection> dets, double min_score);

}  // namespace rroi

#endif  // RROI_NMS_H_
