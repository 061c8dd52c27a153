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

#include "rroi/nms.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rroi/errors.h"

namespace rroi {
namespace {

void check_nms_threshold(double t) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw InvalidArgument("NMS IoU threshold must be in (0, 1], got " +
                          std::to_string(t));
  }
}

std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

}  // namespace

Detection make_detection(const OrientedBox& box, double score, std::size_t class_id) {
  if (!std::isfinite(score) || score < 0.0 || score > 1.0) {
    throw InvalidArgument("detection score must be in [0, 1], got " +
                          std::to_string(score));
  }
  return Detection{box, score, class_id};
}

std::vector<std::size_t> score_order(std::span<const Detection> dets) {
  std::vector<double> scores;
  scores.reserve(dets.size());
  for (const Detection& d : dets) scores.push_back(d.score);
  return order_by_score(scores);
}

std::vector<std::size_t> rotated_nms(std::span<const Detection> dets,
                                     const NmsOptions& options) {
  check_nms_threshold(options.iou_thresh);
  std::vector<std::size_t> kept;
  for (const std::size_t i : score_order(dets)) {
    bool keep = true;
    for (const std::size_t j : kept) {
      if (!options.class_agnostic && dets[j].class_id != dets[i].class_id) continue;
      if (iou_oriented(dets[i].box, dets[j].box) > options.iou_thresh) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(i);
  }
  return kept;
}

std::vector<std::size_t> rotated_nms(std::span<const Detection> dets,
                                     double iou_thresh) {
  return rotated_nms(dets, NmsOptions{iou_thresh, false});
}

std::vector<std::size_t> aligned_nms(std::span<const AlignedBox> boxes,
                                     std::span<const double> scores,
                                     double iou_thresh) {
  check_nms_threshold(iou_thresh);
  if (boxes.size() != scores.size()) {
    throw ShapeError("aligned_nms: " + std::to_string(boxes.size()) + " boxes but " +
                     std::to_string(scores.size()) + " scores");
  }
  std::vector<std::size_t> kept;
  for (const std::size_t i : order_by_score(scores)) {
    bool keep = true;
    for (const std::size_t j : kept) {
      if (iou_aligned(boxes[i], boxes[j]) > iou_thresh) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(i);
  }
  return kept;
}

std::vector<Detection> score_filter(std::span<const Detection> dets, double min_score) {
  if (!(min_score >= 0.0 && min_score <= 1.0)) {
    throw InvalidArgument("min_score must be in [0, 1], got " +
                          std::to_string(min_score));
  }
  std::vector<Detection> out;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
               [&](const Detection& d) { return d.score >= min_score; });
  return out;
}

}  // namespace rroi
