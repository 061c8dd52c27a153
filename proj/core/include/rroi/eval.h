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

#ifndef RROI_EVAL_H_
#define RROI_EVAL_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rroi/geometry.h"
#include "rroi/nms.h"

namespace rroi {

struct GroundTruth {
  OrientedBox box;
  std::size_t class_id = 0;
  bool difficult = false;  // excluded from n_gt; matches are ignored
};

enum class MatchFlag { kTruePositive, kFalsePositive, kIgnored };

// Greedy matching in descending score order (ties by index). A detection
// takes the same-class ground truth with the highest oriented IoU among those
// still available (unmatched, or difficult). It is a true positive iff that
// IoU exceeds iou_thresh and the ground truth is not difficult; a match to a
// difficult ground truth is ignored. Flags are returned in input order.
std::vector<MatchFlag> match_detections(std::span<const Detection> dets,
                                        std::span<const GroundTruth> gts,
                                        double iou_thresh = 0.5);

enum class ApMethod { kAllPoints, kVoc11Point };

struct PRCurve {
  std::vector<double> recall;
  std::vector<double> precision;
  double ap = 0.0;
  bool absent = false;  // no ground truth and no detections
};

// `flags` must be in descending score order. Ignored entries are skipped.
PRCurve average_precision(std::span<const MatchFlag> flags, std::size_t n_gt,
                          ApMethod method = ApMethod::kAllPoints);

struct ClassResult {
  std::size_t class_id = 0;
  std::string name;
  std::size_t n_gt = 0;
  std::size_t n_det = 0;
  PRCurve curve;
};

// Unweighted mean AP over classes with n_gt > 0. Throws InvalidArgument if
// there is none.
double mean_ap(std::span<const ClassResult> classes);

struct ImageRecord {
  std::vector<Detection> detections;
  std::vector<GroundTruth> ground_truth;
};

struct EvalReport {
  std::vector<ClassResult> classes;
  double map = 0.0;
  double iou_thresh = 0.5;
  ApMethod method = ApMethod::kAllPoints;
};

// Matches every image independently, then pools detections of each class
// across images in global score order (ties: image, then index).
EvalReport evaluate(std::span<const ImageRecord> images,
                    std::span<const std::string> class_names, double iou_thresh = 0.5,
                    ApMethod method = ApMethod::kAllPoints);

// Machine-readable table (JSON) and a plain-text summary.
std::string report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

}  // namespace rroi

#endif  // RROI_EVAL_H_
