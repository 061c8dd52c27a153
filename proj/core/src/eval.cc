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

#include "rroi/eval.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <optional>
#include <tuple>

#include "json.hpp"
#include "rroi/errors.h"

namespace rroi {

std::vector<MatchFlag> match_detections(std::span<const Detection> dets,
                                        std::span<const GroundTruth> gts,
                                        double iou_thresh) {
  std::vector<MatchFlag> flags(dets.size(), MatchFlag::kFalsePositive);
  std::vector<bool> taken(gts.size(), false);
  for (const std::size_t d : score_order(dets)) {
    std::optional<std::size_t> best;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gts[g].class_id != dets[d].class_id || taken[g]) continue;
      const double v = iou_oriented(dets[d].box, gts[g].box);
      if (!best || v > best_iou) {
        best = g;
        best_iou = v;
      }
    }
    if (!best || !(best_iou > iou_thresh)) continue;
    if (gts[*best].difficult) {
      flags[d] = MatchFlag::kIgnored;
    } else {
      flags[d] = MatchFlag::kTruePositive;
      taken[*best] = true;
    }
  }
  return flags;
}

PRCurve average_precision(std::span<const MatchFlag> flags, std::size_t n_gt,
                          ApMethod method) {
  PRCurve curve;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const MatchFlag f : flags) {
    if (f == MatchFlag::kIgnored) continue;
    (f == MatchFlag::kTruePositive ? tp : fp) += 1;
    curve.recall.push_back(n_gt > 0 ? static_cast<double>(tp) / static_cast<double>(n_gt)
                                    : 0.0);
    curve.precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
  }
  if (n_gt == 0) {
    curve.absent = curve.recall.empty();
    curve.ap = 0.0;
    return curve;
  }

  if (method == ApMethod::kVoc11Point) {
    double sum = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double r = i / 10.0;
      double p = 0.0;
      for (std::size_t k = 0; k < curve.recall.size(); ++k) {
        if (curve.recall[k] >= r) p = std::max(p, curve.precision[k]);
      }
      sum += p;
    }
    curve.ap = sum / 11.0;
    return curve;
  }

  // All-points: integrate the monotone precision envelope over recall.
  std::vector<double> mrec{0.0};
  std::vector<double> mpre{0.0};
  mrec.insert(mrec.end(), curve.recall.begin(), curve.recall.end());
  mpre.insert(mpre.end(), curve.precision.begin(), curve.precision.end());
  mrec.push_back(1.0);
  mpre.push_back(0.0);
  for (std::size_t i = mpre.size() - 1; i > 0; --i) {
    mpre[i - 1] = std::max(mpre[i - 1], mpre[i]);
  }
  double ap = 0.0;
  for (std::size_t i = 1; i < mrec.size(); ++i) {
    if (mrec[i] != mrec[i - 1]) ap += (mrec[i] - mrec[i - 1]) * mpre[i];
  }
  curve.ap = std::clamp(ap, 0.0, 1.0);
  return curve;
}

double mean_ap(std::span<const ClassResult> classes) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const ClassResult& c : classes) {
    if (c.n_gt == 0) continue;
    sum += c.curve.ap;
    ++count;
  }
  if (count == 0) throw InvalidArgument("no class has ground truth; mAP is undefined");
  return sum / static_cast<double>(count);
}

EvalReport evaluate(std::span<const ImageRecord> images,
                    std::span<const std::string> class_names, double iou_thresh,
                    ApMethod method) {
  struct Scored {
    double score;
    std::size_t image;
    std::size_t index;
    MatchFlag flag;
  };
  const std::size_t num_classes = class_names.size();
  std::vector<std::vector<Scored>> per_class(num_classes);
  std::vector<std::size_t> n_gt(num_classes, 0);

  for (std::size_t i = 0; i < images.size(); ++i) {
    const ImageRecord& img = images[i];
    for (const GroundTruth& g : img.ground_truth) {
      if (g.class_id >= num_classes) {
        throw InvalidArgument("ground truth class_id " + std::to_string(g.class_id) +
                              " has no name");
      }
      if (!g.difficult) ++n_gt[g.class_id];
    }
    const std::vector<MatchFlag> flags =
        match_detections(img.detections, img.ground_truth, iou_thresh);
    for (std::size_t d = 0; d < img.detections.size(); ++d) {
      const Detection& det = img.detections[d];
      if (det.class_id >= num_classes) {
        throw InvalidArgument("detection class_id " + std::to_string(det.class_id) +
                              " has no name");
      }
      per_class[det.class_id].push_back({det.score, i, d, flags[d]});
    }
  }

  EvalReport report;
  report.iou_thresh = iou_thresh;
  report.method = method;
  for (std::size_t c = 0; c < num_classes; ++c) {
    auto& list = per_class[c];
    std::sort(list.begin(), list.end(), [](const Scored& a, const Scored& b) {
      return std::tie(b.score, a.image, a.index) < std::tie(a.score, b.image, b.index);
    });
    std::vector<MatchFlag> flags;
    flags.reserve(list.size());
    for (const Scored& s : list) flags.push_back(s.flag);
    report.classes.push_back(
        {c, class_names[c], n_gt[c], list.size(), average_precision(flags, n_gt[c], method)});
  }
  report.map = mean_ap(report.classes);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["iou_thresh"] = report.iou_thresh;
  j["ap_method"] = report.method == ApMethod::kAllPoints ? "all-points" : "voc11";
  j["classes"] = nlohmann::json::array();
  for (const ClassResult& c : report.classes) {
    j["classes"].push_back({{"class_id", c.class_id},
                            {"name", c.name},
                            {"n_gt", c.n_gt},
                            {"n_det", c.n_det},
                            {"ap", c.curve.ap},
                            {"absent", c.curve.absent}});
  }
  j["mAP"] = report.map;
  return j.dump(2) + "\n";
}

std::string report_to_text(const EvalReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "rotated-IoU AP @ %.2f (%s)\n", report.iou_thresh,
                report.method == ApMethod::kAllPoints ? "all-points" : "11-point");
  out += line;
  std::snprintf(line, sizeof(line), "%-24s %8s %8s %8s\n", "class", "n_gt", "n_det", "AP");
  out += line;
  for (const ClassResult& c : report.classes) {
    if (c.n_gt == 0) {
      std::snprintf(line, sizeof(line), "%-24s %8zu %8zu %8s\n", c.name.c_str(), c.n_gt,
                    c.n_det, "n/a");
    } else {
      std::snprintf(line, sizeof(line), "%-24s %8zu %8zu %8.4f\n", c.name.c_str(), c.n_gt,
                    c.n_det, c.curve.ap);
    }
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-24s %26.4f\n", "mAP", report.map);
  out += line;
  return out;
}

}  // namespace rroi
