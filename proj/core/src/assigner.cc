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

#include "rroi/assigner.h"

#include <string>

#include "rroi/errors.h"

namespace rroi {
namespace {

void check_threshold(double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw InvalidArgument("positive IoU threshold must be in (0, 1), got " +
                          std::to_string(t));
  }
}

template <typename IoUFn>
std::vector<Assignment> assign(std::size_t num_proposals, std::size_t num_gts,
                               double pos_thresh, IoUFn iou) {
  check_threshold(pos_thresh);
  std::vector<Assignment> out(num_proposals);
  for (std::size_t p = 0; p < num_proposals; ++p) {
    Assignment& a = out[p];
    a.proposal_index = p;
    std::optional<std::size_t> best;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < num_gts; ++g) {
      const double v = iou(p, g);
      if (!best || v > best_iou) {
        best = g;
        best_iou = v;
      }
    }
    a.matched_iou = best_iou;
    if (best && best_iou > pos_thresh) {
      a.label = Label::kPositive;
      a.gt_index = best;
    }
  }
  return out;
}

template <typename Proposal, typename Lift>
TargetSet build(std::span<const Proposal> proposals,
                std::span<const Assignment> assignments,
                std::span<const OrientedBox> gts, Lift lift_fn) {
  if (assignments.size() != proposals.size()) {
    throw ContractViolation("got " + std::to_string(assignments.size()) +
                            " assignments for " + std::to_string(proposals.size()) +
                            " proposals");
  }
  TargetSet out;
  out.labels.reserve(proposals.size());
  for (std::size_t p = 0; p < assignments.size(); ++p) {
    const Assignment& a = assignments[p];
    if (a.proposal_index != p) {
      throw ContractViolation("assignment " + std::to_string(p) +
                              " refers to proposal " +
                              std::to_string(a.proposal_index));
    }
    if (a.positive() != a.gt_index.has_value()) {
      throw ContractViolation("assignment " + std::to_string(p) +
                              " has inconsistent label and gt index");
    }
    out.labels.push_back(a.label);
    if (!a.positive()) continue;
    if (*a.gt_index >= gts.size()) {
      throw ContractViolation("assignment " + std::to_string(p) +
                              " refers to missing ground truth " +
                              std::to_string(*a.gt_index));
    }
    out.targets.push_back(encode(lift_fn(proposals[p]), gts[*a.gt_index]));
    out.positive_indices.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<Assignment> assign_rotated(std::span<const OrientedBox> proposals,
                                       std::span<const OrientedBox> gts,
                                       double pos_thresh) {
  return assign(proposals.size(), gts.size(), pos_thresh,
                [&](std::size_t p, std::size_t g) {
                  return iou_oriented(proposals[p], gts[g]);
                });
}

std::vector<Assignment> assign_horizontal(std::span<const AlignedBox> proposals,
                                          std::span<const OrientedBox> gts,
                                          double pos_thresh) {
  std::vector<AlignedBox> hulls;
  hulls.reserve(gts.size());
  for (const OrientedBox& g : gts) hulls.push_back(aligned_hull(g));
  return assign(proposals.size(), gts.size(), pos_thresh,
                [&](std::size_t p, std::size_t g) {
                  return iou_aligned(proposals[p], hulls[g]);
                });
}

TargetSet build_targets(std::span<const OrientedBox> proposals,
                        std::span<const Assignment> assignments,
                        std::span<const OrientedBox> gts) {
  return build(proposals, assignments, gts, [](const OrientedBox& b) { return b; });
}

TargetSet build_targets(std::span<const AlignedBox> proposals,
                        std::span<const Assignment> assignments,
                        std::span<const OrientedBox> gts) {
  return build(proposals, assignments, gts, [](const AlignedBox& b) { return lift(b); });
}

}  // namespace rroi
