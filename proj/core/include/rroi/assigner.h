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

#ifndef RROI_ASSIGNER_H_
#define RROI_ASSIGNER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rroi/encoding.h"
#include "rroi/geometry.h"

namespace rroi {

enum class Label { kNegative, kPositive };

struct Assignment {
  std::size_t proposal_index = 0;
  std::optional<std::size_t> gt_index;  // set iff label == kPositive
  Label label = Label::kNegative;
  double matched_iou = 0.0;  // best IoU over all ground truths

  bool positive() const { return label == Label::kPositive; }
};

inline constexpr double kDefaultPositiveIoU = 0.5;

// Each proposal takes its argmax-IoU ground truth (lowest index on ties) and
// is positive iff that IoU is strictly greater than pos_thresh.
std::vector<Assignment> assign_rotated(std::span<const OrientedBox> proposals,
                                       std::span<const OrientedBox> gts,
                                       double pos_thresh = kDefaultPositiveIoU);

// Horizontal proposals are matched against the aligned hulls of the rotated
// ground truths; gt_index still refers to the rotated box.
std::vector<Assignment> assign_horizontal(std::span<const AlignedBox> proposals,
                                          std::span<const OrientedBox> gts,
                                          double pos_thresh = kDefaultPositiveIoU);

struct TargetSet {
  std::vector<OffsetVector> targets;       // one per positive, proposal order
  std::vector<std::size_t> positive_indices;
  std::vector<Label> labels;               // one per proposal
};

// Regression targets encode(proposal, matched gt) for every positive.
// Throws ContractViolation if the assignments do not line up with the lists.
TargetSet build_targets(std::span<const OrientedBox> proposals,
                        std::span<const Assignment> assignments,
                        std::span<const OrientedBox> gts);
TargetSet build_targets(std::span<const AlignedBox> proposals,
                        std::span<const Assignment> assignments,
                        std::span<const OrientedBox> gts);

}  // namespace rroi

#endif  // RROI_ASSIGNER_H_
