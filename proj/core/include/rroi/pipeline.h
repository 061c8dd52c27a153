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

#ifndef RROI_PIPELINE_H_
#define RROI_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rroi/eval.h"
#include "rroi/learner.h"
#include "rroi/nms.h"
#include "rroi/synthetic.h"

namespace rroi {

struct PipelineConfig {
  // Warping.
  std::size_t k = 7;
  std::size_t samples_per_bin_side = 2;
  std::size_t channels_out = 10;
  bool position_sensitive = true;

  // Matching, suppression and scoring.
  double pos_iou_thresh = 0.5;
  double nms_thresh = 0.3;
  double score_thresh = 0.1;
  double eval_iou_thresh = 0.5;

  // Ablation toggles.
  double context_long = kContextLongFactor;
  double context_short = kContextShortFactor;
  bool rroi_nms_enabled = false;
  double rroi_nms_thresh = 0.5;
  bool second_stage_regression = true;

  // Data and training.
  std::uint64_t seed = 0;
  std::size_t train_scenes = 120;
  std::size_t test_scenes = 40;
  bool oracle_learner = false;
  // Use stable_learning_rate() of each training set instead of
  // train.learning_rate.
  bool auto_learning_rate = true;
  TrainConfig train;
  SceneConfig scene;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&);
};

// Throws InvalidArgument naming the first out-of-range field.
void validate(const PipelineConfig& config);

std::string config_to_json(const PipelineConfig& config);
// Fields missing from the JSON keep their defaults; unknown keys are errors.
PipelineConfig config_from_json(const std::string& text);

std::vector<std::string> synthetic_class_names(std::size_t num_classes);

struct SceneDetections {
  std::vector<Detection> detections;
  std::vector<GroundTruth> ground_truth;
};

struct DemoResult {
  std::size_t stage1_samples = 0;
  std::size_t stage2_samples = 0;
  double stage1_final_loss = 0.0;
  double stage2_final_loss = 0.0;

  // Positive HRoIs of the held-out scenes: mean oriented IoU of the HRoI
  // with its matched ground truth, and of the decoded RRoI with the same
  // ground truth.
  std::size_t matched_hrois = 0;
  double mean_hroi_iou = 0.0;
  double mean_rroi_iou = 0.0;

  std::size_t hroi_count = 0;
  std::size_t rroi_count = 0;  // proposals entering the second stage
  double rroi_recall = 0.0;    // gts covered by an RRoI with IoU > eval threshold

  std::vector<SceneDetections> scenes;
  std::vector<std::string> class_names;
  EvalReport report;

  std::optional<LinearRegressor> stage1_model;
  std::optional<LinearRegressor> stage2_model;
};

// Synthetic end-to-end run: scenes -> HRoIs -> pooled features -> RRoI
// learner -> decoded RRoIs -> (optional RRoI NMS) -> context-enlarged
// warping -> second-stage regression -> rotated NMS -> mAP. Deterministic
// for a given config.
DemoResult run_demo(const PipelineConfig& config);

// Run manifest: config plus metric values (no timestamps).
std::string demo_manifest(const PipelineConfig& config, const DemoResult& result);

}  // namespace rroi

#endif  // RROI_PIPELINE_H_
