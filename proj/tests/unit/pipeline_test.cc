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

#include "rroi/pipeline.h"

#include <gtest/gtest.h>

#include <string>

#include "rroi/errors.h"

namespace rroi {
namespace {

PipelineConfig small_config() {
  PipelineConfig c;
  c.train_scenes = 8;
  c.test_scenes = 4;
  c.train.epochs = 30;
  c.seed = 5;
  return c;
}

TEST(PipelineConfig, JsonRoundTrip) {
  PipelineConfig c = small_config();
  c.rroi_nms_enabled = true;
  c.context_long = 1.5;
  c.train.learning_rate = 0.01;
  c.scene.num_classes = 4;
  c.channels_out = 12;
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
  EXPECT_EQ(config_from_json(config_to_json(PipelineConfig{})), PipelineConfig{});
}

TEST(PipelineConfig, MissingKeysKeepDefaults) {
  const PipelineConfig c = config_from_json(R"({"seed": 9, "train": {"epochs": 3}})");
  PipelineConfig expected;
  expected.seed = 9;
  expected.train.epochs = 3;
  EXPECT_EQ(c, expected);
}

TEST(PipelineConfig, RejectsUnknownKeysAndBadJson) {
  EXPECT_THROW(config_from_json(R"({"sead": 1})"), InvalidArgument);
  EXPECT_THROW(config_from_json(R"({"scene": {"colour": 1}})"), InvalidArgument);
  EXPECT_THROW(config_from_json("{"), InvalidArgument);
}

TEST(PipelineConfig, Validate) {
  EXPECT_NO_THROW(validate(PipelineConfig{}));
  auto rejects = [](auto mutate) {
    PipelineConfig c;
    mutate(c);
    EXPECT_THROW(validate(c), InvalidArgument);
  };
  rejects([](PipelineConfig& c) { c.k = 0; });
  rejects([](PipelineConfig& c) { c.nms_thresh = 0.0; });
  rejects([](PipelineConfig& c) { c.nms_thresh = 1.5; });
  rejects([](PipelineConfig& c) { c.score_thresh = -0.1; });
  rejects([](PipelineConfig& c) { c.eval_iou_thresh = 1.0; });
  rejects([](PipelineConfig& c) { c.context_short = 0.9; });
  rejects([](PipelineConfig& c) { c.train.learning_rate = -1.0; });
  rejects([](PipelineConfig& c) { c.scene.min_objects = 9; });
  rejects([](PipelineConfig& c) { c.channels_out = 3; });
}

TEST(Pipeline, ClassNames) {
  const auto names = synthetic_class_names(3);
  ASSERT_EQ(names.size(), 3u);
  EXPECT_NE(names[0], names[1]);
  EXPECT_NE(names[1], names[2]);
}

TEST(Pipeline, DeterministicManifest) {
  const PipelineConfig c = small_config();
  const std::string a = demo_manifest(c, run_demo(c));
  const std::string b = demo_manifest(c, run_demo(c));
  EXPECT_EQ(a, b);
  PipelineConfig other = c;
  other.seed = 6;
  EXPECT_NE(demo_manifest(other, run_demo(other)), a);
}

TEST(Pipeline, OracleLearnerIsPerfect) {
  PipelineConfig c = small_config();
  c.oracle_learner = true;
  const DemoResult r = run_demo(c);
  EXPECT_DOUBLE_EQ(r.report.map, 1.0);
  EXPECT_DOUBLE_EQ(r.rroi_recall, 1.0);
  EXPECT_GT(r.mean_rroi_iou, r.mean_hroi_iou);
}

TEST(Pipeline, RroiNmsOnlyRemovesProposals) {
  PipelineConfig c = small_config();
  const DemoResult off = run_demo(c);
  c.rroi_nms_enabled = true;
  const DemoResult on = run_demo(c);
  EXPECT_EQ(off.hroi_count, on.hroi_count);
  EXPECT_EQ(off.rroi_count, off.hroi_count);
  EXPECT_LE(on.rroi_count, off.rroi_count);
}

TEST(Pipeline, TrainedLearnerImprovesOnHrois) {
  const DemoResult r = run_demo(small_config());
  EXPECT_GT(r.matched_hrois, 0u);
  EXPECT_GT(r.mean_rroi_iou, r.mean_hroi_iou);
  EXPECT_EQ(r.scenes.size(), 4u);
  EXPECT_EQ(r.report.classes.size(), r.class_names.size());
}

TEST(Pipeline, RejectsInvalidConfig) {
  PipelineConfig c = small_config();
  c.k = 0;
  EXPECT_THROW(run_demo(c), InvalidArgument);
}

}  // namespace
}  // namespace rroi
