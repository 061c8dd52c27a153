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

#ifndef RROI_SYNTHETIC_H_
#define RROI_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "rroi/geometry.h"
#include "rroi/learner.h"
#include "rroi/roi_align.h"

namespace rroi {

// Synthetic scenes of well-separated rotated rectangles, standing in for
// aerial images with RPN proposals. The feature map is analytic: every pixel
// near an object carries that object's occupancy and pose encoding, so the
// offsets of a jittered hull are (up to the log of the scale jitter) a linear
// function of the pooled features.
struct SceneConfig {
  std::size_t image_size = 128;
  std::size_t min_objects = 3;
  std::size_t max_objects = 8;
  std::size_t num_classes = 3;
  double min_long_side = 16.0;
  double max_long_side = 40.0;
  double min_aspect = 1.5;
  double max_aspect = 4.0;
  std::size_t hrois_per_object = 4;
  std::size_t background_hrois = 2;
  double center_jitter = 0.08;  // fraction of the hull side
  double scale_jitter = 0.08;   // log scale
  // Pose fields extend to this multiple of the hull; object neighbourhoods
  // of this size never overlap.
  double field_margin = 1.5;
};

struct SceneObject {
  OrientedBox box;  // canonical
  std::size_t class_id = 0;
};

struct Scene {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<SceneObject> objects;
  // Jittered hulls, hrois_per_object per object in object order, followed by
  // background proposals that touch no object neighbourhood.
  std::vector<AlignedBox> hrois;

  std::vector<OrientedBox> gt_boxes() const;
};

// Channel layout of the base (non position-sensitive) feature map.
//   [0, num_classes)       per-class occupancy
//   num_classes + 0, + 1   x, y offset to the owner's center over its hull
//   num_classes + 2        owner theta / 2pi
//   num_classes + 3, + 4   log(w / hull width), log(h / hull height)
//   num_classes + 5, + 6   cos(2 theta), sin(2 theta)
inline constexpr std::size_t kPoseChannels = 7;
std::size_t min_scene_channels(const SceneConfig& config);

double uniform(std::mt19937_64& rng, double lo, double hi);

Scene generate_scene(const SceneConfig& config, std::mt19937_64& rng);

// Renders channels_out base channels and replicates them into `groups`
// position-sensitive groups (k*k for rps_roi_align, 1 for roi_align).
FeatureTensor render_features(const Scene& scene, const SceneConfig& config,
                              std::size_t channels_out, std::size_t groups);

struct SyntheticSample {
  std::size_t scene = 0;
  std::size_t hroi = 0;
  std::size_t gt = 0;
};

struct SyntheticSet {
  std::vector<Scene> scenes;
  std::vector<TrainingSample> samples;
  std::vector<SyntheticSample> origin;  // parallel to samples
};

struct SynthesisOptions {
  SceneConfig scene;
  AlignConfig align;
  std::size_t channels_out = 10;
  double pos_iou_thresh = 0.5;
};

// n scenes from `seed`; one training sample per positive HRoI, with features
// from rps_roi_align over the lifted HRoI and targets from assign_horizontal
// + build_targets.
SyntheticSet synthesize_training_set(std::size_t n, std::uint64_t seed,
                                     const SynthesisOptions& options);

}  // namespace rroi

#endif  // RROI_SYNTHETIC_H_
