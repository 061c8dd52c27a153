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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "json.hpp"
#include "rroi/assigner.h"
#include "rroi/encoding.h"
#include "rroi/errors.h"

namespace rroi {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("invalid pipeline config: " + what);
}

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

json train_to_json(const TrainConfig& t) {
  return {{"learning_rate", t.learning_rate},
          {"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"smooth_l1_beta", t.smooth_l1_beta}};
}

json scene_to_json(const SceneConfig& s) {
  return {{"image_size", s.image_size},
          {"min_objects", s.min_objects},
          {"max_objects", s.max_objects},
          {"num_classes", s.num_classes},
          {"min_long_side", s.min_long_side},
          {"max_long_side", s.max_long_side},
          {"min_aspect", s.min_aspect},
          {"max_aspect", s.max_aspect},
          {"hrois_per_object", s.hrois_per_object},
          {"background_hrois", s.background_hrois},
          {"center_jitter", s.center_jitter},
          {"scale_jitter", s.scale_jitter},
          {"field_margin", s.field_margin}};
}

// Copies j[key] into `field` when present and records the key as consumed.
template <typename T>
void read(const json& j, const char* key, T& field, std::set<std::string>& seen) {
  seen.insert(key);
  if (j.contains(key)) field = j.at(key).get<T>();
}

void reject_unknown(const json& j, const std::set<std::string>& seen,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!seen.contains(key)) {
      throw InvalidArgument("unknown config key '" + where + key + "'");
    }
  }
}

// Pools `box` with the configured warping mode. The feature map must have
// been rendered with k*k groups for PS warping and 1 group otherwise.
PooledFeature warp(const FeatureTensor& feature, const OrientedBox& box,
                   const PipelineConfig& cfg) {
  return cfg.position_sensitive
             ? rps_roi_align(feature, box, cfg.k, cfg.samples_per_bin_side)
             : roi_align(feature, box, cfg.k, cfg.samples_per_bin_side);
}

FeatureTensor render(const Scene& scene, const PipelineConfig& cfg) {
  return render_features(scene, cfg.scene, cfg.channels_out,
                         cfg.position_sensitive ? cfg.k * cfg.k : 1);
}

struct ClassScore {
  double score = 0.0;
  std::size_t class_id = 0;
};

// Mean per-class occupancy over the box's sampling grid; the best class wins.
ClassScore score_box(const FeatureTensor& feature, const OrientedBox& box,
                     const PipelineConfig& cfg) {
  const PooledFeature pooled = warp(feature, box, cfg);
  ClassScore best;
  const double bins = static_cast<double>(cfg.k * cfg.k);
  for (std::size_t c = 0; c < cfg.scene.num_classes; ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < cfg.k; ++i) {
      for (std::size_t j = 0; j < cfg.k; ++j) sum += pooled.at(i, j, c);
    }
    const double s = std::clamp(sum / bins, 0.0, 1.0);
    if (c == 0 || s > best.score) best = {s, c};
  }
  return best;
}

std::vector<double> flatten(const PooledFeature& p) {
  return {p.data().begin(), p.data().end()};
}

struct Stage1 {
  std::vector<OrientedBox> rrois;  // after optional RRoI NMS
  std::vector<Assignment> hroi_assignments;
  std::vector<OrientedBox> decoded;  // one per HRoI, before NMS
};

Stage1 run_stage1(const Scene& scene, const FeatureTensor& feature,
                  const std::vector<OrientedBox>& gts, const LinearRegressor* model,
                  const PipelineConfig& cfg) {
  Stage1 out;
  out.hroi_assignments = assign_horizontal(scene.hrois, gts, cfg.pos_iou_thresh);
  for (std::size_t h = 0; h < scene.hrois.size(); ++h) {
    const OrientedBox anchor = lift(scene.hrois[h]);
    OffsetVector t;
    if (model != nullptr) {
      t = predict(*model, warp(feature, anchor, cfg));
    } else if (const Assignment& a = out.hroi_assignments[h]; a.positive()) {
      t = encode(anchor, gts[*a.gt_index]);
    }
    out.decoded.push_back(decode(anchor, t));
  }
  if (!cfg.rroi_nms_enabled) {
    out.rrois = out.decoded;
    return out;
  }
  std::vector<Detection> scored;
  for (const OrientedBox& r : out.decoded) {
    const ClassScore s = score_box(feature, r, cfg);
    scored.push_back({r, s.score, s.class_id});
  }
  for (const std::size_t i : rotated_nms(scored, NmsOptions{cfg.rroi_nms_thresh, true})) {
    out.rrois.push_back(out.decoded[i]);
  }
  return out;
}

OrientedBox context_region(const OrientedBox& rroi, const PipelineConfig& cfg) {
  return enlarge_context(rroi, cfg.context_long, cfg.context_short);
}

double final_loss(const TrainResult& r) {
  return r.loss_trace.empty() ? 0.0 : r.loss_trace.back();
}

TrainResult fit(const std::vector<TrainingSample>& samples, const PipelineConfig& cfg,
                std::uint64_t seed) {
  TrainConfig tc = cfg.train;
  tc.seed = seed;
  if (cfg.auto_learning_rate) {
    tc.learning_rate = stable_learning_rate(samples, tc.smooth_l1_beta);
  }
  return train(samples, tc);
}

}  // namespace

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
  return config_to_json(a) == config_to_json(b);
}

void validate(const PipelineConfig& c) {
  require(c.k >= 1, "k must be >= 1");
  require(c.samples_per_bin_side >= 1, "samples_per_bin_side must be >= 1");
  require(c.channels_out >= min_scene_channels(c.scene),
          "channels_out must be >= num_classes + " + std::to_string(kPoseChannels));
  require(in_open_unit(c.pos_iou_thresh), "pos_iou_thresh must be in (0, 1)");
  require(c.nms_thresh > 0.0 && c.nms_thresh <= 1.0, "nms_thresh must be in (0, 1]");
  require(c.rroi_nms_thresh > 0.0 && c.rroi_nms_thresh <= 1.0,
          "rroi_nms_thresh must be in (0, 1]");
  require(c.score_thresh >= 0.0 && c.score_thresh <= 1.0, "score_thresh must be in [0, 1]");
  require(in_open_unit(c.eval_iou_thresh), "eval_iou_thresh must be in (0, 1)");
  require(c.context_long >= 1.0 && c.context_short >= 1.0, "context factors must be >= 1");
  require(c.train_scenes >= 1 && c.test_scenes >= 1, "scene counts must be >= 1");
  require(c.train.learning_rate >= 0.0, "learning_rate must be >= 0");
  require(c.train.epochs >= 1, "epochs must be >= 1");
  require(c.train.batch_size >= 1, "batch_size must be >= 1");
  require(c.train.smooth_l1_beta > 0.0, "smooth_l1_beta must be > 0");
  require(c.scene.num_classes >= 1, "num_classes must be >= 1");
  require(c.scene.min_objects <= c.scene.max_objects, "min_objects > max_objects");
  require(c.scene.max_objects <= 50, "at most 50 objects per scene");
}

std::string config_to_json(const PipelineConfig& c) {
  json j = {{"k", c.k},
            {"samples_per_bin_side", c.samples_per_bin_side},
            {"channels_out", c.channels_out},
            {"position_sensitive", c.position_sensitive},
            {"pos_iou_thresh", c.pos_iou_thresh},
            {"nms_thresh", c.nms_thresh},
            {"score_thresh", c.score_thresh},
            {"eval_iou_thresh", c.eval_iou_thresh},
            {"context_long", c.context_long},
            {"context_short", c.context_short},
            {"rroi_nms_enabled", c.rroi_nms_enabled},
            {"rroi_nms_thresh", c.rroi_nms_thresh},
            {"second_stage_regression", c.second_stage_regression},
            {"seed", c.seed},
            {"train_scenes", c.train_scenes},
            {"test_scenes", c.test_scenes},
            {"oracle_learner", c.oracle_learner},
            {"auto_learning_rate", c.auto_learning_rate},
            {"train", train_to_json(c.train)},
            {"scene", scene_to_json(c.scene)}};
  return j.dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  PipelineConfig c;
  try {
    std::set<std::string> seen;
    read(j, "k", c.k, seen);
    read(j, "samples_per_bin_side", c.samples_per_bin_side, seen);
    read(j, "channels_out", c.channels_out, seen);
    read(j, "position_sensitive", c.position_sensitive, seen);
    read(j, "pos_iou_thresh", c.pos_iou_thresh, seen);
    read(j, "nms_thresh", c.nms_thresh, seen);
    read(j, "score_thresh", c.score_thresh, seen);
    read(j, "eval_iou_thresh", c.eval_iou_thresh, seen);
    read(j, "context_long", c.context_long, seen);
    read(j, "context_short", c.context_short, seen);
    read(j, "rroi_nms_enabled", c.rroi_nms_enabled, seen);
    read(j, "rroi_nms_thresh", c.rroi_nms_thresh, seen);
    read(j, "second_stage_regression", c.second_stage_regression, seen);
    read(j, "seed", c.seed, seen);
    read(j, "train_scenes", c.train_scenes, seen);
    read(j, "test_scenes", c.test_scenes, seen);
    read(j, "oracle_learner", c.oracle_learner, seen);
    read(j, "auto_learning_rate", c.auto_learning_rate, seen);
    seen.insert("train");
    seen.insert("scene");
    reject_unknown(j, seen, "");
    if (j.contains("train")) {
      const json& t = j.at("train");
      std::set<std::string> ts;
      read(t, "learning_rate", c.train.learning_rate, ts);
      read(t, "epochs", c.train.epochs, ts);
      read(t, "batch_size", c.train.batch_size, ts);
      read(t, "smooth_l1_beta", c.train.smooth_l1_beta, ts);
      reject_unknown(t, ts, "train.");
    }
    if (j.contains("scene")) {
      const json& s = j.at("scene");
      std::set<std::string> ss;
      read(s, "image_size", c.scene.image_size, ss);
      read(s, "min_objects", c.scene.min_objects, ss);
      read(s, "max_objects", c.scene.max_objects, ss);
      read(s, "num_classes", c.scene.num_classes, ss);
      read(s, "min_long_side", c.scene.min_long_side, ss);
      read(s, "max_long_side", c.scene.max_long_side, ss);
      read(s, "min_aspect", c.scene.min_aspect, ss);
      read(s, "max_aspect", c.scene.max_aspect, ss);
      read(s, "hrois_per_object", c.scene.hrois_per_object, ss);
      read(s, "background_hrois", c.scene.background_hrois, ss);
      read(s, "center_jitter", c.scene.center_jitter, ss);
      read(s, "scale_jitter", c.scene.scale_jitter, ss);
      read(s, "field_margin", c.scene.field_margin, ss);
      reject_unknown(s, ss, "scene.");
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

std::vector<std::string> synthetic_class_names(std::size_t num_classes) {
  static const char* kNames[] = {"plane", "ship", "large-vehicle", "small-vehicle",
                                 "harbor", "bridge"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < num_classes; ++i) {
    out.push_back(i < std::size(kNames) ? kNames[i] : "class-" + std::to_string(i));
  }
  return out;
}

DemoResult run_demo(const PipelineConfig& cfg) {
  validate(cfg);
  std::mt19937_64 master(cfg.seed);
  const std::uint64_t train_seed = master();
  const std::uint64_t test_seed = master();
  const std::uint64_t shuffle1_seed = master();
  const std::uint64_t shuffle2_seed = master();

  DemoResult result;
  result.class_names = synthetic_class_names(cfg.scene.num_classes);

  SynthesisOptions synth;
  synth.scene = cfg.scene;
  synth.align = {cfg.k, cfg.samples_per_bin_side};
  synth.channels_out = cfg.channels_out;
  synth.pos_iou_thresh = cfg.pos_iou_thresh;

  if (!cfg.oracle_learner) {
    // Stage 1: HRoI features -> offsets of the matched rotated ground truth.
    SyntheticSet set = synthesize_training_set(cfg.train_scenes, train_seed, synth);
    result.stage1_samples = set.samples.size();
    if (set.samples.empty()) throw InvalidArgument("synthetic training set has no positives");
    TrainResult r1 = fit(set.samples, cfg, shuffle1_seed);
    result.stage1_final_loss = final_loss(r1);
    result.stage1_model = std::move(r1.model);

    // Stage 2: features of the context-enlarged RRoIs -> offsets of the
    // ground truth relative to the RRoI.
    if (cfg.second_stage_regression) {
      std::vector<TrainingSample> samples2;
      for (const Scene& scene : set.scenes) {
        const FeatureTensor feature = render(scene, cfg);
        const std::vector<OrientedBox> gts = scene.gt_boxes();
        const Stage1 s1 = run_stage1(scene, feature, gts, &*result.stage1_model, cfg);
        const auto assignments = assign_rotated(s1.rrois, gts, cfg.pos_iou_thresh);
        const TargetSet targets = build_targets(s1.rrois, assignments, gts);
        for (std::size_t t = 0; t < targets.positive_indices.size(); ++t) {
          const OrientedBox& r = s1.rrois[targets.positive_indices[t]];
          samples2.push_back({flatten(warp(feature, context_region(r, cfg), cfg)),
                              wrap_angle_offset(targets.targets[t])});
        }
      }
      result.stage2_samples = samples2.size();
      if (!samples2.empty()) {
        TrainResult r2 = fit(samples2, cfg, shuffle2_seed);
        result.stage2_final_loss = final_loss(r2);
        result.stage2_model = std::move(r2.model);
      }
    }
  }

  std::mt19937_64 test_rng(test_seed);
  std::vector<ImageRecord> records;
  double hroi_iou_sum = 0.0;
  double rroi_iou_sum = 0.0;
  std::size_t gts_total = 0;
  std::size_t gts_recalled = 0;

  for (std::size_t s = 0; s < cfg.test_scenes; ++s) {
    const Scene scene = generate_scene(cfg.scene, test_rng);
    const FeatureTensor feature = render(scene, cfg);
    const std::vector<OrientedBox> gts = scene.gt_boxes();
    const LinearRegressor* model1 =
        cfg.oracle_learner ? nullptr : &*result.stage1_model;
    const Stage1 s1 = run_stage1(scene, feature, gts, model1, cfg);

    for (std::size_t h = 0; h < scene.hrois.size(); ++h) {
      const Assignment& a = s1.hroi_assignments[h];
      if (!a.positive()) continue;
      const OrientedBox& gt = gts[*a.gt_index];
      ++result.matched_hrois;
      hroi_iou_sum += iou_oriented(lift(scene.hrois[h]), gt);
      rroi_iou_sum += iou_oriented(s1.decoded[h], gt);
    }
    result.hroi_count += scene.hrois.size();
    result.rroi_count += s1.rrois.size();
    for (const OrientedBox& g : gts) {
      ++gts_total;
      for (const OrientedBox& r : s1.rrois) {
        if (iou_oriented(r, g) > cfg.eval_iou_thresh) {
          ++gts_recalled;
          break;
        }
      }
    }

    const auto assignments2 = assign_rotated(s1.rrois, gts, cfg.pos_iou_thresh);
    std::vector<Detection> dets;
    for (std::size_t r = 0; r < s1.rrois.size(); ++r) {
      const OrientedBox& rroi = s1.rrois[r];
      OffsetVector t;
      if (cfg.second_stage_regression) {
        if (cfg.oracle_learner) {
          if (assignments2[r].positive()) t = encode(rroi, gts[*assignments2[r].gt_index]);
        } else if (result.stage2_model) {
          t = predict(*result.stage2_model, warp(feature, context_region(rroi, cfg), cfg));
        }
      }
      const OrientedBox final_box = decode(rroi, t);
      const ClassScore sc = score_box(feature, final_box, cfg);
      dets.push_back(make_detection(final_box, sc.score, sc.class_id));
    }
    dets = score_filter(dets, cfg.score_thresh);
    SceneDetections out;
    for (const std::size_t i : rotated_nms(dets, NmsOptions{cfg.nms_thresh, false})) {
      out.detections.push_back(dets[i]);
    }
    for (const SceneObject& o : scene.objects) {
      out.ground_truth.push_back({o.box, o.class_id, false});
    }
    records.push_back({out.detections, out.ground_truth});
    result.scenes.push_back(std::move(out));
  }

  if (result.matched_hrois > 0) {
    result.mean_hroi_iou = hroi_iou_sum / static_cast<double>(result.matched_hrois);
    result.mean_rroi_iou = rroi_iou_sum / static_cast<double>(result.matched_hrois);
  }
  result.rroi_recall =
      gts_total > 0 ? static_cast<double>(gts_recalled) / static_cast<double>(gts_total) : 0.0;
  result.report = evaluate(records, result.class_names, cfg.eval_iou_thresh);
  return result;
}

std::string demo_manifest(const PipelineConfig& config, const DemoResult& r) {
  json per_class = json::array();
  for (const ClassResult& c : r.report.classes) {
    per_class.push_back({{"name", c.name}, {"n_gt", c.n_gt}, {"n_det", c.n_det},
                         {"ap", c.curve.ap}});
  }
  std::size_t detections = 0;
  for (const SceneDetections& s : r.scenes) detections += s.detections.size();
  json j = {{"format", "rroi-demo-manifest"},
            {"version", 1},
            {"config", json::parse(config_to_json(config))},
            {"metrics",
             {{"stage1_samples", r.stage1_samples},
              {"stage2_samples", r.stage2_samples},
              {"stage1_final_loss", r.stage1_final_loss},
              {"stage2_final_loss", r.stage2_final_loss},
              {"matched_hrois", r.matched_hrois},
              {"mean_hroi_iou", r.mean_hroi_iou},
              {"mean_rroi_iou", r.mean_rroi_iou},
              {"hroi_count", r.hroi_count},
              {"rroi_count", r.rroi_count},
              {"rroi_recall", r.rroi_recall},
              {"detections", detections},
              {"mAP", r.report.map},
              {"per_class", per_class}}}};
  return j.dump(2) + "\n";
}

}  // namespace rroi
