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

#include "rroi/synthetic.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rroi/assigner.h"
#include "rroi/errors.h"

namespace rroi {
namespace {

struct Region {
  double xmin, ymin, xmax, ymax;

  bool overlaps(const Region& o) const {
    return xmin < o.xmax && o.xmin < xmax && ymin < o.ymax && o.ymin < ymax;
  }
};

Region neighbourhood(const OrientedBox& box, double margin) {
  const AlignedBox hull = aligned_hull(box);
  const double hx = 0.5 * margin * hull.width();
  const double hy = 0.5 * margin * hull.height();
  return {box.cx() - hx, box.cy() - hy, box.cx() + hx, box.cy() + hy};
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

void check_config(const SceneConfig& c) {
  if (c.image_size < 8) throw InvalidArgument("image_size must be >= 8");
  if (c.num_classes < 1) throw InvalidArgument("num_classes must be >= 1");
  if (c.min_objects > c.max_objects) throw InvalidArgument("min_objects > max_objects");
  if (!(c.min_long_side > 0.0) || c.min_long_side > c.max_long_side) {
    throw InvalidArgument("invalid long side range");
  }
  if (!(c.min_aspect >= 1.0) || c.min_aspect > c.max_aspect) {
    throw InvalidArgument("invalid aspect range");
  }
  if (c.center_jitter < 0.0 || c.scale_jitter < 0.0 || !(c.field_margin >= 1.0)) {
    throw InvalidArgument("invalid jitter or field margin");
  }
}

}  // namespace

std::vector<OrientedBox> Scene::gt_boxes() const {
  std::vector<OrientedBox> out;
  out.reserve(objects.size());
  for (const SceneObject& o : objects) out.push_back(o.box);
  return out;
}

std::size_t min_scene_channels(const SceneConfig& config) {
  return config.num_classes + kPoseChannels;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // 53 random mantissa bits; independent of std::uniform_real_distribution.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Scene generate_scene(const SceneConfig& config, std::mt19937_64& rng) {
  check_config(config);
  Scene scene;
  scene.width = config.image_size;
  scene.height = config.image_size;
  const double size = static_cast<double>(config.image_size);
  const std::size_t wanted = pick(rng, config.min_objects, config.max_objects);

  std::vector<Region> regions;
  for (std::size_t n = 0; n < wanted; ++n) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const std::size_t cls = pick(rng, 0, config.num_classes - 1);
      const double long_side = uniform(rng, config.min_long_side, config.max_long_side);
      const double aspect = uniform(rng, config.min_aspect, config.max_aspect);
      const double theta = uniform(rng, 0.0, kPi);
      const double u = uniform(rng, 0.0, 1.0);
      const double v = uniform(rng, 0.0, 1.0);

      const OrientedBox probe =
          canonicalize(0.0, 0.0, long_side, long_side / aspect, theta);
      const Region r0 = neighbourhood(probe, config.field_margin);
      const double span_x = size - 1.0 - (r0.xmax - r0.xmin);
      const double span_y = size - 1.0 - (r0.ymax - r0.ymin);
      if (span_x <= 0.0 || span_y <= 0.0) continue;
      const double cx = -r0.xmin + u * span_x;
      const double cy = -r0.ymin + v * span_y;
      const OrientedBox box(cx, cy, probe.w(), probe.h(), probe.theta());
      const Region r = neighbourhood(box, config.field_margin);
      if (std::any_of(regions.begin(), regions.end(),
                      [&](const Region& o) { return o.overlaps(r); })) {
        continue;
      }
      regions.push_back(r);
      scene.objects.push_back({box, cls});
      break;
    }
  }

  for (const SceneObject& o : scene.objects) {
    const AlignedBox hull = aligned_hull(o.box);
    for (std::size_t i = 0; i < config.hrois_per_object; ++i) {
      const double dx = uniform(rng, -config.center_jitter, config.center_jitter);
      const double dy = uniform(rng, -config.center_jitter, config.center_jitter);
      const double sw = uniform(rng, -config.scale_jitter, config.scale_jitter);
      const double sh = uniform(rng, -config.scale_jitter, config.scale_jitter);
      const Point c = hull.center();
      scene.hrois.push_back(AlignedBox::FromCenter(
          c.x + dx * hull.width(), c.y + dy * hull.height(),
          hull.width() * std::exp(sw), hull.height() * std::exp(sh)));
    }
  }

  for (std::size_t n = 0; n < config.background_hrois; ++n) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const double w = uniform(rng, 0.5 * config.min_long_side, config.max_long_side);
      const double h = uniform(rng, 0.5 * config.min_long_side, config.max_long_side);
      if (!(size - 1.0 > w) || !(size - 1.0 > h)) continue;
      const double cx = uniform(rng, 0.5 * w, size - 1.0 - 0.5 * w);
      const double cy = uniform(rng, 0.5 * h, size - 1.0 - 0.5 * h);
      const Region r{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
      if (std::any_of(regions.begin(), regions.end(),
                      [&](const Region& o) { return o.overlaps(r); })) {
        continue;
      }
      scene.hrois.push_back(AlignedBox(r.xmin, r.ymin, r.xmax, r.ymax));
      break;
    }
  }
  return scene;
}

FeatureTensor render_features(const Scene& scene, const SceneConfig& config,
                              std::size_t channels_out, std::size_t groups) {
  const std::size_t base = min_scene_channels(config);
  if (channels_out < base) {
    throw ShapeError("synthetic scenes need at least " + std::to_string(base) +
                     " channels, got " + std::to_string(channels_out));
  }
  if (groups == 0) throw ShapeError("groups must be >= 1");

  struct Pose {
    double cx, cy, half_w, half_h, hull_w, hull_h;
    double fields[kPoseChannels - 2];
  };
  std::vector<Pose> poses;
  for (const SceneObject& o : scene.objects) {
    const AlignedBox hull = aligned_hull(o.box);
    const double t = o.box.theta();
    poses.push_back({o.box.cx(), o.box.cy(), 0.5 * hull.width(), 0.5 * hull.height(),
                     hull.width(), hull.height(),
                     {t / (2.0 * kPi), std::log(o.box.w() / hull.width()),
                      std::log(o.box.h() / hull.height()), std::cos(2.0 * t),
                      std::sin(2.0 * t)}});
  }

  const std::size_t channels = channels_out * groups;
  FeatureTensor out(scene.height, scene.width, channels, 0.0);
  std::vector<double> pixel(channels_out);
  for (std::size_t y = 0; y < scene.height; ++y) {
    for (std::size_t x = 0; x < scene.width; ++x) {
      std::fill(pixel.begin(), pixel.end(), 0.0);
      const Point p{static_cast<double>(x), static_cast<double>(y)};
      std::size_t owner = poses.size();
      double best = config.field_margin;
      for (std::size_t i = 0; i < poses.size(); ++i) {
        const SceneObject& o = scene.objects[i];
        if (contains(o.box, p, 0.0)) pixel[o.class_id] = 1.0;
        const double d = std::max(std::abs(p.x - poses[i].cx) / poses[i].half_w,
                                  std::abs(p.y - poses[i].cy) / poses[i].half_h);
        if (d <= best) {
          best = d;
          owner = i;
        }
      }
      if (owner < poses.size()) {
        const Pose& pose = poses[owner];
        const std::size_t c0 = config.num_classes;
        pixel[c0] = (p.x - pose.cx) / pose.hull_w;
        pixel[c0 + 1] = (p.y - pose.cy) / pose.hull_h;
        for (std::size_t f = 0; f < kPoseChannels - 2; ++f) pixel[c0 + 2 + f] = pose.fields[f];
      }
      for (std::size_t g = 0; g < groups; ++g) {
        for (std::size_t c = 0; c < channels_out; ++c) {
          out.at(y, x, g * channels_out + c) = pixel[c];
        }
      }
    }
  }
  return out;
}

SyntheticSet synthesize_training_set(std::size_t n, std::uint64_t seed,
                                     const SynthesisOptions& options) {
  if (n < 1) throw InvalidArgument("synthesize_training_set needs n >= 1");
  std::mt19937_64 rng(seed);
  SyntheticSet set;
  const std::size_t k = options.align.k;
  for (std::size_t s = 0; s < n; ++s) {
    Scene scene = generate_scene(options.scene, rng);
    const std::vector<OrientedBox> gts = scene.gt_boxes();
    const auto assignments =
        assign_horizontal(scene.hrois, gts, options.pos_iou_thresh);
    const TargetSet targets = build_targets(scene.hrois, assignments, gts);
    if (!targets.positive_indices.empty()) {
      const FeatureTensor feature =
          render_features(scene, options.scene, options.channels_out, k * k);
      for (std::size_t t = 0; t < targets.positive_indices.size(); ++t) {
        const std::size_t h = targets.positive_indices[t];
        const PooledFeature pooled = rps_roi_align(
            feature, lift(scene.hrois[h]), k, options.align.samples_per_bin_side);
        set.samples.push_back(
            {std::vector<double>(pooled.data().begin(), pooled.data().end()),
             targets.targets[t]});
        set.origin.push_back({s, h, *assignments[h].gt_index});
      }
    }
    set.scenes.push_back(std::move(scene));
  }
  return set;
}

}  // namespace rroi
