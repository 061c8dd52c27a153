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

// Acceptance checks. Usage: rroi_acceptance [check...]; no arguments runs
// every check. One PASS or FAIL line per check; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rroi/assigner.h"
#include "rroi/dota_io.h"
#include "rroi/encoding.h"
#include "rroi/errors.h"
#include "rroi/eval.h"
#include "rroi/geometry.h"
#include "rroi/learner.h"
#include "rroi/nms.h"
#include "rroi/pipeline.h"
#include "rroi/roi_align.h"
#include "support/oracles.h"

namespace rroi {
namespace {

using namespace rroi::testing;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double box_error(const OrientedBox& a, const OrientedBox& b) {
  return std::max({std::fabs(a.cx() - b.cx()), std::fabs(a.cy() - b.cy()),
                   std::fabs(a.w() - b.w()), std::fabs(a.h() - b.h()),
                   circular_distance(a.theta(), b.theta(), kPi)});
}

double offset_error(const OffsetVector& a, const OffsetVector& b) {
  return std::max({std::fabs(a.tx - b.tx), std::fabs(a.ty - b.ty), std::fabs(a.tw - b.tw),
                   std::fabs(a.th - b.th), circular_distance(a.ttheta, b.ttheta, 1.0)});
}

// ---------------------------------------------------------------------------

Verdict iou_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const OrientedBox a = random_box(rng);
    const OrientedBox b = t % 10 == 0 ? random_box(rng) : random_neighbour(rng, a);
    const double mc = monte_carlo_overlap(a, b, 1000, 5000 + t).iou;
    worst = std::max(worst, std::fabs(iou_oriented(a, b) - mc));
  }
  const double third =
      iou_oriented(OrientedBox(0.5, 0.5, 1, 1, 0), OrientedBox(1.0, 0.5, 1, 1, 0));
  const double octagon =
      iou_oriented(OrientedBox(0, 0, 1, 1, 0), OrientedBox(0, 0, 1, 1, kPi / 4));
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = worst < 3e-3 && std::fabs(third - 1.0 / 3.0) < 1e-6 &&
           std::fabs(octagon - 0.707107) < 1e-6 && secs < 60;
  v.detail = fmt("max |iou - mc| %.2e, offset squares %.9f, rotated square %.9f, %.1f s", worst,
                 third, octagon, secs);
  return v;
}

Verdict encode_decode() {
  std::mt19937_64 rng(1002);
  double roundtrip = 0;
  for (int t = 0; t < 10000; ++t) {
    const OrientedBox r = random_box(rng, 100, 1, 50);
    const OrientedBox g = random_box(rng, 100, 1, 50);
    roundtrip = std::max(roundtrip, box_error(decode(r, encode(r, g)), canonicalize(g)));
  }
  double rigid = 0;
  for (int t = 0; t < 1000; ++t) {
    const OrientedBox r = random_box(rng);
    const OrientedBox g = random_box(rng);
    const RigidMotion m = random_motion(rng);
    rigid = std::max(rigid, offset_error(encode(m.apply(r), m.apply(g)), encode(r, g)));
  }
  return {roundtrip < 1e-9 && rigid < 1e-9,
          fmt("roundtrip max error %.2e, rigid-motion max error %.2e", roundtrip, rigid)};
}

FeatureTensor random_field(std::mt19937_64& rng, std::size_t h, std::size_t w, std::size_t c) {
  FeatureTensor t(h, w, c);
  for (double& v : t.data()) v = uniform_in(rng, -1, 1);
  return t;
}

FeatureTensor quarter_turn(const FeatureTensor& f) {
  FeatureTensor r(f.width(), f.height(), f.channels());
  for (std::size_t y = 0; y < f.height(); ++y) {
    for (std::size_t x = 0; x < f.width(); ++x) {
      for (std::size_t c = 0; c < f.channels(); ++c) {
        r.at(x, f.height() - 1 - y, c) = f.at(y, x, c);
      }
    }
  }
  return r;
}

double max_abs_diff(const PooledFeature& a, const PooledFeature& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

OrientedBox box_in_grid(std::mt19937_64& rng, double size) {
  const double w = uniform_in(rng, 2, 12), h = uniform_in(rng, 2, 12);
  const double r = 0.5 * std::hypot(w, h) + 1;
  return OrientedBox(uniform_in(rng, r, size - 1 - r), uniform_in(rng, r, size - 1 - r), w, h,
                     uniform_in(rng, -kPi, kPi));
}

Verdict rps_align() {
  std::mt19937_64 rng(1003);
  const std::size_t k = 7, n = 2;

  double constant = 0;
  const double value = 0.3718281828;
  const FeatureTensor flat(40, 40, k * k * 3, value);
  for (int t = 0; t < 200; ++t) {
    const PooledFeature p = rps_roi_align(flat, box_in_grid(rng, 40), k, n);
    for (double x : p.data()) {
      constant = std::max(constant, std::fabs(x - value));
    }
  }

  double affine = 0;
  for (int t = 0; t < 100; ++t) {
    const double a = uniform_in(rng, -2, 2), b = uniform_in(rng, -2, 2), c = uniform_in(rng, -5, 5);
    FeatureTensor f(48, 48, 4 * 4 * 2);
    for (std::size_t y = 0; y < 48; ++y) {
      for (std::size_t x = 0; x < 48; ++x) {
        for (std::size_t ch = 0; ch < f.channels(); ++ch) f.at(y, x, ch) = a * x + b * y + c;
      }
    }
    const OrientedBox box = box_in_grid(rng, 48);
    const PooledFeature p = rps_roi_align(f, box, 4, 3);
    const double ct = std::cos(box.theta()), st = std::sin(box.theta());
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        const double lx = (i + 0.5) * box.w() / 4 - box.w() / 2;
        const double ly = (j + 0.5) * box.h() / 4 - box.h() / 2;
        const double want = a * (box.cx() + ct * lx - st * ly) + b * (box.cy() + st * lx + ct * ly) + c;
        for (std::size_t ch = 0; ch < 2; ++ch) {
          affine = std::max(affine, std::fabs(p.at(i, j, ch) - want));
        }
      }
    }
  }

  double equivariance = 0;
  const std::size_t size = 24;
  for (int t = 0; t < 50; ++t) {
    FeatureTensor f = random_field(rng, size, size, 3 * 3 * 2);
    OrientedBox b(uniform_in(rng, 0, size - 1), uniform_in(rng, 0, size - 1),
                  uniform_in(rng, 1, 14), uniform_in(rng, 1, 14), uniform_in(rng, -kPi, kPi));
    const PooledFeature base = rps_roi_align(f, b, 3, n);
    for (int m = 0; m < 4; ++m) {
      equivariance = std::max(equivariance, max_abs_diff(rps_roi_align(f, b, 3, n), base));
      f = quarter_turn(f);
      b = OrientedBox(static_cast<double>(size) - 1 - b.cy(), b.cx(), b.w(), b.h(),
                      b.theta() + kPi / 2);
    }
  }

  double linearity = 0;
  for (int t = 0; t < 50; ++t) {
    const FeatureTensor f = random_field(rng, 20, 20, 8), g = random_field(rng, 20, 20, 8);
    const double alpha = uniform_in(rng, -3, 3), beta = uniform_in(rng, -3, 3);
    FeatureTensor mix(20, 20, 8);
    for (std::size_t i = 0; i < mix.data().size(); ++i) {
      mix.data()[i] = alpha * f.data()[i] + beta * g.data()[i];
    }
    const OrientedBox b(uniform_in(rng, 0, 19), uniform_in(rng, 0, 19), uniform_in(rng, 1, 15),
                        uniform_in(rng, 1, 15), uniform_in(rng, -kPi, kPi));
    const PooledFeature pf = rps_roi_align(f, b, 2, n), pg = rps_roi_align(g, b, 2, n),
                        pm = rps_roi_align(mix, b, 2, n);
    for (std::size_t i = 0; i < pm.size(); ++i) {
      linearity = std::max(linearity, std::fabs(pm.data()[i] - alpha * pf.data()[i] - beta * pg.data()[i]));
    }
  }

  return {constant == 0 && affine < 1e-9 && equivariance < 1e-6 && linearity < 1e-9,
          fmt("constant %.1e, affine %.2e, quarter turns %.2e, linearity %.2e", constant, affine,
              equivariance, linearity)};
}

OffsetVector random_offsets(std::mt19937_64& rng, double scale) {
  return {uniform_in(rng, -scale, scale), uniform_in(rng, -scale, scale),
          uniform_in(rng, -scale, scale), uniform_in(rng, -scale, scale),
          uniform_in(rng, -scale, scale)};
}

bool near_kink(const OffsetVector& p, const OffsetVector& t, double beta, double margin) {
  const auto a = p.as_array(), b = t.as_array();
  for (std::size_t i = 0; i < kNumOffsets; ++i) {
    if (std::fabs(std::fabs(a[i] - b[i]) - beta) < margin) return true;
  }
  return false;
}

Verdict gradients() {
  std::mt19937_64 rng(1004);
  const double eps = 1e-6;
  double worst_loss = 0;
  for (int checked = 0; checked < 100;) {
    const double beta = uniform_in(rng, 0.2, 2.0);
    const OffsetVector p = random_offsets(rng, 3), t = random_offsets(rng, 3);
    if (near_kink(p, t, beta, 10 * eps)) continue;
    ++checked;
    const SmoothL1 r = smooth_l1(p, t, beta);
    for (std::size_t i = 0; i < kNumOffsets; ++i) {
      const double fd = central_difference(
          [&](double x) {
            auto a = p.as_array();
            a[i] = x;
            return smooth_l1(OffsetVector::FromArray(a), t, beta).loss;
          },
          p.as_array()[i], eps);
      worst_loss = std::max(worst_loss, relative_error(r.grad[i], fd));
    }
  }

  const std::size_t dim = 6;
  const double beta = 1.0;
  std::vector<TrainingSample> set;
  for (int i = 0; i < 20; ++i) {
    TrainingSample s;
    for (std::size_t f = 0; f < dim; ++f) s.features.push_back(uniform_in(rng, -1, 1));
    s.target = random_offsets(rng, 2);
    set.push_back(std::move(s));
  }
  double worst_objective = 0;
  for (int checked = 0; checked < 100;) {
    std::vector<double> w(dim * kNumOffsets);
    for (double& x : w) x = uniform_in(rng, -1, 1);
    std::array<double, kNumOffsets> bias{};
    for (double& x : bias) x = uniform_in(rng, -1, 1);
    const LinearRegressor model(dim, std::move(w), bias);
    bool kink = false;
    for (const auto& s : set) kink = kink || near_kink(predict(model, s.features), s.target, beta, 1e-4);
    if (kink) continue;
    ++checked;
    const Objective obj = objective(model, set, beta);
    const std::size_t f = index_below(rng, dim), o = index_below(rng, kNumOffsets);
    const double fd_w = central_difference(
        [&](double x) {
          LinearRegressor m = model;
          m.weight(f, o) = x;
          return objective(m, set, beta).loss;
        },
        model.weight(f, o), eps);
    const double fd_b = central_difference(
        [&](double x) {
          LinearRegressor m = model;
          m.bias()[o] = x;
          return objective(m, set, beta).loss;
        },
        model.bias()[o], eps);
    worst_objective = std::max({worst_objective,
                                relative_error(obj.weight_grad[f * kNumOffsets + o], fd_w),
                                relative_error(obj.bias_grad[o], fd_b)});
  }
  return {worst_loss < 1e-5 && worst_objective < 1e-5,
          fmt("smooth-L1 max relative error %.2e, objective %.2e", worst_loss, worst_objective)};
}

Verdict brute_force() {
  std::size_t nms_bad = 0, assign_bad = 0, match_bad = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);

    std::vector<Detection> dets;
    const std::size_t nd = 1 + index_below(rng, 8);
    const OrientedBox hub = random_box(rng, 6, 1, 6);
    for (std::size_t i = 0; i < nd; ++i) {
      dets.push_back(make_detection(random_neighbour(rng, hub),
                                    static_cast<double>(index_below(rng, 6)) / 5.0,
                                    index_below(rng, 2)));
    }
    const auto self = iou_table(nd, nd, [&](std::size_t i, std::size_t j) {
      return iou_oriented(dets[i].box, dets[j].box);
    });
    const double nms_thresh = uniform_in(rng, 0.05, 0.95);
    const bool agnostic = seed % 2 == 0;
    if (rotated_nms(dets, NmsOptions{nms_thresh, agnostic}) !=
        greedy_nms_oracle(dets, self, nms_thresh, agnostic)) {
      ++nms_bad;
    }

    std::vector<GroundTruth> gts;
    std::vector<OrientedBox> gt_boxes, props;
    const std::size_t ng = 1 + index_below(rng, 8);
    for (std::size_t i = 0; i < ng; ++i) {
      gt_boxes.push_back(random_box(rng, 6, 1, 5));
      gts.push_back({gt_boxes.back(), index_below(rng, 2), index_below(rng, 5) == 0});
    }
    const std::size_t np = 1 + index_below(rng, 8);
    for (std::size_t i = 0; i < np; ++i) {
      props.push_back(random_neighbour(rng, gt_boxes[index_below(rng, ng)]));
    }
    const double pos_thresh = uniform_in(rng, 0.1, 0.9);
    const auto table = iou_table(np, ng, [&](std::size_t i, std::size_t j) {
      return iou_oriented(props[i], gt_boxes[j]);
    });
    const auto oracle = assignment_oracle(table, pos_thresh);
    const auto got = assign_rotated(props, gt_boxes, pos_thresh);
    for (std::size_t i = 0; i < np; ++i) {
      if (got[i].gt_index != oracle[i].gt || got[i].positive() != oracle[i].gt.has_value()) {
        ++assign_bad;
        break;
      }
    }

    std::vector<Detection> scored;
    for (std::size_t i = 0; i < np; ++i) {
      scored.push_back(make_detection(props[i], static_cast<double>(index_below(rng, 6)) / 5.0,
                                      index_below(rng, 2)));
    }
    const double match_thresh = uniform_in(rng, 0.1, 0.8);
    if (match_detections(scored, gts, match_thresh) !=
        matching_oracle(scored, gts, table, match_thresh)) {
      ++match_bad;
    }
  }
  return {nms_bad == 0 && assign_bad == 0 && match_bad == 0,
          fmt("200 seeds, mismatches: nms %.0f, assigner %.0f, matching %.0f",
              static_cast<double>(nms_bad), static_cast<double>(assign_bad),
              static_cast<double>(match_bad))};
}

Verdict elongated_nms() {
  const OrientedBox a(50, 50, 40, 4, 0.3);
  const OrientedBox b(50, 50, 40, 4, 0.3 + 0.12);
  const double exact = iou_oriented(a, b);
  const double mc = monte_carlo_overlap(a, b, 1000, 1005).iou;
  const std::vector<Detection> dets{make_detection(a, 0.9, 0), make_detection(b, 0.8, 0)};
  const std::size_t kept = rotated_nms(dets, 0.5).size();
  return {exact < 0.5 && mc < 0.5 && kept == 2,
          fmt("aspect 10, dtheta 0.12: iou %.6f, monte carlo %.6f, kept %.0f of 2 at 0.5", exact,
              mc, static_cast<double>(kept))};
}

Verdict demo() {
  const auto t0 = Clock::now();
  PipelineConfig oracle;
  oracle.oracle_learner = true;
  oracle.train_scenes = 2;
  oracle.test_scenes = 10;
  oracle.scene.image_size = 512;
  oracle.scene.min_objects = 40;
  oracle.scene.max_objects = 50;
  const DemoResult perfect = run_demo(oracle);

  const DemoResult trained = run_demo(PipelineConfig{});
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = perfect.report.map == 1.0 && trained.mean_rroi_iou > trained.mean_hroi_iou &&
           trained.report.map >= 0.9 && secs < 300;
  v.detail = fmt("oracle mAP %.4f; trained mAP %.4f, mean IoU rroi %.4f vs hroi %.4f", perfect.report.map,
                 trained.report.map, trained.mean_rroi_iou, trained.mean_hroi_iou) +
             fmt(", %.1f s", secs);
  return v;
}

Verdict tiling() {
  const auto offs = tile_axis(2048, 1024, 824);
  const auto windows = tile_windows(2048, 1024, 1024, 824);
  bool ok = offs == std::vector<std::size_t>{0, 824, 1024} && windows.size() == 3;
  std::mt19937_64 rng(1006);
  std::size_t broken = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t window = 1 + index_below(rng, 300);
    const std::size_t stride = 1 + index_below(rng, window);
    const std::size_t dim = window + index_below(rng, 2000);
    const auto o = tile_axis(dim, window, stride);
    std::size_t covered = 0;
    bool good = !o.empty() && o.front() == 0;
    for (std::size_t i = 0; good && i < o.size(); ++i) {
      good = o[i] + window <= dim && o[i] <= covered && (i == 0 || o[i] > o[i - 1]);
      covered = std::max(covered, o[i] + window);
    }
    if (!good || covered != dim) ++broken;
  }
  ok = ok && broken == 0;
  return {ok, fmt("offsets {%.0f, %.0f, %.0f}, coverage failures %.0f of 500",
                  static_cast<double>(offs.size() > 0 ? offs[0] : 0),
                  static_cast<double>(offs.size() > 1 ? offs[1] : 0),
                  static_cast<double>(offs.size() > 2 ? offs[2] : 0), static_cast<double>(broken))};
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(RROI_FIXTURE_DIR) + "/" + name, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool error_at(const std::string& name, std::size_t line, std::size_t column) {
  try {
    parse_annotations(read_fixture(name));
  } catch (const ParseError& e) {
    return e.line() == line && e.column() == column;
  }
  return false;
}

Verdict dota_parser() {
  bool fixtures = parse_annotations(read_fixture("dota_clean.txt")).size() == 4 &&
                  parse_annotations(read_fixture("dota_crlf.txt")).size() == 2 &&
                  parse_annotations(read_fixture("empty.txt")).empty();
  fixtures = fixtures && error_at("dota_bad_token_count.txt", 4, 0) && error_at("dota_bad_number.txt", 3, 11) &&
       error_at("dota_bad_difficult.txt", 3, 23) && error_at("dota_degenerate.txt", 1, 1);

  std::mt19937_64 rng(1007);
  const std::vector<std::string> names{"plane", "ship", "harbor"};
  std::vector<Detection> dets;
  for (int i = 0; i < 1000; ++i) {
    dets.push_back(make_detection(
        canonicalize(OrientedBox(uniform_in(rng, 0, 1024), uniform_in(rng, 0, 1024),
                                 uniform_in(rng, 4, 200), uniform_in(rng, 4, 200),
                                 uniform_in(rng, 0, kPi))),
        unit(rng), index_below(rng, 3)));
  }
  const ParsedDetections back = parse_detections(write_detections(dets, names), names);
  const auto order = score_order(dets);
  double worst = back.detections.size() == dets.size() ? 0.0 : 1e9;
  for (std::size_t r = 0; worst < 1e9 && r < order.size(); ++r) {
    const auto want = corner_array(dets[order[r]].box);
    const auto got = corner_array(back.detections[r].box);
    for (const Point& p : want) {
      double best = 1e9;
      for (const Point& q : got) best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
      worst = std::max(worst, best);
    }
  }
  return {fixtures && worst < 0.01,
          std::string(fixtures ? "fixtures ok" : "fixture mismatch") +
              fmt(", write/parse max corner error %.4f px", worst)};
}

struct Check {
  const char* name;
  Verdict (*run)();
};

constexpr Check kChecks[] = {
    {"iou_oracle", iou_oracle},   {"encode_decode", encode_decode},
    {"rps_align", rps_align},     {"gradients", gradients},
    {"brute_force", brute_force}, {"elongated_nms", elongated_nms},
    {"demo", demo},               {"tiling", tiling},
    {"dota_parser", dota_parser},
};

}  // namespace
}  // namespace rroi

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& check : rroi::kChecks) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), check.name) == wanted.end()) {
      continue;
    }
    rroi::Verdict v;
    try {
      v = check.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", check.name, v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  for (const auto& name : wanted) {
    const bool known = std::any_of(std::begin(rroi::kChecks), std::end(rroi::kChecks),
                                   [&](const auto& c) { return name == c.name; });
    if (!known) {
      std::fprintf(stderr, "unknown check: %s\n", name.c_str());
      return 2;
    }
  }
  return failures == 0 ? 0 : 1;
}
