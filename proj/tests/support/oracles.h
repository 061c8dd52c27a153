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

// Reference implementations used by the tests. None of these call the
// clipping code; where a library call is used (IoU tables for the greedy
// oracles) it is only to feed the combinatorial part under test.

#ifndef RROI_TESTS_SUPPORT_ORACLES_H_
#define RROI_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "rroi/assigner.h"
#include "rroi/eval.h"
#include "rroi/geometry.h"
#include "rroi/nms.h"

namespace rroi::testing {

inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit(rng);
}

inline std::size_t index_below(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

// Raw (not necessarily canonical) box with sides in [min_side, max_side].
inline OrientedBox random_box(std::mt19937_64& rng, double span = 10.0,
                              double min_side = 0.5, double max_side = 8.0) {
  return OrientedBox(uniform_in(rng, -span, span), uniform_in(rng, -span, span),
                     uniform_in(rng, min_side, max_side), uniform_in(rng, min_side, max_side),
                     uniform_in(rng, -2.0 * kPi, 2.0 * kPi));
}

// A second box placed near `a` so that overlaps of every size occur.
inline OrientedBox random_neighbour(std::mt19937_64& rng, const OrientedBox& a) {
  const double reach = 0.6 * (a.w() + a.h());
  return OrientedBox(a.cx() + uniform_in(rng, -reach, reach),
                     a.cy() + uniform_in(rng, -reach, reach),
                     a.w() * std::exp(uniform_in(rng, -0.7, 0.7)),
                     a.h() * std::exp(uniform_in(rng, -0.7, 0.7)),
                     uniform_in(rng, -kPi, kPi));
}

// Smallest distance between a and b on a circle of the given period.
inline double circular_distance(double a, double b, double period) {
  const double d = std::fmod(std::fabs(a - b), period);
  return std::min(d, period - d);
}

struct RigidMotion {
  double phi = 0.0;
  double tx = 0.0;
  double ty = 0.0;

  Point apply(Point p) const {
    const double c = std::cos(phi), s = std::sin(phi);
    return {c * p.x - s * p.y + tx, s * p.x + c * p.y + ty};
  }
  OrientedBox apply(const OrientedBox& b) const {
    const Point q = apply(b.center());
    return OrientedBox(q.x, q.y, b.w(), b.h(), b.theta() + phi);
  }
};

inline RigidMotion random_motion(std::mt19937_64& rng, double span = 50.0) {
  return {uniform_in(rng, -kPi, kPi), uniform_in(rng, -span, span),
          uniform_in(rng, -span, span)};
}

// Point-in-rectangle in the box's own frame.
struct LocalFrame {
  double cx, cy, c, s, hw, hh;
  explicit LocalFrame(const OrientedBox& b)
      : cx(b.cx()), cy(b.cy()), c(std::cos(b.theta())), s(std::sin(b.theta())),
        hw(0.5 * b.w()), hh(0.5 * b.h()) {}
  bool inside(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    return std::fabs(dx * c + dy * s) <= hw && std::fabs(-dx * s + dy * c) <= hh;
  }
};

struct Extent {
  double xmin, ymin, xmax, ymax;
};

inline Extent box_extent(const OrientedBox& b) {
  const double c = std::fabs(std::cos(b.theta())), s = std::fabs(std::sin(b.theta()));
  const double ex = 0.5 * (b.w() * c + b.h() * s);
  const double ey = 0.5 * (b.w() * s + b.h() * c);
  return {b.cx() - ex, b.cy() - ey, b.cx() + ex, b.cy() + ey};
}

struct MonteCarloOverlap {
  double intersection = 0.0;
  double union_area = 0.0;
  double iou = 0.0;
};

// Stratified jittered sampling: one uniform point per cell of a
// grid x grid partition of the union's aligned hull.
inline MonteCarloOverlap monte_carlo_overlap(const OrientedBox& a, const OrientedBox& b,
                                             int grid, std::uint64_t seed) {
  const Extent ea = box_extent(a), eb = box_extent(b);
  const double x0 = std::min(ea.xmin, eb.xmin), x1 = std::max(ea.xmax, eb.xmax);
  const double y0 = std::min(ea.ymin, eb.ymin), y1 = std::max(ea.ymax, eb.ymax);
  const double dx = (x1 - x0) / grid, dy = (y1 - y0) / grid;
  const LocalFrame fa(a), fb(b);
  std::mt19937_64 rng(seed);
  std::uint64_t both = 0, either = 0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double x = x0 + (i + unit(rng)) * dx;
      const double y = y0 + (j + unit(rng)) * dy;
      const bool in_a = fa.inside(x, y), in_b = fb.inside(x, y);
      both += (in_a && in_b) ? 1 : 0;
      either += (in_a || in_b) ? 1 : 0;
    }
  }
  const double cell = dx * dy;
  MonteCarloOverlap r;
  r.intersection = static_cast<double>(both) * cell;
  r.union_area = static_cast<double>(either) * cell;
  r.iou = either == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(either);
  return r;
}

inline double central_difference(const std::function<double(double)>& f, double x,
                                 double eps) {
  return (f(x + eps) - f(x - eps)) / (2.0 * eps);
}

inline double relative_error(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

using Matrix = std::vector<std::vector<double>>;

inline Matrix iou_table(std::size_t rows, std::size_t cols,
                        const std::function<double(std::size_t, std::size_t)>& iou) {
  Matrix t(rows, std::vector<double>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[i][j] = iou(i, j);
  }
  return t;
}

// Greedy NMS by repeated extraction: take the best remaining detection,
// then delete everything it overlaps above the threshold.
inline std::vector<std::size_t> greedy_nms_oracle(const std::vector<Detection>& dets,
                                                  const Matrix& iou, double thresh,
                                                  bool class_agnostic) {
  std::vector<bool> alive(dets.size(), true);
  std::vector<std::size_t> kept;
  for (;;) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (alive[i] && (!best || dets[i].score > dets[*best].score)) best = i;
    }
    if (!best) break;
    kept.push_back(*best);
    alive[*best] = false;
    for (std::size_t j = 0; j < dets.size(); ++j) {
      const bool same = class_agnostic || dets[j].class_id == dets[*best].class_id;
      if (alive[j] && same && iou[*best][j] > thresh) alive[j] = false;
    }
  }
  return kept;
}

struct OracleAssignment {
  std::optional<std::size_t> gt;
  double best = 0.0;
};

// Row-wise argmax over the table; the first maximum wins.
inline std::vector<OracleAssignment> assignment_oracle(const Matrix& iou, double thresh) {
  std::vector<OracleAssignment> out;
  for (const auto& row : iou) {
    OracleAssignment a;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] > row[arg]) arg = j;
    }
    if (!row.empty()) {
      a.best = row[arg];
      if (a.best > thresh) a.gt = arg;
    }
    out.push_back(a);
  }
  return out;
}

// Detections visited in score order; each looks at every same-class gt not
// yet claimed by a true positive and takes the first one of maximal IoU.
inline std::vector<MatchFlag> matching_oracle(const std::vector<Detection>& dets,
                                              const std::vector<GroundTruth>& gts,
                                              const Matrix& iou, double thresh) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });
  std::vector<MatchFlag> flags(dets.size(), MatchFlag::kFalsePositive);
  std::vector<bool> claimed(gts.size(), false);
  for (std::size_t d : order) {
    double best = -1.0;
    std::size_t arg = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (claimed[g] || gts[g].class_id != dets[d].class_id) continue;
      if (iou[d][g] > best) {
        best = iou[d][g];
        arg = g;
      }
    }
    if (arg == gts.size() || !(best > thresh)) continue;
    if (gts[arg].difficult) {
      flags[d] = MatchFlag::kIgnored;
    } else {
      flags[d] = MatchFlag::kTruePositive;
      claimed[arg] = true;
    }
  }
  return flags;
}

}  // namespace rroi::testing

#endif  // RROI_TESTS_SUPPORT_ORACLES_H_
