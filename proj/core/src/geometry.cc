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

#include "rroi/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rroi/errors.h"

namespace rroi {
namespace {

constexpr double kEdgeEps = 1e-9;
constexpr double kMinArea = 1e-12;

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Fixed-capacity vertex buffer for the box/box path. Each clip edge adds at
// most one vertex, so four edges on a quad need at most 8.
struct SmallPoly {
  static constexpr std::size_t kCapacity = 32;
  std::array<Point, kCapacity> pts;
  std::size_t n = 0;

  void clear() { n = 0; }
  void push_back(Point p) {
    if (n < kCapacity) pts[n++] = p;
  }
  std::size_t size() const { return n; }
  const Point& operator[](std::size_t i) const { return pts[i]; }
  std::span<const Point> span() const { return {pts.data(), n}; }
};

struct VecPoly {
  std::vector<Point> pts;

  void clear() { pts.clear(); }
  void push_back(Point p) { pts.push_back(p); }
  std::size_t size() const { return pts.size(); }
  const Point& operator[](std::size_t i) const { return pts[i]; }
  std::span<const Point> span() const { return pts; }
};

// Clips `subject` against every edge of the positively oriented convex
// polygon `clip`. `out` receives the result; `scratch` is working storage.
template <typename Buf>
void clip_polygon(std::span<const Point> subject, std::span<const Point> clip,
                  Buf& out, Buf& scratch) {
  out.clear();
  for (const Point& p : subject) out.push_back(p);
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && out.size() > 0; ++e) {
    const Point a = clip[e];
    const Point b = clip[(e + 1) % m];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len <= 0.0) continue;
    std::swap(out, scratch);
    out.clear();
    const std::size_t n = scratch.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point s = scratch[(i + n - 1) % n];
      const Point t = scratch[i];
      const double ds = cross(a, b, s) / len;
      const double dt = cross(a, b, t) / len;
      const bool s_in = ds >= -kEdgeEps;
      const bool t_in = dt >= -kEdgeEps;
      if (t_in != s_in) {
        double u = ds / (ds - dt);
        u = std::clamp(u, 0.0, 1.0);
        out.push_back({s.x + u * (t.x - s.x), s.y + u * (t.y - s.y)});
      }
      if (t_in) out.push_back(t);
    }
  }
}

template <typename Buf>
void compact(const Buf& in, std::vector<Point>& out) {
  out.clear();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Point p = in[i];
    if (!out.empty() && std::abs(p.x - out.back().x) <= kMinArea &&
        std::abs(p.y - out.back().y) <= kMinArea) {
      continue;
    }
    out.push_back(p);
  }
  while (out.size() > 1 && std::abs(out.front().x - out.back().x) <= kMinArea &&
         std::abs(out.front().y - out.back().y) <= kMinArea) {
    out.pop_back();
  }
  if (out.size() < 3 || signed_area(out) < kMinArea) out.clear();
}

bool segments_cross(Point p1, Point p2, Point q1, Point q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Andrew's monotone chain; returns the hull with positive orientation.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point p = pts[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

OrientedBox::OrientedBox(double cx, double cy, double w, double h, double theta)
    : cx_(cx), cy_(cy), w_(w), h_(h), theta_(theta) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) ||
      !std::isfinite(h) || !std::isfinite(theta)) {
    throw InvalidBox("oriented box has a non-finite field");
  }
  if (!(w > 0.0) || !(h > 0.0)) {
    throw InvalidBox("oriented box sides must be positive (w=" +
                     std::to_string(w) + ", h=" + std::to_string(h) + ")");
  }
}

bool OrientedBox::is_canonical() const {
  return w_ >= h_ && theta_ >= 0.0 && theta_ < kPi;
}

AlignedBox::AlignedBox(double xmin, double ymin, double xmax, double ymax)
    : xmin_(xmin), ymin_(ymin), xmax_(xmax), ymax_(ymax) {
  if (!std::isfinite(xmin) || !std::isfinite(ymin) || !std::isfinite(xmax) ||
      !std::isfinite(ymax)) {
    throw InvalidBox("aligned box has a non-finite field");
  }
  if (!(xmax > xmin) || !(ymax > ymin)) {
    throw InvalidBox("aligned box requires xmax > xmin and ymax > ymin");
  }
}

AlignedBox AlignedBox::FromCenter(double cx, double cy, double w, double h) {
  return AlignedBox(cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h);
}

OrientedBox canonicalize(double cx, double cy, double w, double h, double theta) {
  // Validate before touching the fields.
  const OrientedBox raw(cx, cy, w, h, theta);
  if (w < h) {
    std::swap(w, h);
    theta += 0.5 * kPi;
  }
  theta = std::fmod(theta, kPi);
  if (theta < 0.0) theta += kPi;
  if (theta >= kPi) theta = 0.0;
  return OrientedBox(raw.cx(), raw.cy(), w, h, theta);
}

OrientedBox canonicalize(const OrientedBox& box) {
  return canonicalize(box.cx(), box.cy(), box.w(), box.h(), box.theta());
}

std::array<Point, 4> corner_array(const OrientedBox& box) {
  const double c = std::cos(box.theta());
  const double s = std::sin(box.theta());
  const double hw = 0.5 * box.w();
  const double hh = 0.5 * box.h();
  const std::array<Point, 4> local = {
      Point{-hw, -hh}, Point{hw, -hh}, Point{hw, hh}, Point{-hw, hh}};
  std::array<Point, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = {box.cx() + c * local[i].x - s * local[i].y,
              box.cy() + s * local[i].x + c * local[i].y};
  }
  return out;
}

ConvexPolygon corners_of(const OrientedBox& box) {
  const auto pts = corner_array(box);
  return ConvexPolygon{{pts.begin(), pts.end()}};
}

OrientedBox box_from_quad(const Quad& quad) {
  for (const Point& p : quad) {
    if (!finite(p)) throw InvalidQuad("quad has a non-finite vertex");
  }
  if (segments_cross(quad[0], quad[1], quad[2], quad[3]) ||
      segments_cross(quad[1], quad[2], quad[3], quad[0])) {
    throw InvalidQuad("quad is self-intersecting");
  }
  const std::vector<Point> hull = convex_hull({quad.begin(), quad.end()});
  double scale = 0.0;
  for (const Point& p : hull) {
    scale = std::max({scale, std::abs(p.x - hull[0].x), std::abs(p.y - hull[0].y)});
  }
  if (hull.size() < 3 || signed_area(hull) <= kMinArea * std::max(1.0, scale * scale)) {
    throw InvalidQuad("quad is degenerate (zero area)");
  }

  // Rotating calipers: the minimum-area rectangle has a side collinear with
  // some hull edge.
  double best_area = std::numeric_limits<double>::infinity();
  double best[5] = {};
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = hull[i];
    const Point b = hull[(i + 1) % n];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len <= 0.0) continue;
    const double ux = (b.x - a.x) / len;
    const double uy = (b.y - a.y) / len;
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double vmin = umin, vmax = -umin;
    for (const Point& p : hull) {
      const double pu = p.x * ux + p.y * uy;
      const double pv = -p.x * uy + p.y * ux;
      umin = std::min(umin, pu);
      umax = std::max(umax, pu);
      vmin = std::min(vmin, pv);
      vmax = std::max(vmax, pv);
    }
    const double area = (umax - umin) * (vmax - vmin);
    if (area < best_area * (1.0 - 1e-12)) {
      best_area = area;
      const double mu = 0.5 * (umin + umax);
      const double mv = 0.5 * (vmin + vmax);
      best[0] = mu * ux - mv * uy;
      best[1] = mu * uy + mv * ux;
      best[2] = umax - umin;
      best[3] = vmax - vmin;
      best[4] = std::atan2(uy, ux);
    }
  }
  return canonicalize(best[0], best[1], best[2], best[3], best[4]);
}

OrientedBox box_from_quad(const ConvexPolygon& quad) {
  if (quad.size() != 4) {
    throw InvalidQuad("expected 4 vertices, got " + std::to_string(quad.size()));
  }
  return box_from_quad(Quad{quad.vertices[0], quad.vertices[1],
                            quad.vertices[2], quad.vertices[3]});
}

AlignedBox aligned_hull(const OrientedBox& box) {
  // Half extents of a rotated rectangle along the image axes.
  const double c = std::abs(std::cos(box.theta()));
  const double s = std::abs(std::sin(box.theta()));
  const double hx = 0.5 * (box.w() * c + box.h() * s);
  const double hy = 0.5 * (box.w() * s + box.h() * c);
  return AlignedBox(box.cx() - hx, box.cy() - hy, box.cx() + hx, box.cy() + hy);
}

OrientedBox lift(const AlignedBox& box) {
  const Point c = box.center();
  return OrientedBox(c.x, c.y, box.width(), box.height(), 0.0);
}

double signed_area(std::span<const Point> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = vertices[i];
    const Point& q = vertices[(i + 1) % n];
    sum += p.x * q.y - q.x * p.y;
  }
  return 0.5 * sum;
}

double polygon_area(const ConvexPolygon& poly) {
  const double a = std::abs(signed_area(poly.vertices));
  return a < kMinArea ? 0.0 : a;
}

ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip) {
  if (subject.size() < 3 || clip.size() < 3) return {};
  VecPoly out, scratch;
  clip_polygon(std::span<const Point>(subject.vertices),
               std::span<const Point>(clip.vertices), out, scratch);
  ConvexPolygon result;
  compact(out, result.vertices);
  return result;
}

bool contains(const OrientedBox& box, Point p, double eps) {
  const double c = std::cos(box.theta());
  const double s = std::sin(box.theta());
  const double dx = p.x - box.cx();
  const double dy = p.y - box.cy();
  const double lx = c * dx + s * dy;
  const double ly = -s * dx + c * dy;
  return std::abs(lx) <= 0.5 * box.w() + eps && std::abs(ly) <= 0.5 * box.h() + eps;
}

double intersection_area(const OrientedBox& a, const OrientedBox& b) {
  const AlignedBox ha = aligned_hull(a);
  const AlignedBox hb = aligned_hull(b);
  if (ha.xmax() <= hb.xmin() || hb.xmax() <= ha.xmin() ||
      ha.ymax() <= hb.ymin() || hb.ymax() <= ha.ymin()) {
    return 0.0;
  }
  const auto ca = corner_array(a);
  const auto cb = corner_array(b);
  SmallPoly out, scratch;
  clip_polygon(std::span<const Point>(ca), std::span<const Point>(cb), out, scratch);
  const double area = signed_area(out.span());
  return area < kMinArea ? 0.0 : area;
}

double iou_oriented(const OrientedBox& a, const OrientedBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double iou_aligned(const AlignedBox& a, const AlignedBox& b) {
  const double iw = std::min(a.xmax(), b.xmax()) - std::max(a.xmin(), b.xmin());
  const double ih = std::min(a.ymax(), b.ymax()) - std::max(a.ymin(), b.ymin());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  if (inter < kMinArea) return 0.0;
  return std::clamp(inter / (a.area() + b.area() - inter), 0.0, 1.0);
}

}  // namespace rroi
