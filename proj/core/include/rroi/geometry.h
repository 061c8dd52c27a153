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

#ifndef RROI_GEOMETRY_H_
#define RROI_GEOMETRY_H_

#include <array>
#include <numbers>
#include <span>
#include <vector>

namespace rroi {

inline constexpr double kPi = std::numbers::pi;

// Image coordinates: +x right, +y down, pixels.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Rotated rectangle (cx, cy, w, h, theta). The local x axis of the box is
// (cos theta, sin theta) in image coordinates, so a local offset (dx, dy)
// maps to the image by the matrix [cos -sin; sin cos].
//
// Construction rejects non-finite fields and non-positive sides. The box is
// stored as given; call canonicalize() to get w >= h and theta in [0, pi).
class OrientedBox {
 public:
  OrientedBox(double cx, double cy, double w, double h, double theta);

  double cx() const { return cx_; }
  double cy() const { return cy_; }
  double w() const { return w_; }
  double h() const { return h_; }
  double theta() const { return theta_; }

  Point center() const { return {cx_, cy_}; }
  double area() const { return w_ * h_; }
  bool is_canonical() const;

  friend bool operator==(const OrientedBox&, const OrientedBox&) = default;

 private:
  double cx_;
  double cy_;
  double w_;
  double h_;
  double theta_;
};

// Horizontal box in corner form. Requires xmax > xmin, ymax > ymin.
class AlignedBox {
 public:
  AlignedBox(double xmin, double ymin, double xmax, double ymax);

  static AlignedBox FromCenter(double cx, double cy, double w, double h);

  double xmin() const { return xmin_; }
  double ymin() const { return ymin_; }
  double xmax() const { return xmax_; }
  double ymax() const { return ymax_; }

  double width() const { return xmax_ - xmin_; }
  double height() const { return ymax_ - ymin_; }
  Point center() const { return {0.5 * (xmin_ + xmax_), 0.5 * (ymin_ + ymax_)}; }
  double area() const { return width() * height(); }

  friend bool operator==(const AlignedBox&, const AlignedBox&) = default;

 private:
  double xmin_;
  double ymin_;
  double xmax_;
  double ymax_;
};

// Vertices are ordered so that the shoelace sum
//   sum(x_i * y_{i+1} - x_{i+1} * y_i)
// is positive. With +y down this is the order (-1,-1), (1,-1), (1,1), (-1,1)
// for a square at the origin.
struct ConvexPolygon {
  std::vector<Point> vertices;

  bool empty() const { return vertices.empty(); }
  std::size_t size() const { return vertices.size(); }
};

// Four points in source order, e.g. a DOTA annotation.
using Quad = std::array<Point, 4>;

OrientedBox canonicalize(const OrientedBox& box);
OrientedBox canonicalize(double cx, double cy, double w, double h, double theta);

ConvexPolygon corners_of(const OrientedBox& box);
std::array<Point, 4> corner_array(const OrientedBox& box);

// Minimum-area enclosing rectangle of the quad's convex hull, canonicalized.
// Throws InvalidQuad for non-finite, degenerate or self-intersecting input.
OrientedBox box_from_quad(const Quad& quad);
OrientedBox box_from_quad(const ConvexPolygon& quad);

AlignedBox aligned_hull(const OrientedBox& box);

// Axis-aligned box as an OrientedBox with theta = 0 and w, h taken from the
// x and y extents (not swapped, so the result may be non-canonical).
OrientedBox lift(const AlignedBox& box);

// Sutherland-Hodgman clipping of one convex polygon by another. Results with
// area below 1e-12 are returned as the empty polygon.
ConvexPolygon clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip);

double signed_area(std::span<const Point> vertices);
double polygon_area(const ConvexPolygon& poly);

// True if p lies inside or on the boundary of the box (within eps).
bool contains(const OrientedBox& box, Point p, double eps = 1e-9);

double intersection_area(const OrientedBox& a, const OrientedBox& b);
double iou_oriented(const OrientedBox& a, const OrientedBox& b);
double iou_aligned(const AlignedBox& a, const AlignedBox& b);

}  // namespace rroi

#endif  // RROI_GEOMETRY_H_
