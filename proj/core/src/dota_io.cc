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

#include "rroi/dota_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "rroi/errors.h"

namespace rroi {
namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

double parse_number(const Token& tok, std::size_t line) {
  double value = 0.0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError(line, tok.column,
                     "expected a finite number, got '" + std::string(tok.text) + "'");
  }
  return value;
}

// Calls fn(line_number, line) for each line, with '\r' and trailing blanks
// stripped.
template <typename Fn>
void for_each_line(std::string_view text, Fn fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t')) {
      line.remove_suffix(1);
    }
    fn(++line_no, line);
    pos = end + 1;
  }
}

bool is_metadata(std::string_view line) {
  const std::size_t first = line.find_first_not_of(" \t");
  if (first == std::string_view::npos) return false;
  line.remove_prefix(first);
  return starts_with(line, "imagesource:") || starts_with(line, "gsd:");
}

Quad parse_quad(const std::vector<Token>& toks, std::size_t offset, std::size_t line) {
  Quad q;
  for (std::size_t i = 0; i < 4; ++i) {
    q[i] = {parse_number(toks[offset + 2 * i], line),
            parse_number(toks[offset + 2 * i + 1], line)};
  }
  return q;
}

OrientedBox quad_box(const Quad& q, std::size_t line, std::size_t column) {
  try {
    return box_from_quad(q);
  } catch (const InvalidQuad& e) {
    throw ParseError(line, column, e.what());
  }
}

// Rectangle through a nearly rectangular quad: centroid, mean opposite side
// lengths and mean direction of the two long-axis edges. Unlike the
// enclosing rectangle it does not grow with rounding noise in the corners.
OrientedBox fit_rectangle(const Quad& q) {
  Point c{0.0, 0.0};
  for (const Point& p : q) {
    c.x += 0.25 * p.x;
    c.y += 0.25 * p.y;
  }
  const auto dist = [](Point a, Point b) { return std::hypot(b.x - a.x, b.y - a.y); };
  const double w = 0.5 * (dist(q[0], q[1]) + dist(q[3], q[2]));
  const double h = 0.5 * (dist(q[1], q[2]) + dist(q[0], q[3]));
  const double dx = (q[1].x - q[0].x) + (q[2].x - q[3].x);
  const double dy = (q[1].y - q[0].y) + (q[2].y - q[3].y);
  return canonicalize(c.x, c.y, w, h, std::atan2(dy, dx));
}

std::string format_fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

// Up to six decimals with trailing zeros removed.
std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

AnnotatedObject transform_object(const AnnotatedObject& o, auto point_fn,
                                 const OrientedBox& obb) {
  AnnotatedObject out = o;
  for (Point& p : out.quad) p = point_fn(p);
  out.obb = obb;
  return out;
}

}  // namespace

std::vector<AnnotatedObject> parse_annotations(std::string_view text) {
  std::vector<AnnotatedObject> out;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const std::vector<Token> toks = tokenize(line);
    if (toks.empty() || is_metadata(line)) return;
    if (toks.size() != 10) {
      const std::size_t col = toks.size() > 10 ? toks[10].column : 0;
      throw ParseError(line_no, col,
                       "expected 10 tokens (8 coordinates, category, difficult), got " +
                           std::to_string(toks.size()));
    }
    AnnotatedObject obj{parse_quad(toks, 0, line_no), std::string(toks[8].text), false,
                        OrientedBox(0, 0, 1, 1, 0)};
    if (toks[9].text == "1") {
      obj.difficult = true;
    } else if (toks[9].text != "0") {
      throw ParseError(line_no, toks[9].column,
                       "difficult flag must be 0 or 1, got '" +
                           std::string(toks[9].text) + "'");
    }
    obj.obb = quad_box(obj.quad, line_no, toks[0].column);
    out.push_back(std::move(obj));
  });
  return out;
}

std::string write_annotations(std::span<const AnnotatedObject> objects) {
  std::string out;
  for (const AnnotatedObject& o : objects) {
    for (const Point& p : o.quad) {
      out += format_number(p.x);
      out += ' ';
      out += format_number(p.y);
      out += ' ';
    }
    out += o.category;
    out += o.difficult ? " 1\n" : " 0\n";
  }
  return out;
}

std::string write_detections(std::span<const Detection> dets,
                             std::span<const std::string> category_names) {
  std::string out;
  for (const std::size_t i : score_order(dets)) {
    const Detection& d = dets[i];
    if (d.class_id >= category_names.size()) {
      throw InvalidArgument("detection " + std::to_string(i) + " has class_id " +
                            std::to_string(d.class_id) + " with no category name");
    }
    char score[32];
    std::snprintf(score, sizeof(score), "%.6f", d.score);
    out += category_names[d.class_id];
    out += ' ';
    out += score;
    for (const Point& p : corner_array(d.box)) {
      out += ' ';
      out += format_fixed2(p.x);
      out += ' ';
      out += format_fixed2(p.y);
    }
    out += '\n';
  }
  return out;
}

ParsedDetections parse_detections(std::string_view text,
                                  std::vector<std::string> known_categories) {
  ParsedDetections out;
  out.categories = std::move(known_categories);
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const std::vector<Token> toks = tokenize(line);
    if (toks.empty()) return;
    if (toks.size() != 10) {
      throw ParseError(line_no, 0,
                       "expected 10 tokens (category, score, 8 coordinates), got " +
                           std::to_string(toks.size()));
    }
    const double score = parse_number(toks[1], line_no);
    if (score < 0.0 || score > 1.0) {
      throw ParseError(line_no, toks[1].column, "score must be in [0, 1]");
    }
    const Quad q = parse_quad(toks, 2, line_no);
    const std::string name(toks[0].text);
    auto it = std::find(out.categories.begin(), out.categories.end(), name);
    if (it == out.categories.end()) {
      out.categories.push_back(name);
      it = out.categories.end() - 1;
    }
    const auto cls = static_cast<std::size_t>(it - out.categories.begin());
    quad_box(q, line_no, toks[2].column);
    out.detections.push_back({fit_rectangle(q), score, cls});
  });
  return out;
}

std::vector<std::size_t> tile_axis(std::size_t dim, std::size_t window,
                                   std::size_t stride) {
  if (window < 1) throw InvalidArgument("tile window must be >= 1");
  if (stride < 1 || stride > window) {
    throw InvalidArgument("tile stride must be in [1, window], got " +
                          std::to_string(stride));
  }
  if (dim < 1) throw InvalidArgument("image dimension must be >= 1");
  std::vector<std::size_t> offsets{0};
  if (dim <= window) return offsets;
  while (offsets.back() + stride + window <= dim) offsets.push_back(offsets.back() + stride);
  if (offsets.back() + window < dim) offsets.push_back(dim - window);
  return offsets;
}

std::vector<TileOffset> tile_windows(std::size_t image_w, std::size_t image_h,
                                     std::size_t window, std::size_t stride) {
  const auto xs = tile_axis(image_w, window, stride);
  const auto ys = tile_axis(image_h, window, stride);
  std::vector<TileOffset> out;
  out.reserve(xs.size() * ys.size());
  for (const std::size_t y : ys) {
    for (const std::size_t x : xs) out.push_back({x, y});
  }
  return out;
}

TileWindow transfer_annotations(std::span<const AnnotatedObject> objects,
                                std::size_t x0, std::size_t y0, std::size_t width,
                                std::size_t height) {
  TileWindow tile{x0, y0, width, height, {}};
  const double fx0 = static_cast<double>(x0);
  const double fy0 = static_cast<double>(y0);
  const double fx1 = fx0 + static_cast<double>(width);
  const double fy1 = fy0 + static_cast<double>(height);
  for (const AnnotatedObject& o : objects) {
    const Point c = o.obb.center();
    if (c.x < fx0 || c.x >= fx1 || c.y < fy0 || c.y >= fy1) continue;
    bool truncated = false;
    for (const Point& p : o.quad) {
      if (p.x < fx0 || p.x > fx1 || p.y < fy0 || p.y > fy1) truncated = true;
    }
    const OrientedBox shifted(c.x - fx0, c.y - fy0, o.obb.w(), o.obb.h(), o.obb.theta());
    tile.contained.push_back(
        {transform_object(o, [&](Point p) { return Point{p.x - fx0, p.y - fy0}; },
                          shifted),
         truncated});
  }
  return tile;
}

std::vector<TileWindow> make_tiles(std::span<const AnnotatedObject> objects,
                                   std::size_t image_w, std::size_t image_h,
                                   std::size_t window, std::size_t stride) {
  std::vector<TileWindow> out;
  for (const TileOffset& t : tile_windows(image_w, image_h, window, stride)) {
    out.push_back(transfer_annotations(objects, t.x0, t.y0,
                                       std::min(window, image_w - t.x0),
                                       std::min(window, image_h - t.y0)));
  }
  return out;
}

std::vector<AnnotatedObject> scale_annotations(std::span<const AnnotatedObject> objects,
                                               double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw InvalidArgument("scale factor must be positive and finite");
  }
  std::vector<AnnotatedObject> out;
  for (const AnnotatedObject& o : objects) {
    const OrientedBox b(o.obb.cx() * factor, o.obb.cy() * factor, o.obb.w() * factor,
                        o.obb.h() * factor, o.obb.theta());
    out.push_back(transform_object(
        o, [&](Point p) { return Point{p.x * factor, p.y * factor}; }, b));
  }
  return out;
}

std::vector<AnnotatedObject> rotate_annotations_90k(
    std::span<const AnnotatedObject> objects, int k, double image_w, double image_h) {
  std::vector<AnnotatedObject> out(objects.begin(), objects.end());
  const int turns = ((k % 4) + 4) % 4;
  double w = image_w;
  double h = image_h;
  for (int t = 0; t < turns; ++t) {
    // (x, y) -> (-y, x) is a +90 degree turn in the box angle convention;
    // shifting by the old height keeps the image in the positive quadrant.
    const auto turn = [h](Point p) { return Point{h - p.y, p.x}; };
    for (AnnotatedObject& o : out) {
      const Point c = turn(o.obb.center());
      o = transform_object(
          o, turn,
          canonicalize(c.x, c.y, o.obb.w(), o.obb.h(), o.obb.theta() + 0.5 * kPi));
    }
    std::swap(w, h);
  }
  return out;
}

}  // namespace rroi
