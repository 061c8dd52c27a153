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

#ifndef RROI_DOTA_IO_H_
#define RROI_DOTA_IO_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rroi/geometry.h"
#include "rroi/nms.h"

namespace rroi {

// One line of a DOTA annotation file:
//   x1 y1 x2 y2 x3 y3 x4 y4 category difficult
struct AnnotatedObject {
  Quad quad;  // source order
  std::string category;
  bool difficult = false;
  OrientedBox obb;  // box_from_quad(quad)
};

// Parses DOTA annotation text. "imagesource:" and "gsd:" metadata lines and
// blank lines are skipped; CRLF endings and trailing whitespace are accepted.
// Throws ParseError with the 1-based line and column of the offending token.
std::vector<AnnotatedObject> parse_annotations(std::string_view text);

std::string write_annotations(std::span<const AnnotatedObject> objects);

// Detection stream, one detection per line:
//   category score x1 y1 x2 y2 x3 y3 x4 y4
// Corners are corners_of(box) with two decimals. Lines are ordered by
// descending score, ties by input index. Throws InvalidArgument for a
// class_id without a name.
std::string write_detections(std::span<const Detection> dets,
                             std::span<const std::string> category_names);

struct ParsedDetections {
  std::vector<Detection> detections;
  std::vector<std::string> categories;  // class_id -> name, first-seen order
};

// Reads the write_detections format. Boxes are fitted to the rounded corners
// (centroid, mean side lengths, mean edge direction) instead of enclosed, so
// a write/parse round trip stays within the rounding. Categories already
// present in `known_categories` keep their index; new names are appended.
ParsedDetections parse_detections(std::string_view text,
                                  std::vector<std::string> known_categories = {});

struct TileOffset {
  std::size_t x0 = 0;
  std::size_t y0 = 0;

  friend bool operator==(const TileOffset&, const TileOffset&) = default;
};

// Offsets along one axis: multiples of stride while the window fits, then a
// final window clamped to (dim - window) if the edge is not yet reached.
std::vector<std::size_t> tile_axis(std::size_t dim, std::size_t window,
                                   std::size_t stride);

// Row-major product of the per-axis offsets (y outer, x inner).
std::vector<TileOffset> tile_windows(std::size_t image_w, std::size_t image_h,
                                     std::size_t window, std::size_t stride);

struct TiledObject {
  AnnotatedObject object;  // shifted into the window frame
  bool truncated = false;  // some corner lies outside the window
};

struct TileWindow {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<TiledObject> contained;
};

// Keeps objects whose obb center lies in [x0, x0 + width) x [y0, y0 + height)
// and shifts them by (-x0, -y0). Objects are not clipped.
TileWindow transfer_annotations(std::span<const AnnotatedObject> objects,
                                std::size_t x0, std::size_t y0, std::size_t width,
                                std::size_t height);

// Tiles the image and transfers annotations into every window. Windows are
// clamped to the image, so the last row/column may be smaller than `window`
// only when the image itself is.
std::vector<TileWindow> make_tiles(std::span<const AnnotatedObject> objects,
                                   std::size_t image_w, std::size_t image_h,
                                   std::size_t window, std::size_t stride);

// Coordinate-only augmentations (no pixel data involved).
std::vector<AnnotatedObject> scale_annotations(std::span<const AnnotatedObject> objects,
                                               double factor);
// Rotates by k * 90 degrees (theta increasing) inside a W x H image; the
// result lives in the rotated image frame (H x W for odd k).
std::vector<AnnotatedObject> rotate_annotations_90k(
    std::span<const AnnotatedObject> objects, int k, double image_w, double image_h);

}  // namespace rroi

#endif  // RROI_DOTA_IO_H_
