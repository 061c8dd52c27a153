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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rroi/geometry.h"
#include "rroi/nms.h"
#include "rroi/roi_align.h"

namespace {

using rroi::OrientedBox;

std::vector<OrientedBox> boxes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0, 200), side(4, 40), angle(0, rroi::kPi);
  std::vector<OrientedBox> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.emplace_back(pos(rng), pos(rng), side(rng), side(rng), angle(rng));
  }
  return out;
}

void BM_IouOriented(benchmark::State& state) {
  const auto a = boxes(256, 1), b = boxes(256, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rroi::iou_oriented(a[i & 255], b[i & 255]));
    ++i;
  }
}
BENCHMARK(BM_IouOriented);

void BM_RotatedNms(benchmark::State& state) {
  const auto bs = boxes(static_cast<std::size_t>(state.range(0)), 3);
  std::vector<rroi::Detection> dets;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> score(0, 1);
  for (const auto& b : bs) dets.push_back(rroi::make_detection(b, score(rng), 0));
  for (auto _ : state) benchmark::DoNotOptimize(rroi::rotated_nms(dets, 0.5));
}
BENCHMARK(BM_RotatedNms)->RangeMultiplier(4)->Range(16, 1024);

void BM_RpsRoiAlign(benchmark::State& state) {
  const std::size_t k = 7, cout = 10;
  rroi::FeatureTensor f(128, 128, k * k * cout, 0.5);
  const OrientedBox box(64, 64, 40, 16, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(rroi::rps_roi_align(f, box, k, 2));
}
BENCHMARK(BM_RpsRoiAlign);

void BM_BoxFromQuad(benchmark::State& state) {
  const auto bs = boxes(256, 5);
  std::vector<rroi::Quad> quads;
  for (const auto& b : bs) quads.push_back(rroi::corner_array(b));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rroi::box_from_quad(quads[i & 255]));
    ++i;
  }
}
BENCHMARK(BM_BoxFromQuad);

}  // namespace

BENCHMARK_MAIN();
