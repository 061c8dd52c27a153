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

#include "rroi_tools/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "rroi/dota_io.h"
#include "rroi/errors.h"
#include "rroi/eval.h"
#include "rroi/geometry.h"
#include "rroi/nms.h"
#include "rroi/pipeline.h"

namespace rroi::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw DataError("cannot write '" + path.string() + "'");
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create '" + dir + "': " + ec.message());
  return fs::path(dir);
}

std::vector<AnnotatedObject> load_annotations(const std::string& path) {
  try {
    return parse_annotations(read_file(path));
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

ParsedDetections load_detections(const std::string& path,
                                  std::vector<std::string> known = {}) {
  try {
    return parse_detections(read_file(path), std::move(known));
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::size_t category_index(std::vector<std::string>& names, const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  names.push_back(name);
  return names.size() - 1;
}

std::string iou_csv(std::span<const AnnotatedObject> a, std::span<const AnnotatedObject> b) {
  std::string out;
  char cell[32];
  for (const AnnotatedObject& oa : a) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::snprintf(cell, sizeof(cell), "%.6f", iou_oriented(oa.obb, b[j].obb));
      if (j > 0) out += ',';
      out += cell;
    }
    out += '\n';
  }
  return out;
}

struct IouArgs {
  std::string file_a;
  std::string file_b;
  std::string out_dir;
};

int cmd_iou(const IouArgs& args, std::ostream& out) {
  const auto a = load_annotations(args.file_a);
  const auto b = load_annotations(args.file_b);
  const std::string csv = iou_csv(a, b);
  if (args.out_dir.empty()) {
    out << csv;
  } else {
    write_file(prepare_dir(args.out_dir) / "iou.csv", csv);
  }
  return kExitOk;
}

struct NmsArgs {
  std::string input;
  std::string out_dir;
  double iou_thresh = 0.5;
  double score_thresh = 0.0;
  bool class_agnostic = false;
};

int cmd_nms(const NmsArgs& args, std::ostream& out) {
  require(args.iou_thresh > 0.0 && args.iou_thresh <= 1.0, "--iou-thresh must be in (0, 1]");
  require(args.score_thresh >= 0.0 && args.score_thresh <= 1.0,
          "--score-thresh must be in [0, 1]");
  const ParsedDetections parsed = load_detections(args.input);
  const std::vector<Detection> dets = score_filter(parsed.detections, args.score_thresh);
  const auto keep = rotated_nms(dets, NmsOptions{args.iou_thresh, args.class_agnostic});
  std::vector<Detection> kept;
  kept.reserve(keep.size());
  for (std::size_t i : keep) kept.push_back(dets[i]);
  const std::string text = write_detections(kept, parsed.categories);
  if (args.out_dir.empty()) {
    out << text;
  } else {
    write_file(prepare_dir(args.out_dir) / "nms.txt", text);
  }
  return kExitOk;
}

struct TileArgs {
  std::string input;
  std::string out_dir;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t window = 1024;
  std::size_t stride = 824;
};

int cmd_tile(const TileArgs& args, std::ostream& out) {
  require(args.width > 0 && args.height > 0, "--width and --height must be positive");
  require(args.window > 0 && args.stride > 0, "--window and --stride must be positive");
  require(args.stride <= args.window, "--stride must not exceed --window");
  const auto objects = load_annotations(args.input);
  const auto tiles = make_tiles(objects, args.width, args.height, args.window, args.stride);

  std::optional<fs::path> dir;
  if (!args.out_dir.empty()) dir = prepare_dir(args.out_dir);
  const std::string stem = fs::path(args.input).stem().string();

  std::string csv = "x0,y0,width,height,objects,truncated\n";
  char line[128];
  for (const TileWindow& t : tiles) {
    std::size_t truncated = 0;
    std::vector<AnnotatedObject> shifted;
    shifted.reserve(t.contained.size());
    for (const TiledObject& o : t.contained) {
      truncated += o.truncated ? 1 : 0;
      shifted.push_back(o.object);
    }
    std::snprintf(line, sizeof(line), "%zu,%zu,%zu,%zu,%zu,%zu\n", t.x0, t.y0, t.width,
                  t.height, shifted.size(), truncated);
    csv += line;
    if (dir) {
      const std::string name =
          stem + "__" + std::to_string(t.x0) + "__" + std::to_string(t.y0) + ".txt";
      write_file(*dir / name, write_annotations(shifted));
    }
  }
  out << csv;
  return kExitOk;
}

struct EvalArgs {
  std::vector<std::string> gt_files;
  std::vector<std::string> det_files;
  std::string out_dir;
  double iou_thresh = 0.5;
  bool voc07 = false;
};

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  require(args.gt_files.size() == args.det_files.size(),
          "--gt and --det must be given the same number of times");
  require(args.iou_thresh > 0.0 && args.iou_thresh < 1.0, "--iou-thresh must be in (0, 1)");

  std::vector<std::string> names;
  std::vector<ImageRecord> images(args.gt_files.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (const AnnotatedObject& o : load_annotations(args.gt_files[i])) {
      images[i].ground_truth.push_back({o.obb, category_index(names, o.category), o.difficult});
    }
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    ParsedDetections parsed = load_detections(args.det_files[i], names);
    names = std::move(parsed.categories);
    images[i].detections = std::move(parsed.detections);
  }
  if (names.empty()) return kExitOk;

  const EvalReport report =
      evaluate(images, names, args.iou_thresh,
               args.voc07 ? ApMethod::kVoc11Point : ApMethod::kAllPoints);
  const std::string text = report_to_text(report);
  out << text;
  if (!args.out_dir.empty()) {
    const fs::path dir = prepare_dir(args.out_dir);
    write_file(dir / "evaluation.json", report_to_json(report));
    write_file(dir / "evaluation.txt", text);
  }
  return kExitOk;
}

struct DemoArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> iou_thresh;
  std::optional<double> eval_iou_thresh;
  std::optional<double> score_thresh;
  std::optional<double> context_long;
  std::optional<double> context_short;
  std::optional<std::size_t> train_scenes;
  std::optional<std::size_t> test_scenes;
  bool rroi_nms = false;
  bool no_rroi_nms = false;
  bool oracle = false;
  bool dump_config = false;
};

PipelineConfig demo_config(const DemoArgs& args) {
  require(!(args.rroi_nms && args.no_rroi_nms), "--rroi-nms and --no-rroi-nms conflict");
  PipelineConfig config;
  if (!args.config_path.empty()) {
    try {
      config = config_from_json(read_file(args.config_path));
    } catch (const InvalidArgument& e) {
      throw UsageError(args.config_path + ": " + e.what());
    }
  }
  if (args.seed) config.seed = *args.seed;
  if (args.iou_thresh) config.nms_thresh = *args.iou_thresh;
  if (args.eval_iou_thresh) config.eval_iou_thresh = *args.eval_iou_thresh;
  if (args.score_thresh) config.score_thresh = *args.score_thresh;
  if (args.context_long) config.context_long = *args.context_long;
  if (args.context_short) config.context_short = *args.context_short;
  if (args.train_scenes) config.train_scenes = *args.train_scenes;
  if (args.test_scenes) config.test_scenes = *args.test_scenes;
  if (args.rroi_nms) config.rroi_nms_enabled = true;
  if (args.no_rroi_nms) config.rroi_nms_enabled = false;
  if (args.oracle) config.oracle_learner = true;
  try {
    validate(config);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return config;
}

std::string demo_summary(const DemoResult& r) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "hrois %zu, positives %zu, rrois into second stage %zu\n",
                r.hroi_count, r.matched_hrois, r.rroi_count);
  out += line;
  std::snprintf(line, sizeof(line), "mean IoU with gt: hroi %.4f, rroi %.4f\n",
                r.mean_hroi_iou, r.mean_rroi_iou);
  out += line;
  std::snprintf(line, sizeof(line), "rroi recall %.4f\n", r.rroi_recall);
  out += line;
  return out;
}

int cmd_demo(const DemoArgs& args, std::ostream& out) {
  const PipelineConfig config = demo_config(args);
  if (args.dump_config) {
    out << config_to_json(config);
    return kExitOk;
  }
  const DemoResult result = run_demo(config);
  const std::string text = report_to_text(result.report);
  out << text << demo_summary(result);
  if (args.out_dir.empty()) return kExitOk;

  const fs::path dir = prepare_dir(args.out_dir);
  const fs::path det_dir = prepare_dir((dir / "detections").string());
  char name[32];
  for (std::size_t s = 0; s < result.scenes.size(); ++s) {
    std::snprintf(name, sizeof(name), "scene_%04zu.txt", s);
    write_file(det_dir / name,
               write_detections(result.scenes[s].detections, result.class_names));
  }
  write_file(dir / "evaluation.json", report_to_json(result.report));
  write_file(dir / "evaluation.txt", text);
  write_file(dir / "manifest.json", demo_manifest(config, result));
  return kExitOk;
}

std::string usage_failure(const CLI::App* app, const CLI::Error& e) {
  return std::string(e.what()) + "\n\n" + app->help();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotated detection geometry toolkit", "rroi"};
  app.require_subcommand(1);
  app.failure_message(usage_failure);

  IouArgs iou;
  CLI::App* iou_cmd = app.add_subcommand("iou", "Pairwise oriented IoU of two DOTA files as CSV");
  iou_cmd->add_option("file_a", iou.file_a, "DOTA annotation file (rows)")->required();
  iou_cmd->add_option("file_b", iou.file_b, "DOTA annotation file (columns)")->required();
  iou_cmd->add_option("--out-dir", iou.out_dir, "Write iou.csv here instead of stdout");

  NmsArgs nms;
  CLI::App* nms_cmd = app.add_subcommand("nms", "Rotated NMS over a detection file");
  nms_cmd->add_option("detections", nms.input, "Detection file")->required();
  nms_cmd->add_option("--iou-thresh", nms.iou_thresh, "Suppression IoU threshold")
      ->capture_default_str();
  nms_cmd->add_option("--score-thresh", nms.score_thresh, "Drop detections below this score")
      ->capture_default_str();
  nms_cmd->add_flag("--class-agnostic", nms.class_agnostic, "Suppress across classes");
  nms_cmd->add_option("--out-dir", nms.out_dir, "Write nms.txt here instead of stdout");

  TileArgs tile;
  CLI::App* tile_cmd = app.add_subcommand("tile", "Split annotations into overlapping windows");
  tile_cmd->add_option("annotations", tile.input, "DOTA annotation file")->required();
  tile_cmd->add_option("--width", tile.width, "Image width in pixels")->required();
  tile_cmd->add_option("--height", tile.height, "Image height in pixels")->required();
  tile_cmd->add_option("--window", tile.window, "Window side")->capture_default_str();
  tile_cmd->add_option("--stride", tile.stride, "Window stride")->capture_default_str();
  tile_cmd->add_option("--out-dir", tile.out_dir, "Write one annotation file per window");

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Rotated-IoU mAP of detections against DOTA ground truth");
  eval_cmd->add_option("--gt", ev.gt_files, "Ground-truth file, one per image")->required();
  eval_cmd->add_option("--det", ev.det_files, "Detection file, same order as --gt")->required();
  eval_cmd->add_option("--iou-thresh", ev.iou_thresh, "Match IoU threshold")
      ->capture_default_str();
  eval_cmd->add_flag("--voc07", ev.voc07, "11-point interpolated AP");
  eval_cmd->add_option("--out-dir", ev.out_dir, "Write evaluation.json and evaluation.txt");

  DemoArgs demo;
  CLI::App* demo_cmd = app.add_subcommand("demo", "Synthetic end-to-end run");
  demo_cmd->add_option("--config", demo.config_path, "Pipeline config JSON");
  demo_cmd->add_option("--seed", demo.seed, "Master seed");
  demo_cmd->add_option("--out-dir", demo.out_dir, "Write detections, report and manifest");
  demo_cmd->add_option("--iou-thresh", demo.iou_thresh, "Final rotated NMS threshold");
  demo_cmd->add_option("--eval-iou-thresh", demo.eval_iou_thresh, "mAP match threshold");
  demo_cmd->add_option("--score-thresh", demo.score_thresh, "Minimum detection score");
  demo_cmd->add_option("--context-long", demo.context_long, "Long-side context factor");
  demo_cmd->add_option("--context-short", demo.context_short, "Short-side context factor");
  demo_cmd->add_option("--train-scenes", demo.train_scenes, "Number of training scenes");
  demo_cmd->add_option("--test-scenes", demo.test_scenes, "Number of held-out scenes");
  demo_cmd->add_flag("--rroi-nms", demo.rroi_nms, "NMS on RRoIs before warping");
  demo_cmd->add_flag("--no-rroi-nms", demo.no_rroi_nms, "No NMS on RRoIs (default)");
  demo_cmd->add_flag("--oracle", demo.oracle, "Feed exact targets instead of training");
  demo_cmd->add_flag("--dump-config", demo.dump_config, "Print the effective config and exit");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("rroi");

  CLI::App* active = &app;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (iou_cmd->parsed()) return cmd_iou(iou, out);
    if (nms_cmd->parsed()) {
      active = nms_cmd;
      return cmd_nms(nms, out);
    }
    if (tile_cmd->parsed()) {
      active = tile_cmd;
      return cmd_tile(tile, out);
    }
    if (eval_cmd->parsed()) {
      active = eval_cmd;
      return cmd_eval(ev, out);
    }
    active = demo_cmd;
    return cmd_demo(demo, out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return kExitUsageError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
}

}  // namespace rroi::cli
