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

#include "rroi/learner.h"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "rroi/errors.h"

namespace rroi {
namespace {

void check_dataset(std::span<const TrainingSample> dataset) {
  if (dataset.empty()) throw InvalidArgument("training set is empty");
  const std::size_t dim = dataset.front().features.size();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].features.size() != dim) {
      throw ShapeError("sample " + std::to_string(i) + " has " +
                       std::to_string(dataset[i].features.size()) +
                       " features, expected " + std::to_string(dim));
    }
  }
}

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidArgument("smooth-L1 beta must be positive");
  }
}

// Accumulates the loss and parameter gradient of one sample into the
// running sums.
double accumulate(const LinearRegressor& model, const TrainingSample& sample,
                  double beta, std::vector<double>& weight_grad,
                  std::array<double, kNumOffsets>& bias_grad) {
  const OffsetVector pred = predict(model, sample.features);
  const SmoothL1 l = smooth_l1(pred, sample.target, beta);
  const std::size_t dim = model.feature_dim();
  for (std::size_t f = 0; f < dim; ++f) {
    const double x = sample.features[f];
    if (x == 0.0) continue;
    double* row = &weight_grad[f * kNumOffsets];
    for (std::size_t o = 0; o < kNumOffsets; ++o) row[o] += x * l.grad[o];
  }
  for (std::size_t o = 0; o < kNumOffsets; ++o) bias_grad[o] += l.grad[o];
  return l.loss;
}

// Fisher-Yates driven directly by mt19937_64 output so the permutation does
// not depend on the standard library's distribution implementations.
void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

LinearRegressor::LinearRegressor(std::size_t feature_dim)
    : feature_dim_(feature_dim), weights_(feature_dim * kNumOffsets, 0.0) {
  if (feature_dim == 0) throw ShapeError("feature_dim must be >= 1");
}

LinearRegressor::LinearRegressor(std::size_t feature_dim, std::vector<double> weights,
                                 std::array<double, kNumOffsets> bias)
    : feature_dim_(feature_dim), weights_(std::move(weights)), bias_(bias) {
  if (feature_dim == 0) throw ShapeError("feature_dim must be >= 1");
  if (weights_.size() != feature_dim * kNumOffsets) {
    throw ShapeError("weights have " + std::to_string(weights_.size()) +
                     " entries, expected " + std::to_string(feature_dim * kNumOffsets));
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) throw InvalidArgument("non-finite weight");
  }
  for (double b : bias_) {
    if (!std::isfinite(b)) throw InvalidArgument("non-finite bias");
  }
}

SmoothL1 smooth_l1(const OffsetVector& pred, const OffsetVector& target, double beta) {
  check_beta(beta);
  const auto p = pred.as_array();
  const auto t = target.as_array();
  SmoothL1 out;
  for (std::size_t i = 0; i < kNumOffsets; ++i) {
    const double d = p[i] - t[i];
    if (std::abs(d) < beta) {
      out.loss += 0.5 * d * d / beta;
      out.grad[i] = d / beta;
    } else {
      out.loss += std::abs(d) - 0.5 * beta;
      out.grad[i] = d > 0.0 ? 1.0 : -1.0;
    }
  }
  return out;
}

OffsetVector predict(const LinearRegressor& model, std::span<const double> features) {
  if (features.size() != model.feature_dim()) {
    throw ShapeError("feature vector has " + std::to_string(features.size()) +
                     " entries, model expects " + std::to_string(model.feature_dim()));
  }
  std::array<double, kNumOffsets> out = model.bias();
  const std::span<const double> w = model.weights();
  for (std::size_t f = 0; f < features.size(); ++f) {
    const double x = features[f];
    if (x == 0.0) continue;
    const double* row = &w[f * kNumOffsets];
    for (std::size_t o = 0; o < kNumOffsets; ++o) out[o] += row[o] * x;
  }
  return OffsetVector::FromArray(out);
}

OffsetVector predict(const LinearRegressor& model, const PooledFeature& pooled) {
  return predict(model, pooled.data());
}

Objective objective(const LinearRegressor& model,
                    std::span<const TrainingSample> dataset, double beta) {
  check_dataset(dataset);
  check_beta(beta);
  Objective out;
  out.weight_grad.assign(model.weights().size(), 0.0);
  for (const TrainingSample& s : dataset) {
    out.loss += accumulate(model, s, beta, out.weight_grad, out.bias_grad);
  }
  const double inv = 1.0 / static_cast<double>(dataset.size());
  out.loss *= inv;
  for (double& g : out.weight_grad) g *= inv;
  for (double& g : out.bias_grad) g *= inv;
  return out;
}

double stable_learning_rate(std::span<const TrainingSample> dataset, double beta) {
  check_dataset(dataset);
  check_beta(beta);
  // Power iteration on E[x x^T] without forming the matrix.
  const std::size_t dim = dataset.front().features.size() + 1;
  std::vector<double> v(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  std::vector<double> next(dim);
  double lambda = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (const TrainingSample& s : dataset) {
      double dot = v[dim - 1];
      for (std::size_t f = 0; f + 1 < dim; ++f) dot += s.features[f] * v[f];
      for (std::size_t f = 0; f + 1 < dim; ++f) next[f] += s.features[f] * dot;
      next[dim - 1] += dot;
    }
    double norm = 0.0;
    for (double& x : next) {
      x /= static_cast<double>(dataset.size());
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) return beta;
    const double prev = lambda;
    lambda = norm;
    for (std::size_t f = 0; f < dim; ++f) v[f] = next[f] / norm;
    if (std::abs(lambda - prev) <= 1e-10 * lambda) break;
  }
  // Power iteration approaches lambda_max from below; pad by 1% so the
  // returned step stays on the safe side.
  return beta / (1.01 * lambda);
}

TrainResult train(std::span<const TrainingSample> dataset, const TrainConfig& config) {
  check_dataset(dataset);
  check_beta(config.smooth_l1_beta);
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    throw InvalidArgument("learning rate must be finite and >= 0");
  }
  if (config.epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (config.batch_size < 1) throw InvalidArgument("batch_size must be >= 1");

  const std::size_t dim = dataset.front().features.size();
  TrainResult result{LinearRegressor(dim), {}};
  LinearRegressor& model = result.model;
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<double> weight_grad(dim * kNumOffsets);
  std::array<double, kNumOffsets> bias_grad{};
  result.loss_trace.reserve(static_cast<std::size_t>(config.epochs));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::fill(weight_grad.begin(), weight_grad.end(), 0.0);
      bias_grad.fill(0.0);
      for (std::size_t b = start; b < end; ++b) {
        epoch_loss += accumulate(model, dataset[order[b]], config.smooth_l1_beta,
                                 weight_grad, bias_grad);
      }
      if (!std::isfinite(epoch_loss)) throw TrainingDiverged(epoch);
      const double step = config.learning_rate / static_cast<double>(end - start);
      std::span<double> w = model.weights();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= step * weight_grad[i];
      for (std::size_t o = 0; o < kNumOffsets; ++o) model.bias()[o] -= step * bias_grad[o];
    }
    epoch_loss /= static_cast<double>(order.size());
    if (!std::isfinite(epoch_loss)) throw TrainingDiverged(epoch);
    result.loss_trace.push_back(epoch_loss);
  }
  return result;
}

std::string model_to_json(const LinearRegressor& model) {
  nlohmann::json j;
  j["magic"] = kModelMagic;
  j["version"] = kModelVersion;
  j["feature_dim"] = model.feature_dim();
  j["outputs"] = kNumOffsets;
  j["weights"] = std::vector<double>(model.weights().begin(), model.weights().end());
  j["bias"] = model.bias();
  return j.dump(1) + "\n";
}

LinearRegressor model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, e.byte, std::string("model file is not JSON: ") + e.what());
  }
  try {
    if (j.at("magic").get<std::string>() != kModelMagic) {
      throw ParseError(1, 0, "model file has the wrong magic string");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      throw ParseError(1, 0, "unsupported model version " + j.at("version").dump());
    }
    if (j.at("outputs").get<std::size_t>() != kNumOffsets) {
      throw ParseError(1, 0, "model must have 5 outputs");
    }
    return LinearRegressor(j.at("feature_dim").get<std::size_t>(),
                           j.at("weights").get<std::vector<double>>(),
                           j.at("bias").get<std::array<double, kNumOffsets>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, 0, std::string("malformed model file: ") + e.what());
  } catch (const ShapeError& e) {
    throw ParseError(1, 0, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const LinearRegressor& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open " + path + " for writing");
  out << model_to_json(model);
}

LinearRegressor load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace rroi
