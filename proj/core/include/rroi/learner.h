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

#ifndef RROI_LEARNER_H_
#define RROI_LEARNER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rroi/encoding.h"
#include "rroi/roi_align.h"

namespace rroi {

inline constexpr std::size_t kNumOffsets = 5;

// Fully connected layer from a flattened pooled feature to an OffsetVector.
// Weights are stored row-major as feature_dim x 5.
class LinearRegressor {
 public:
  explicit LinearRegressor(std::size_t feature_dim);
  LinearRegressor(std::size_t feature_dim, std::vector<double> weights,
                  std::array<double, kNumOffsets> bias);

  std::size_t feature_dim() const { return feature_dim_; }

  double weight(std::size_t f, std::size_t o) const { return weights_[f * kNumOffsets + o]; }
  double& weight(std::size_t f, std::size_t o) { return weights_[f * kNumOffsets + o]; }
  std::span<const double> weights() const { return weights_; }
  std::span<double> weights() { return weights_; }

  const std::array<double, kNumOffsets>& bias() const { return bias_; }
  std::array<double, kNumOffsets>& bias() { return bias_; }

  friend bool operator==(const LinearRegressor&, const LinearRegressor&) = default;

 private:
  std::size_t feature_dim_;
  std::vector<double> weights_;
  std::array<double, kNumOffsets> bias_{};
};

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 200;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  double smooth_l1_beta = 1.0;
};

struct TrainingSample {
  std::vector<double> features;
  OffsetVector target;
};

struct SmoothL1 {
  double loss = 0.0;
  std::array<double, kNumOffsets> grad{};  // d loss / d pred
};

// Sum over the five components of
//   0.5 d^2 / beta   if |d| < beta
//   |d| - 0.5 beta   otherwise
// with d = pred - target.
SmoothL1 smooth_l1(const OffsetVector& pred, const OffsetVector& target, double beta);

OffsetVector predict(const LinearRegressor& model, std::span<const double> features);
OffsetVector predict(const LinearRegressor& model, const PooledFeature& pooled);

// Mean smooth-L1 over the dataset and its gradient with respect to the
// model parameters.
struct Objective {
  double loss = 0.0;
  std::vector<double> weight_grad;  // same layout as LinearRegressor weights
  std::array<double, kNumOffsets> bias_grad{};
};
Objective objective(const LinearRegressor& model,
                    std::span<const TrainingSample> dataset, double beta);

// Largest step size for which full-batch gradient descent on the mean
// smooth-L1 objective is guaranteed not to increase the loss:
// beta / lambda_max(E[x x^T]) with x the feature vector extended by 1.
double stable_learning_rate(std::span<const TrainingSample> dataset, double beta);

struct TrainResult {
  LinearRegressor model;
  // Per epoch: mean smooth-L1 over the samples of that epoch, each measured
  // on its mini-batch before the batch's update.
  std::vector<double> loss_trace;
};

// Mini-batch gradient descent from zero-initialized parameters. The sample
// order is reshuffled each epoch from `seed`, so runs are reproducible
// bit-for-bit. Throws TrainingDiverged when the loss becomes non-finite.
TrainResult train(std::span<const TrainingSample> dataset, const TrainConfig& config);

// Versioned JSON parameter file.
inline constexpr const char* kModelMagic = "rroi-linear-regressor";
inline constexpr int kModelVersion = 1;

std::string model_to_json(const LinearRegressor& model);
LinearRegressor model_from_json(const std::string& text);
void save_model(const LinearRegressor& model, const std::string& path);
LinearRegressor load_model(const std::string& path);

}  // namespace rroi

#endif  // RROI_LEARNER_H_
