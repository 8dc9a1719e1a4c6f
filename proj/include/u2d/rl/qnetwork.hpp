// Copyright 2026 The u2d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "u2d/rng.hpp"

namespace u2d::rl {

inline constexpr std::string_view kCheckpointTag = "u2d-qnetwork v1";

struct TrainingSample {
  Eigen::VectorXd input;
  int action = 0;
  double target = 0.0;
};

struct Gradient {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Fully connected net: rectifier on hidden layers, identity on the output.
class QNetwork {
 public:
  QNetwork() = default;
  // All weights zero.
  explicit QNetwork(std::vector<int> layer_sizes);
  // Uniform in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  static QNetwork glorot(std::vector<int> layer_sizes, Rng& rng);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int n_layers() const { return static_cast<int>(weights_.size()); }

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
  // One sample per column.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

  // Sum over samples of (target - Q(input, action))^2.
  double loss(std::span<const TrainingSample> batch) const;
  Gradient gradient(std::span<const TrainingSample> batch, double* loss_out = nullptr) const;
  void apply(const Gradient& g, double learning_rate);

  bool finite() const;

  std::string save() const;
  static QNetwork load(std::string_view text);

  friend bool operator==(const QNetwork& a, const QNetwork& b);

 private:
  void check_input(Eigen::Index rows) const;

  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> weights_;  // [layer] out x in
  std::vector<Eigen::VectorXd> biases_;
};

}  // namespace u2d::rl
