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

#include "u2d/rl/qnetwork.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace u2d::rl {

QNetwork::QNetwork(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("a network needs input and output layers");
  for (int n : sizes_) {
    if (n < 1) throw std::invalid_argument("layer sizes must be positive");
  }
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    weights_.push_back(Eigen::MatrixXd::Zero(sizes_[l + 1], sizes_[l]));
    biases_.push_back(Eigen::VectorXd::Zero(sizes_[l + 1]));
  }
}

QNetwork QNetwork::glorot(std::vector<int> layer_sizes, Rng& rng) {
  QNetwork net(std::move(layer_sizes));
  for (auto& w : net.weights_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = dist(rng);
    }
  }
  return net;
}

void QNetwork::check_input(Eigen::Index rows) const {
  if (sizes_.empty()) throw std::domain_error("network has no layers");
  if (rows != sizes_.front()) {
    throw std::domain_error("input has " + std::to_string(rows) + " values, network expects " +
                            std::to_string(sizes_.front()));
  }
}

Eigen::VectorXd QNetwork::forward(const Eigen::VectorXd& input) const {
  check_input(input.size());
  Eigen::VectorXd a = input;
  for (int l = 0; l < n_layers(); ++l) {
    Eigen::VectorXd z = weights_[static_cast<std::size_t>(l)] * a + biases_[static_cast<std::size_t>(l)];
    a = l + 1 < n_layers() ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

Eigen::MatrixXd QNetwork::forward_batch(const Eigen::MatrixXd& inputs) const {
  check_input(inputs.rows());
  Eigen::MatrixXd a = inputs;
  for (int l = 0; l < n_layers(); ++l) {
    Eigen::MatrixXd z = weights_[static_cast<std::size_t>(l)] * a;
    z.colwise() += biases_[static_cast<std::size_t>(l)];
    a = l + 1 < n_layers() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

namespace {

Eigen::MatrixXd stack_inputs(std::span<const TrainingSample> batch, int rows) {
  Eigen::MatrixXd x(rows, static_cast<Eigen::Index>(batch.size()));
  for (std::size_t j = 0; j < batch.size(); ++j) {
    if (batch[j].input.size() != rows) throw std::domain_error("sample input size mismatch");
    x.col(static_cast<Eigen::Index>(j)) = batch[j].input;
  }
  return x;
}

}  // namespace

double QNetwork::loss(std::span<const TrainingSample> batch) const {
  const Eigen::MatrixXd q = forward_batch(stack_inputs(batch, input_size()));
  double total = 0.0;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const double e = batch[j].target - q(batch[j].action, static_cast<Eigen::Index>(j));
    total += e * e;
  }
  return total;
}

Gradient QNetwork::gradient(std::span<const TrainingSample> batch, double* loss_out) const {
  if (batch.empty()) throw std::invalid_argument("gradient needs a nonempty batch");
  const int L = n_layers();
  std::vector<Eigen::MatrixXd> acts;  // acts[l] is the input to layer l
  acts.reserve(static_cast<std::size_t>(L + 1));
  acts.push_back(stack_inputs(batch, input_size()));
  for (int l = 0; l < L; ++l) {
    Eigen::MatrixXd z = weights_[static_cast<std::size_t>(l)] * acts.back();
    z.colwise() += biases_[static_cast<std::size_t>(l)];
    acts.push_back(l + 1 < L ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z);
  }

  const auto n = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(output_size(), n);
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& s = batch[static_cast<std::size_t>(j)];
    if (s.action < 0 || s.action >= output_size()) throw std::out_of_range("action index out of range");
    const double e = acts.back()(s.action, j) - s.target;
    total += e * e;
    delta(s.action, j) = 2.0 * e;
  }
  if (loss_out) *loss_out = total;

  Gradient g;
  g.weights.resize(static_cast<std::size_t>(L));
  g.biases.resize(static_cast<std::size_t>(L));
  for (int l = L - 1; l >= 0; --l) {
    const auto ul = static_cast<std::size_t>(l);
    g.weights[ul] = delta * acts[ul].transpose();
    g.biases[ul] = delta.rowwise().sum();
    if (l > 0) {
      delta = weights_[ul].transpose() * delta;
      delta = delta.cwiseProduct((acts[ul].array() > 0.0).cast<double>().matrix());
    }
  }
  return g;
}

void QNetwork::apply(const Gradient& g, double learning_rate) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l] -= learning_rate * g.weights[l];
    biases_[l] -= learning_rate * g.biases[l];
  }
}

bool QNetwork::finite() const {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
  }
  return true;
}

namespace {

void put(std::ostringstream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  out << buf;
}

}  // namespace

std::string QNetwork::save() const {
  std::ostringstream out;
  out << kCheckpointTag << "\nlayers";
  for (int n : sizes_) out << ' ' << n;
  out << '\n';
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) {
        if (c) out << ' ';
        put(out, weights_[l](r, c));
      }
      out << '\n';
    }
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) {
      if (r) out << ' ';
      put(out, biases_[l](r));
    }
    out << '\n';
  }
  return out.str();
}

QNetwork QNetwork::load(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointTag) {
    throw std::runtime_error("checkpoint: missing or unsupported format tag");
  }
  std::string word;
  in >> word;
  if (word != "layers") throw std::runtime_error("checkpoint: expected layer sizes");
  std::getline(in, line);
  std::istringstream sizes_in(line);
  std::vector<int> sizes;
  for (int n; sizes_in >> n;) sizes.push_back(n);
  QNetwork net(sizes);
  auto next = [&] {
    std::string tok;
    if (!(in >> tok)) throw std::runtime_error("checkpoint: truncated weights");
    return std::strtod(tok.c_str(), nullptr);
  };
  for (std::size_t l = 0; l < net.weights_.size(); ++l) {
    for (Eigen::Index r = 0; r < net.weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < net.weights_[l].cols(); ++c) net.weights_[l](r, c) = next();
    }
    for (Eigen::Index r = 0; r < net.biases_[l].size(); ++r) net.biases_[l](r) = next();
  }
  std::string extra;
  if (in >> extra) throw std::runtime_error("checkpoint: trailing data");
  return net;
}

bool operator==(const QNetwork& a, const QNetwork& b) {
  if (a.sizes_ != b.sizes_) return false;
  for (std::size_t l = 0; l < a.weights_.size(); ++l) {
    if (a.weights_[l] != b.weights_[l] || a.biases_[l] != b.biases_[l]) return false;
  }
  return true;
}

}  // namespace u2d::rl
