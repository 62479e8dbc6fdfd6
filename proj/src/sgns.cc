// Copyright 2026 The hinand Authors.
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

#include "hinand/sgns.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hinand {

NegativeSampler::NegativeSampler(std::span<const uint64_t> counts,
                                 double power) {
  if (counts.empty()) throw std::invalid_argument("empty sampling table");
  cumulative_.reserve(counts.size());
  double total = 0.0;
  for (uint64_t c : counts) {
    total += std::pow(static_cast<double>(c), power);
    cumulative_.push_back(total);
  }
  if (!(total > 0.0)) throw std::invalid_argument("all sampling counts are zero");
  for (double& c : cumulative_) c /= total;
  cumulative_.back() = 1.0;
}

size_t NegativeSampler::Sample(Rng& rng) const {
  const double u = rng.Uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<size_t>(it - cumulative_.begin());
}

double NegativeSampler::Probability(size_t i) const {
  return i == 0 ? cumulative_[0] : cumulative_[i] - cumulative_[i - 1];
}

double SgnsLoss(std::span<const double> input, std::span<const double> positive,
                std::span<const std::span<const double>> negatives) {
  double loss = Softplus(-Dot(input, positive));
  for (auto n : negatives) loss += Softplus(Dot(input, n));
  return loss;
}

SgnsGradient ComputeSgnsGradient(
    std::span<const double> input, std::span<const double> positive,
    std::span<const std::span<const double>> negatives) {
  const size_t k = input.size();
  SgnsGradient g;
  g.input.assign(k, 0.0);
  // d/ds softplus(-s) = -(1 - sigmoid(s))
  const double gp = -(1.0 - Sigmoid(Dot(input, positive)));
  g.positive.resize(k);
  for (size_t i = 0; i < k; ++i) {
    g.input[i] += gp * positive[i];
    g.positive[i] = gp * input[i];
  }
  for (auto n : negatives) {
    const double gn = Sigmoid(Dot(input, n));
    auto& out = g.negatives.emplace_back(k);
    for (size_t i = 0; i < k; ++i) {
      g.input[i] += gn * n[i];
      out[i] = gn * input[i];
    }
  }
  return g;
}

double SgnsStep(std::span<double> input, Matrix& output, size_t positive,
                std::span<const size_t> negatives, double lr,
                std::span<double> scratch) {
  std::fill(scratch.begin(), scratch.end(), 0.0);
  double loss = 0.0;
  auto apply = [&](size_t row, double label) {
    auto y = output.row(row);
    const double s = Dot(input, y);
    loss += label > 0 ? Softplus(-s) : Softplus(s);
    const double g = lr * (label - Sigmoid(s));
    Axpy(g, y, scratch);
    Axpy(g, input, y);
  };
  apply(positive, 1.0);
  for (size_t n : negatives) {
    if (n == positive) continue;
    apply(n, 0.0);
  }
  Axpy(1.0, scratch, input);
  return loss;
}

}  // namespace hinand
