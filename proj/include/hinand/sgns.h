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

#ifndef HINAND_SGNS_H_
#define HINAND_SGNS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hinand/matrix.h"
#include "hinand/rng.h"

namespace hinand {

// Draws indices with probability proportional to count^power.
class NegativeSampler {
 public:
  explicit NegativeSampler(std::span<const uint64_t> counts,
                           double power = 0.75);

  size_t Sample(Rng& rng) const;
  double Probability(size_t i) const;
  size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

// Negative-sampling loss of one (input, positive, negatives) triple:
//   -log sigmoid(x.y) - sum_n log sigmoid(-x.n)
double SgnsLoss(std::span<const double> input, std::span<const double> positive,
                std::span<const std::span<const double>> negatives);

struct SgnsGradient {
  std::vector<double> input;
  std::vector<double> positive;
  std::vector<std::vector<double>> negatives;
};

// Gradient of SgnsLoss with respect to each argument, treating every argument
// as a distinct parameter vector.
SgnsGradient ComputeSgnsGradient(
    std::span<const double> input, std::span<const double> positive,
    std::span<const std::span<const double>> negatives);

// One SGD step on SgnsLoss where the positive and negative vectors are rows of
// `output`. Negative draws equal to `positive` are skipped. Returns the loss
// at the parameters before the step. `scratch` must have input.size()
// elements.
double SgnsStep(std::span<double> input, Matrix& output, size_t positive,
                std::span<const size_t> negatives, double lr,
                std::span<double> scratch);

}  // namespace hinand

#endif  // HINAND_SGNS_H_
