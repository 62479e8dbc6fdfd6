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

#ifndef HINAND_TRAINER_H_
#define HINAND_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hinand/corpus.h"
#include "hinand/discriminator.h"
#include "hinand/generator.h"

namespace hinand {

struct TrainConfig {
  int max_outer_iters = 30;
  int g_steps = 3;
  int d_steps = 3;
  // Both rates are per sample: each step is scaled by 1 / (samples in the
  // step), so they do not depend on batch_size or walk counts.
  double lr_g = 0.01;
  double lr_d = 0.01;
  int top_k = 3;
  int batch_size = 64;
  int convergence_window = 3;
  double convergence_tol = 1e-3;
  // Discriminator shape; 0 selects the defaults (hidden = 2k, output = k).
  int hidden_dim = 0;
  int output_dim = 0;
  uint64_t seed = 1;

  // max_outer_iters may be 0 (returns the initialized parameters).
  void Validate() const;
};

// Pseudo-positive (label 1) and generated (label 0) pairs. The two sets never
// share an unordered pair and never contain a self-pair.
class SampleStore {
 public:
  const std::vector<LabeledPair>& pseudo() const { return pseudo_; }
  const std::vector<LabeledPair>& generated() const { return generated_; }
  bool empty() const { return pseudo_.empty() && generated_.empty(); }

  // Replaces the pseudo set (duplicates by unordered pair dropped) and evicts
  // any generated pair that collides with it.
  void SetPseudo(std::span<const LabeledPair> pairs);
  // Adds a generated pair unless it is a self-pair, already present, or
  // pseudo-positive. Returns whether it was added.
  bool AddGenerated(size_t paper, size_t anchor);
  void ClearGenerated();
  bool IsPseudo(size_t a, size_t b) const;

 private:
  static uint64_t Key(size_t a, size_t b);

  std::vector<LabeledPair> pseudo_;
  std::vector<LabeledPair> generated_;
  std::vector<uint64_t> pseudo_keys_;     // sorted
  std::vector<uint64_t> generated_keys_;  // sorted
};

// Scores are clamped to [1e-7, 1 - 1e-7] before taking logs.
inline constexpr double kScoreClamp = 1e-7;
double ClampedScore(double score);

// sum over pseudo of log D + sum over generated of log(1 - D). Throws
// std::invalid_argument when the store is empty.
double ValueFunction(const DiscriminatorParams& params, const SampleStore& store,
                     const PaperFeatures& features);

struct IterationLog {
  int iteration = 0;  // 1-based
  double value = 0.0;
  size_t pseudo_size = 0;
  size_t generated_size = 0;
  double mean_d_pseudo = 0.0;
  double mean_d_generated = 0.0;
};

// One JSON object per line.
std::string IterationLogJson(const IterationLog& log);

struct TrainResult {
  DiscriminatorParams discriminator;
  GeneratorParams generator;
  std::vector<IterationLog> log;
  SampleStore store;
  bool converged = false;
  std::vector<std::string> warnings;
};

// Called after every outer iteration with the iteration's log entry and the
// store as it stands after the discriminator steps.
using IterationObserver =
    std::function<void(const IterationLog&, const SampleStore&)>;

// Adversarial training of one block. Per outer iteration: rebuild the paper
// network and one spanning tree per anchor from the current generator; run
// g_steps of (walk from every anchor, reward log(1 - D), UpdateG); refresh the
// pseudo-positives; run d_steps of UpdateD on balanced batches. Stops after
// max_outer_iters or once the mean |delta V| over the last
// convergence_window iterations drops below convergence_tol.
//
// Blocks with one paper return the initialized parameters with a warning. When
// no two papers share an entity the generator side is skipped and the
// discriminator trains on pseudo-positives alone.
TrainResult AdversarialTrain(const HeterogeneousNetwork& hin,
                             const PaperFeatures& features,
                             const GeneratorParams& initial_generator,
                             const TrainConfig& config,
                             const IterationObserver& observer = {});

}  // namespace hinand

#endif  // HINAND_TRAINER_H_
