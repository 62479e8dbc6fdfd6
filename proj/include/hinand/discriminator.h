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

#ifndef HINAND_DISCRIMINATOR_H_
#define HINAND_DISCRIMINATOR_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hinand/corpus.h"
#include "hinand/embedding_table.h"
#include "hinand/matrix.h"

namespace hinand {

// Content (u) and relation (v) vectors of one block's papers. Row i belongs to
// the block's i-th paper.
struct PaperFeatures {
  std::vector<std::string> ids;
  Matrix content;
  Matrix relation;

  size_t size() const { return ids.size(); }
};

// Content rows are keyed by paper id, relation rows by "paper:<id>". Both are
// scaled to unit length (zero rows stay zero) so that neither view dominates
// [u; v] through the arbitrary scale of its trainer.
PaperFeatures GatherFeatures(const NameBlock& block, const EmbeddingTable& content,
                             const EmbeddingTable& relation);

// Two-layer tanh network d = tanh(W1^T tanh(W0^T [u; v] + b0) + b1).
struct DiscriminatorParams {
  Matrix w0;               // 2k x hidden
  std::vector<double> b0;  // hidden
  Matrix w1;               // hidden x output
  std::vector<double> b1;  // output

  size_t input_dim() const { return w0.rows(); }
  size_t hidden_dim() const { return w0.cols(); }
  size_t output_dim() const { return w1.cols(); }

  // Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
  static DiscriminatorParams Init(size_t k, size_t hidden, size_t output,
                                  uint64_t seed);
  static DiscriminatorParams Zeros(size_t k, size_t hidden, size_t output);

  bool AllFinite() const;

  // Sections "W0 r c", "b0 n", "W1 r c", "b1 n", each followed by its rows.
  void Write(std::ostream& out) const;
  static DiscriminatorParams Read(std::istream& in);
  void WriteFile(const std::filesystem::path& path) const;
  static DiscriminatorParams ReadFile(const std::filesystem::path& path);

  friend bool operator==(const DiscriminatorParams&,
                         const DiscriminatorParams&) = default;
};

std::vector<double> EmbedD(const DiscriminatorParams& params,
                           std::span<const double> content,
                           std::span<const double> relation);

// d for every paper, one row each.
Matrix EmbedAll(const DiscriminatorParams& params, const PaperFeatures& features);

// sigmoid(d_p . d_q).
double Score(std::span<const double> d_p, std::span<const double> d_q);

// A (paper, anchor) pair with label 1 (pseudo-positive) or 0 (generated).
// Indices refer to the block's papers.
struct LabeledPair {
  size_t paper = 0;
  size_t anchor = 0;
  int label = 0;

  friend auto operator<=>(const LabeledPair&, const LabeledPair&) = default;
};

// For each anchor, the top_k other papers by Score against it, ties broken by
// ascending paper id. Output is ordered by anchor, then rank.
std::vector<LabeledPair> SelectPseudoPositives(const DiscriminatorParams& params,
                                               const PaperFeatures& features,
                                               size_t top_k);

// sum_{y=1} log D + sum_{y=0} log(1 - D) over the batch.
double DiscriminatorObjective(const DiscriminatorParams& params,
                              std::span<const LabeledPair> batch,
                              const PaperFeatures& features);

// Gradient of DiscriminatorObjective, shaped like `params`.
DiscriminatorParams DiscriminatorGradient(const DiscriminatorParams& params,
                                          std::span<const LabeledPair> batch,
                                          const PaperFeatures& features);

// One gradient-ascent step. Throws std::runtime_error on a non-finite
// gradient.
DiscriminatorParams UpdateD(const DiscriminatorParams& params,
                            std::span<const LabeledPair> batch,
                            const PaperFeatures& features, double lr);

}  // namespace hinand

#endif  // HINAND_DISCRIMINATOR_H_
