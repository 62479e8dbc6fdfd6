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

#ifndef HINAND_CLUSTER_EVAL_H_
#define HINAND_CLUSTER_EVAL_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hinand/corpus.h"
#include "hinand/discriminator.h"
#include "hinand/generator.h"
#include "hinand/matrix.h"

namespace hinand {

// Disjoint clusters covering one block. Each cluster is sorted by id and the
// clusters are ordered by their smallest id.
struct ClusteringResult {
  std::string name_ref;
  std::vector<std::vector<std::string>> clusters;
  size_t k = 0;

  friend bool operator==(const ClusteringResult&, const ClusteringResult&) = default;
};

struct PairwiseMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  uint64_t predicted_pairs = 0;  // same cluster in the prediction
  uint64_t truth_pairs = 0;      // same author in the truth
  uint64_t common_pairs = 0;     // both
};

enum class Linkage { kAverage, kSingle, kComplete };

Linkage ParseLinkage(std::string_view name);
std::string_view LinkageName(Linkage linkage);


// [d_p / |d_p| ; g_p / |g_p|].
std::vector<double> FinalRepresentation(const DiscriminatorParams& discriminator,
                                        const GeneratorParams& generator,
                                        const PaperFeatures& features, size_t p);
Matrix FinalRepresentations(const DiscriminatorParams& discriminator,
                            const GeneratorParams& generator,
                            const PaperFeatures& features);

// 1 - cosine similarity; a zero vector is at distance 1 from everything.
double CosineDistance(std::span<const double> a, std::span<const double> b);

// Agglomerative clustering under cosine distance until exactly k clusters
// remain. Merge ties go to the pair whose (smallest member id, smallest member
// id) is lexicographically least. Throws std::invalid_argument unless
// 1 <= k <= ids.size().
ClusteringResult ClusterHac(std::span<const std::string> ids,
                            const Matrix& representations, size_t k,
                            Linkage linkage = Linkage::kAverage,
                            std::string name_ref = {});

// Precision and recall over unordered paper pairs; 0 when a denominator is 0.
// Throws std::invalid_argument when the prediction and truth cover different
// papers.
PairwiseMetrics PairwisePrf(const ClusteringResult& predicted, const TruthLabels& truth);

// Unweighted mean of each metric; f1 is averaged, not recomputed. Pair counts
// are summed. Throws std::invalid_argument on an empty list.
PairwiseMetrics MacroAverage(std::span<const PairwiseMetrics> metrics);

}  // namespace hinand

#endif  // HINAND_CLUSTER_EVAL_H_
