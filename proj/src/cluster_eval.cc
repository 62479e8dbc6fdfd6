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

#include "hinand/cluster_eval.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hinand {

Linkage ParseLinkage(std::string_view name) {
  if (name == "average") return Linkage::kAverage;
  if (name == "single") return Linkage::kSingle;
  if (name == "complete") return Linkage::kComplete;
  throw std::invalid_argument("unknown linkage \"" + std::string(name) + "\"");
}

std::string_view LinkageName(Linkage linkage) {
  switch (linkage) {
    case Linkage::kAverage:
      return "average";
    case Linkage::kSingle:
      return "single";
    case Linkage::kComplete:
      return "complete";
  }
  return "average";
}

std::vector<double> FinalRepresentation(const DiscriminatorParams& discriminator,
                                        const GeneratorParams& generator,
                                        const PaperFeatures& features, size_t p) {
  if (p >= features.size() || p >= generator.paper.rows()) {
    throw std::out_of_range("no embedding for paper " + std::to_string(p));
  }
  auto out = NormalizedOrZero(
      EmbedD(discriminator, features.content.row(p), features.relation.row(p)));
  const auto g = NormalizedOrZero(generator.paper.row(p));
  out.insert(out.end(), g.begin(), g.end());
  return out;
}

Matrix FinalRepresentations(const DiscriminatorParams& discriminator,
                            const GeneratorParams& generator,
                            const PaperFeatures& features) {
  Matrix m(0, discriminator.output_dim() + generator.dim());
  for (size_t p = 0; p < features.size(); ++p) {
    m.AppendRow(FinalRepresentation(discriminator, generator, features, p));
  }
  return m;
}

double CosineDistance(std::span<const double> a, std::span<const double> b) {
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0 || nb == 0) return 1.0;
  return 1.0 - Dot(a, b) / (na * nb);
}

ClusteringResult ClusterHac(std::span<const std::string> ids,
                            const Matrix& representations, size_t k,
                            Linkage linkage, std::string name_ref) {
  const size_t n = ids.size();
  if (representations.rows() != n) {
    throw std::invalid_argument("one representation per paper is required");
  }
  if (k < 1 || k > n) {
    throw std::invalid_argument("cluster count " + std::to_string(k) +
                                " out of range [1, " + std::to_string(n) + "]");
  }
  Matrix dist(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      dist(i, j) = dist(j, i) =
          CosineDistance(representations.row(i), representations.row(j));
    }
  }
  std::vector<std::vector<size_t>> members(n);
  std::vector<std::string> min_id(ids.begin(), ids.end());
  std::vector<size_t> active(n);
  for (size_t i = 0; i < n; ++i) members[i] = {i};
  std::iota(active.begin(), active.end(), 0);

  // Orders a candidate pair by (smaller min id, larger min id).
  auto pair_key = [&](size_t a, size_t b) {
    return std::minmax(min_id[a], min_id[b]);
  };

  while (active.size() > k) {
    size_t best_a = 0, best_b = 0;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (size_t x = 0; x < active.size(); ++x) {
      for (size_t y = x + 1; y < active.size(); ++y) {
        const size_t a = active[x], b = active[y];
        const double d = dist(a, b);
        if (!found || d < best || (d == best && pair_key(a, b) < pair_key(best_a, best_b))) {
          best = d;
          best_a = a;
          best_b = b;
          found = true;
        }
      }
    }
    const double na = static_cast<double>(members[best_a].size());
    const double nb = static_cast<double>(members[best_b].size());
    for (size_t c : active) {
      if (c == best_a || c == best_b) continue;
      double merged = 0.0;
      switch (linkage) {
        case Linkage::kAverage:
          merged = (na * dist(best_a, c) + nb * dist(best_b, c)) / (na + nb);
          break;
        case Linkage::kSingle:
          merged = std::min(dist(best_a, c), dist(best_b, c));
          break;
        case Linkage::kComplete:
          merged = std::max(dist(best_a, c), dist(best_b, c));
          break;
      }
      dist(best_a, c) = dist(c, best_a) = merged;
    }
    members[best_a].insert(members[best_a].end(), members[best_b].begin(),
                           members[best_b].end());
    members[best_b].clear();
    min_id[best_a] = std::min(min_id[best_a], min_id[best_b]);
    std::erase(active, best_b);
  }

  ClusteringResult result;
  result.name_ref = std::move(name_ref);
  result.k = k;
  for (size_t c : active) {
    std::vector<std::string> cluster;
    for (size_t m : members[c]) cluster.push_back(ids[m]);
    std::sort(cluster.begin(), cluster.end());
    result.clusters.push_back(std::move(cluster));
  }
  std::sort(result.clusters.begin(), result.clusters.end());
  return result;
}

PairwiseMetrics PairwisePrf(const ClusteringResult& predicted,
                            const TruthLabels& truth) {
  size_t covered = 0;
  std::map<std::pair<size_t, std::string>, uint64_t> cells;
  std::map<std::string, uint64_t> truth_sizes;
  std::set<std::string> seen;
  auto pairs = [](uint64_t m) -> uint64_t { return m < 2 ? 0 : m * (m - 1) / 2; };
  PairwiseMetrics m;
  for (size_t c = 0; c < predicted.clusters.size(); ++c) {
    const auto& cluster = predicted.clusters[c];
    m.predicted_pairs += pairs(cluster.size());
    for (const auto& id : cluster) {
      auto it = truth.find(id);
      if (it == truth.end()) {
        throw std::invalid_argument("paper \"" + id + "\" has no truth label");
      }
      if (!seen.insert(id).second) {
        throw std::invalid_argument("paper \"" + id + "\" appears in two clusters");
      }
      ++cells[{c, it->second}];
      ++truth_sizes[it->second];
      ++covered;
    }
  }
  if (covered != truth.size()) {
    throw std::invalid_argument("truth labels cover papers missing from the clustering");
  }
  for (const auto& [label, size] : truth_sizes) m.truth_pairs += pairs(size);
  for (const auto& [cell, size] : cells) m.common_pairs += pairs(size);
  m.precision = m.predicted_pairs
                    ? static_cast<double>(m.common_pairs) / static_cast<double>(m.predicted_pairs)
                    : 0.0;
  m.recall = m.truth_pairs
                 ? static_cast<double>(m.common_pairs) / static_cast<double>(m.truth_pairs)
                 : 0.0;
  m.f1 = m.precision + m.recall > 0
             ? 2 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

PairwiseMetrics MacroAverage(std::span<const PairwiseMetrics> metrics) {
  if (metrics.empty()) throw std::invalid_argument("macro average of no names");
  PairwiseMetrics avg;
  for (const auto& m : metrics) {
    avg.precision += m.precision;
    avg.recall += m.recall;
    avg.f1 += m.f1;
    avg.predicted_pairs += m.predicted_pairs;
    avg.truth_pairs += m.truth_pairs;
    avg.common_pairs += m.common_pairs;
  }
  const double count = static_cast<double>(metrics.size());
  avg.precision /= count;
  avg.recall /= count;
  avg.f1 /= count;
  return avg;
}

}  // namespace hinand
