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

#include "gtest/gtest.h"
#include "hinand/rng.h"

namespace hinand {
namespace {

ClusteringResult Clusters(std::vector<std::vector<std::string>> clusters) {
  ClusteringResult r;
  r.k = clusters.size();
  r.clusters = std::move(clusters);
  return r;
}

std::vector<std::string> Ids(size_t n) {
  std::vector<std::string> ids;
  for (size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(100 + i));
  return ids;
}

TEST(PairwisePrfTest, WorkedExample) {
  const TruthLabels truth = {{"1", "a"}, {"2", "a"}, {"3", "b"}};
  const auto m = PairwisePrf(Clusters({{"1", "2", "3"}}), truth);
  EXPECT_DOUBLE_EQ(m.precision, 1.0 / 3.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.f1, 0.5);
  EXPECT_EQ(m.predicted_pairs, 3u);
  EXPECT_EQ(m.truth_pairs, 1u);
  EXPECT_EQ(m.common_pairs, 1u);
}

TEST(PairwisePrfTest, IdentityAndSingletons) {
  const TruthLabels truth = {{"1", "a"}, {"2", "a"}, {"3", "b"}};
  const auto same = PairwisePrf(Clusters({{"1", "2"}, {"3"}}), truth);
  EXPECT_EQ(same.precision, 1.0);
  EXPECT_EQ(same.recall, 1.0);
  EXPECT_EQ(same.f1, 1.0);
  const auto singles = PairwisePrf(Clusters({{"1"}, {"2"}, {"3"}}), truth);
  EXPECT_EQ(singles.precision, 0.0);
  EXPECT_EQ(singles.recall, 0.0);
  EXPECT_EQ(singles.f1, 0.0);
}

TEST(PairwisePrfTest, RejectsMismatchedPapers) {
  const TruthLabels truth = {{"1", "a"}, {"2", "a"}};
  EXPECT_THROW(PairwisePrf(Clusters({{"1"}}), truth), std::invalid_argument);
  EXPECT_THROW(PairwisePrf(Clusters({{"1", "9"}}), truth), std::invalid_argument);
  EXPECT_THROW(PairwisePrf(Clusters({{"1", "2"}, {"2"}}), truth), std::invalid_argument);
}

// Enumerates every unordered pair; exact match required.
TEST(PairwisePrfTest, MatchesBruteForceEnumeration) {
  Rng rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 1 + rng.UniformInt(30);
    const size_t kp = 1 + rng.UniformInt(n), kt = 1 + rng.UniformInt(n);
    const auto ids = Ids(n);
    std::vector<size_t> pred(n), gold(n);
    TruthLabels truth;
    std::vector<std::vector<std::string>> clusters(kp);
    for (size_t i = 0; i < n; ++i) {
      pred[i] = rng.UniformInt(kp);
      gold[i] = rng.UniformInt(kt);
      truth[ids[i]] = "a" + std::to_string(gold[i]);
      clusters[pred[i]].push_back(ids[i]);
    }
    std::erase_if(clusters, [](const auto& c) { return c.empty(); });
    uint64_t tp = 0, pp = 0, tt = 0;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        pp += pred[i] == pred[j];
        tt += gold[i] == gold[j];
        tp += pred[i] == pred[j] && gold[i] == gold[j];
      }
    }
    const double p = pp ? static_cast<double>(tp) / static_cast<double>(pp) : 0.0;
    const double r = tt ? static_cast<double>(tp) / static_cast<double>(tt) : 0.0;
    const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    const auto m = PairwisePrf(Clusters(clusters), truth);
    EXPECT_EQ(m.common_pairs, tp);
    EXPECT_EQ(m.predicted_pairs, pp);
    EXPECT_EQ(m.truth_pairs, tt);
    EXPECT_EQ(m.precision, p);
    EXPECT_EQ(m.recall, r);
    EXPECT_EQ(m.f1, f);
  }
}

TEST(MacroAverageTest, AveragesEachMetricSeparately) {
  PairwiseMetrics a{1.0, 0.5, 2.0 / 3.0, 2, 4, 2};
  PairwiseMetrics b{0.5, 0.5, 0.5, 4, 4, 2};
  const std::vector<PairwiseMetrics> both = {a, b};
  const auto m = MacroAverage(both);
  EXPECT_DOUBLE_EQ(m.precision, 0.75);
  EXPECT_DOUBLE_EQ(m.recall, 0.5);
  EXPECT_DOUBLE_EQ(m.f1, (2.0 / 3.0 + 0.5) / 2);
  EXPECT_NE(m.f1, 2 * 0.75 * 0.5 / 1.25);
  EXPECT_EQ(m.predicted_pairs, 6u);
  EXPECT_THROW(MacroAverage({}), std::invalid_argument);
}

TEST(CosineDistanceTest, Basics) {
  const std::vector<double> a = {1, 0}, b = {0, 2}, c = {-3, 0}, z = {0, 0};
  EXPECT_EQ(CosineDistance(a, a), 0.0);
  EXPECT_EQ(CosineDistance(a, b), 1.0);
  EXPECT_EQ(CosineDistance(a, c), 2.0);
  EXPECT_EQ(CosineDistance(a, z), 1.0);
  EXPECT_EQ(CosineDistance(z, z), 1.0);
}

TEST(ClusterHacTest, ExtremeCounts) {
  Rng rng(2);
  Matrix reps(5, 3);
  for (double& x : reps.data()) x = rng.Uniform(-1, 1);
  const auto ids = Ids(5);
  const auto all = ClusterHac(ids, reps, 5, Linkage::kAverage, "X");
  EXPECT_EQ(all.clusters.size(), 5u);
  EXPECT_EQ(all.name_ref, "X");
  for (const auto& c : all.clusters) EXPECT_EQ(c.size(), 1u);
  const auto one = ClusterHac(ids, reps, 1);
  ASSERT_EQ(one.clusters.size(), 1u);
  EXPECT_EQ(one.clusters[0], ids);
  EXPECT_THROW(ClusterHac(ids, reps, 0), std::invalid_argument);
  EXPECT_THROW(ClusterHac(ids, reps, 6), std::invalid_argument);
}

// Sum of within-cluster distances, minimized over every 2-partition.
TEST(ClusterHacTest, TwoPlantedGroupsMatchBruteForceOptimum) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t n = 4 + rng.UniformInt(9), dim = 4;
    std::vector<double> ca(dim), cb(dim);
    for (auto& x : ca) x = rng.Uniform(-1, 1);
    for (auto& x : cb) x = rng.Uniform(-1, 1);
    if (CosineDistance(ca, cb) < 0.5) continue;
    Matrix reps(n, dim);
    std::vector<int> planted(n);
    for (size_t i = 0; i < n; ++i) {
      planted[i] = i == 0 ? 0 : (i == 1 ? 1 : static_cast<int>(rng.UniformInt(2)));
      const auto& c = planted[i] ? cb : ca;
      for (size_t j = 0; j < dim; ++j) reps(i, j) = c[j] + rng.Uniform(-0.01, 0.01);
    }
    const auto ids = Ids(n);
    uint32_t best_mask = 0;
    double best = std::numeric_limits<double>::infinity();
    for (uint32_t mask = 1; mask + 1 < (1u << n); mask += 2) {  // element 0 fixed
      double within = 0.0;
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
          if (((mask >> i) & 1) == ((mask >> j) & 1)) {
            within += CosineDistance(reps.row(i), reps.row(j));
          }
        }
      }
      if (within < best) {
        best = within;
        best_mask = mask;
      }
    }
    // Masks are odd, so bit 1 marks the side holding paper 0.
    std::vector<std::string> side;
    for (size_t i = 0; i < n; ++i) {
      if ((best_mask >> i) & 1) side.push_back(ids[i]);
    }
    std::vector<std::string> planted_a;
    for (size_t i = 0; i < n; ++i) {
      if (planted[i] == 0) planted_a.push_back(ids[i]);
    }
    const auto r = ClusterHac(ids, reps, 2);
    ASSERT_EQ(r.clusters.size(), 2u);
    EXPECT_EQ(r.clusters[0], planted_a);
    EXPECT_EQ(side, planted_a);
  }
}

// Naive HAC recomputing every cluster distance from the member distances.
std::vector<std::vector<std::string>> NaiveHac(const std::vector<std::string>& ids,
                                               const Matrix& reps, size_t k,
                                               Linkage linkage) {
  std::vector<std::vector<size_t>> clusters;
  for (size_t i = 0; i < ids.size(); ++i) clusters.push_back({i});
  auto link = [&](const std::vector<size_t>& a, const std::vector<size_t>& b) {
    double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (size_t i : a) {
      for (size_t j : b) {
        const double d = CosineDistance(reps.row(i), reps.row(j));
        sum += d;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
    }
    if (linkage == Linkage::kSingle) return lo;
    if (linkage == Linkage::kComplete) return hi;
    return sum / static_cast<double>(a.size() * b.size());
  };
  while (clusters.size() > k) {
    size_t ba = 0, bb = 1;
    double best = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < clusters.size(); ++a) {
      for (size_t b = a + 1; b < clusters.size(); ++b) {
        const double d = link(clusters[a], clusters[b]);
        if (d < best) {
          best = d;
          ba = a;
          bb = b;
        }
      }
    }
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
  }
  std::vector<std::vector<std::string>> out;
  for (const auto& c : clusters) {
    std::vector<std::string> names;
    for (size_t i : c) names.push_back(ids[i]);
    std::sort(names.begin(), names.end());
    out.push_back(names);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(ClusterHacTest, MatchesNaiveRecomputationForEveryLinkage) {
  Rng rng(23);
  for (Linkage linkage : {Linkage::kAverage, Linkage::kSingle, Linkage::kComplete}) {
    for (int trial = 0; trial < 60; ++trial) {
      const size_t n = 2 + rng.UniformInt(14);
      Matrix reps(n, 3);
      for (double& x : reps.data()) x = rng.Uniform(-1, 1);
      const auto ids = Ids(n);
      const size_t k = 1 + rng.UniformInt(n);
      const auto r = ClusterHac(ids, reps, k, linkage);
      EXPECT_EQ(r.clusters, NaiveHac(ids, reps, k, linkage))
          << LinkageName(linkage) << " trial " << trial;
      EXPECT_EQ(r.k, k);
    }
  }
}

TEST(ClusterHacTest, TiesMergeLexicographicallySmallestPair) {
  // Four identical vectors: every distance is 0, so merges follow the ids.
  Matrix reps(4, 2, 1.0);
  const std::vector<std::string> ids = {"d", "b", "c", "a"};
  const auto r = ClusterHac(ids, reps, 3);
  EXPECT_EQ(r.clusters, (std::vector<std::vector<std::string>>{{"a", "b"}, {"c"}, {"d"}}));
  const auto r2 = ClusterHac(ids, reps, 2);
  EXPECT_EQ(r2.clusters, (std::vector<std::vector<std::string>>{{"a", "b", "c"}, {"d"}}));
}

TEST(ClusterHacTest, OutputIsCanonicalAndCovering) {
  Rng rng(5);
  Matrix reps(12, 4);
  for (double& x : reps.data()) x = rng.Uniform(-1, 1);
  std::vector<std::string> ids = Ids(12);
  std::reverse(ids.begin(), ids.end());
  const auto r = ClusterHac(ids, reps, 4);
  std::vector<std::string> all;
  for (const auto& c : r.clusters) {
    EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
    all.insert(all.end(), c.begin(), c.end());
  }
  EXPECT_TRUE(std::is_sorted(r.clusters.begin(), r.clusters.end()));
  std::sort(all.begin(), all.end());
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(all, ids);
}

TEST(LinkageTest, NamesRoundTrip) {
  for (Linkage l : {Linkage::kAverage, Linkage::kSingle, Linkage::kComplete}) {
    EXPECT_EQ(ParseLinkage(LinkageName(l)), l);
  }
  EXPECT_THROW(ParseLinkage("ward"), std::invalid_argument);
}

TEST(FinalRepresentationTest, ConcatenatesUnitHalves) {
  PaperFeatures f;
  f.ids = {"a", "b"};
  f.content = Matrix(2, 2, 0.5);
  f.relation = Matrix(2, 2, -0.25);
  auto d = DiscriminatorParams::Init(2, 4, 3, 1);
  GeneratorParams g;
  g.paper = Matrix(2, 2);
  g.paper(0, 0) = 3.0;
  g.paper(0, 1) = 4.0;
  g.entity = Matrix(0, 2);
  const auto rep = FinalRepresentation(d, g, f, 0);
  ASSERT_EQ(rep.size(), 5u);
  const std::span<const double> dh(rep.data(), 3), gh(rep.data() + 3, 2);
  EXPECT_NEAR(Norm(dh), 1.0, 1e-12);
  EXPECT_NEAR(gh[0], 0.6, 1e-15);
  const auto raw = EmbedD(d, f.content.row(0), f.relation.row(0));
  EXPECT_NEAR(CosineDistance(dh, raw), 0.0, 1e-12);
  const auto zero_g = FinalRepresentation(d, g, f, 1);
  EXPECT_EQ(zero_g[3], 0.0);
  EXPECT_EQ(zero_g[4], 0.0);
  EXPECT_THROW(FinalRepresentation(d, g, f, 2), std::out_of_range);
  EXPECT_EQ(FinalRepresentations(d, g, f).rows(), 2u);
}

}  // namespace
}  // namespace hinand
