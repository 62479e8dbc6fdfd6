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

#ifndef HINAND_GENERATOR_H_
#define HINAND_GENERATOR_H_

#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

#include "hinand/corpus.h"
#include "hinand/embedding_table.h"
#include "hinand/matrix.h"
#include "hinand/rng.h"

namespace hinand {

// Generator vectors g for the papers and entities of one network. Row i of
// `paper` is paper node i; row e of `entity` is node num_papers() + e.
struct GeneratorParams {
  Matrix paper;
  Matrix entity;

  size_t dim() const { return paper.cols(); }
  std::span<const double> node(const HeterogeneousNetwork& hin, NodeId n) const;
  bool AllFinite() const { return paper.AllFinite() && entity.AllFinite(); }

  // Same ids as the relation table ("paper:..", "venue:..", ...).
  EmbeddingTable ToTable(const HeterogeneousNetwork& hin) const;

  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

// Copies every node's vector out of `table` (normally the relation table).
// Throws std::out_of_range naming the first missing node.
GeneratorParams InitGenerator(const EmbeddingTable& table,
                              const HeterogeneousNetwork& hin);

// log sum_{t in shared(p, q)} exp((g_p . g_t)(g_q . g_t)); -inf when p and q
// share no entity. Symmetric in p and q.
double LogAffinity(const GeneratorParams& params, const HeterogeneousNetwork& hin,
                   NodeId p, NodeId q);

// Probability of selecting first-order neighbor p given the anchor: p's
// affinity with the anchor normalized over the anchor's first-order
// neighborhood. Throws std::invalid_argument if p is not a first-order
// neighbor of the anchor (including when the neighborhood is empty).
double PairProb(const GeneratorParams& params, const HeterogeneousNetwork& hin,
                NodeId p, NodeId anchor);

// Undirected weighted paper graph. Weights are kept in log space; edge (p, q)
// exists iff the papers share an entity.
class PaperNetwork {
 public:
  struct Edge {
    size_t to;
    double log_weight;
  };

  // Weight of (p, q) is exp(LogAffinity(p, q)).
  static PaperNetwork Build(const GeneratorParams& params,
                            const HeterogeneousNetwork& hin);
  // (p, q, weight) triples with weight > 0; used for tests and tooling.
  static PaperNetwork FromWeights(
      size_t num_nodes, std::span<const std::tuple<size_t, size_t, double>> edges);

  size_t size() const { return adjacency_.size(); }
  size_t num_edges() const { return num_edges_; }
  std::span<const Edge> edges(size_t p) const { return adjacency_[p]; }
  // 0 when the edge is absent.
  double weight(size_t p, size_t q) const;
  bool HasEdge(size_t p, size_t q) const;

 private:
  void AddEdge(size_t p, size_t q, double log_weight);
  void SortEdges();

  std::vector<std::vector<Edge>> adjacency_;
  size_t num_edges_ = 0;
};

// Maximum-weight spanning tree of the root's connected component, grown from
// the root by repeatedly attaching the heaviest frontier edge (ties: lower
// child index).
struct SpanningTree {
  static constexpr std::ptrdiff_t kNoParent = -1;
  static constexpr std::ptrdiff_t kAbsent = -2;

  size_t root = 0;
  std::vector<std::ptrdiff_t> parent;
  std::vector<std::vector<size_t>> children;  // in insertion order
  std::vector<size_t> order;                  // insertion order, root first

  size_t size() const { return order.size(); }
  bool contains(size_t p) const {
    return p < parent.size() && parent[p] != kAbsent;
  }
  // Parent (if any) first, then children.
  std::vector<size_t> Neighbors(size_t p) const;
  // root, ..., p. Throws std::invalid_argument if p is not in the tree.
  std::vector<size_t> PathFromRoot(size_t p) const;
};

SpanningTree BuildSpanningTree(const PaperNetwork& net, size_t root);

// Transition probabilities from `node` to each of its tree neighbors (same
// order as SpanningTree::Neighbors), proportional to pair affinity.
std::vector<double> StepProbabilities(const GeneratorParams& params,
                                      const HeterogeneousNetwork& hin,
                                      const SpanningTree& tree, size_t node);

// G(p | root): product of step probabilities along the root-to-p path.
double GLikelihood(const GeneratorParams& params, const HeterogeneousNetwork& hin,
                   const SpanningTree& tree, size_t p);

// Random walk from the root over tree neighbors using StepProbabilities. The
// walk halts on the first draw of an already-visited paper; the visited
// non-root papers are returned in visit order.
std::vector<size_t> SampleSelection(const GeneratorParams& params,
                                    const HeterogeneousNetwork& hin,
                                    const SpanningTree& tree, Rng& rng);

// Gradient of log GLikelihood(p) with respect to every g vector.
GeneratorParams LogLikelihoodGradient(const GeneratorParams& params,
                                      const HeterogeneousNetwork& hin,
                                      const SpanningTree& tree, size_t p);

struct GeneratorSample {
  size_t paper = 0;
  size_t anchor = 0;
  double reward = 0.0;  // log(1 - D(paper, anchor))
};

// Score-function step on the value function:
//   g <- g - lr * mean_s(reward_s * grad log G(paper_s | anchor_s)).
// `trees[a]` must be the tree rooted at anchor a. Throws std::runtime_error
// on a non-finite gradient.
GeneratorParams UpdateG(const GeneratorParams& params,
                        const HeterogeneousNetwork& hin,
                        std::span<const SpanningTree> trees,
                        std::span<const GeneratorSample> samples, double lr);

}  // namespace hinand

#endif  // HINAND_GENERATOR_H_
