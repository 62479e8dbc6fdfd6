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

#include "hinand/generator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hinand {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogSumExp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

std::span<double> MutableNode(GeneratorParams& params,
                              const HeterogeneousNetwork& hin, NodeId n) {
  return hin.is_paper(n) ? params.paper.row(n)
                         : params.entity.row(n - hin.num_papers());
}

// Per shared entity t: s_t = (g_p . g_t)(g_q . g_t).
std::vector<double> SharedLogits(const GeneratorParams& params,
                                 const HeterogeneousNetwork& hin,
                                 std::span<const NodeId> shared, NodeId p,
                                 NodeId q) {
  std::vector<double> logits;
  logits.reserve(shared.size());
  const auto gp = params.node(hin, p);
  const auto gq = params.node(hin, q);
  for (NodeId t : shared) {
    const auto gt = params.node(hin, t);
    logits.push_back(Dot(gp, gt) * Dot(gq, gt));
  }
  return logits;
}

// grad += scale * d LogAffinity(p, q) / d g.
void AddLogAffinityGradient(const GeneratorParams& params,
                            const HeterogeneousNetwork& hin, NodeId p, NodeId q,
                            double scale, GeneratorParams& grad) {
  const auto shared = hin.SharedEntities(p, q);
  const auto logits = SharedLogits(params, hin, shared, p, q);
  const double lse = LogSumExp(logits);
  const auto gp = params.node(hin, p);
  const auto gq = params.node(hin, q);
  auto out_p = MutableNode(grad, hin, p);
  auto out_q = MutableNode(grad, hin, q);
  for (size_t i = 0; i < shared.size(); ++i) {
    const double w = scale * std::exp(logits[i] - lse);
    const auto gt = params.node(hin, shared[i]);
    const double pt = Dot(gp, gt);
    const double qt = Dot(gq, gt);
    auto out_t = MutableNode(grad, hin, shared[i]);
    Axpy(w * qt, gt, out_p);
    Axpy(w * pt, gt, out_q);
    Axpy(w * qt, gp, out_t);
    Axpy(w * pt, gq, out_t);
  }
}

GeneratorParams ZerosLike(const GeneratorParams& params) {
  GeneratorParams z;
  z.paper = Matrix(params.paper.rows(), params.paper.cols());
  z.entity = Matrix(params.entity.rows(), params.entity.cols());
  return z;
}

}  // namespace

std::span<const double> GeneratorParams::node(const HeterogeneousNetwork& hin,
                                              NodeId n) const {
  return hin.is_paper(n) ? paper.row(n) : entity.row(n - hin.num_papers());
}

EmbeddingTable GeneratorParams::ToTable(const HeterogeneousNetwork& hin) const {
  EmbeddingTable table(dim());
  for (NodeId n = 0; n < hin.num_nodes(); ++n) table.Add(hin.node_id(n), node(hin, n));
  return table;
}

GeneratorParams InitGenerator(const EmbeddingTable& table,
                              const HeterogeneousNetwork& hin) {
  GeneratorParams params;
  params.paper = Matrix(0, table.dim());
  params.entity = Matrix(0, table.dim());
  for (NodeId n = 0; n < hin.num_nodes(); ++n) {
    const auto row = table.at(hin.node_id(n));
    (hin.is_paper(n) ? params.paper : params.entity).AppendRow(row);
  }
  return params;
}

double LogAffinity(const GeneratorParams& params, const HeterogeneousNetwork& hin,
                   NodeId p, NodeId q) {
  const auto shared = hin.SharedEntities(p, q);
  return LogSumExp(SharedLogits(params, hin, shared, p, q));
}

double PairProb(const GeneratorParams& params, const HeterogeneousNetwork& hin,
                NodeId p, NodeId anchor) {
  const auto neighborhood = hin.FirstOrderNeighbors(anchor);
  if (neighborhood.empty()) {
    throw std::invalid_argument("anchor paper " + std::to_string(anchor) +
                                " has no first-order neighbors");
  }
  if (!std::binary_search(neighborhood.begin(), neighborhood.end(), p)) {
    throw std::invalid_argument("paper " + std::to_string(p) +
                                " is not a first-order neighbor of " +
                                std::to_string(anchor));
  }
  std::vector<double> logs;
  double target = kNegInf;
  for (NodeId q : neighborhood) {
    logs.push_back(LogAffinity(params, hin, q, anchor));
    if (q == p) target = logs.back();
  }
  return std::exp(target - LogSumExp(logs));
}

void PaperNetwork::AddEdge(size_t p, size_t q, double log_weight) {
  adjacency_[p].push_back({q, log_weight});
  adjacency_[q].push_back({p, log_weight});
  ++num_edges_;
}

void PaperNetwork::SortEdges() {
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Edge& a, const Edge& b) { return a.to < b.to; });
  }
}

PaperNetwork PaperNetwork::Build(const GeneratorParams& params,
                                 const HeterogeneousNetwork& hin) {
  PaperNetwork net;
  net.adjacency_.resize(hin.num_papers());
  for (NodeId p = 0; p < hin.num_papers(); ++p) {
    for (NodeId q : hin.FirstOrderNeighbors(p)) {
      if (q > p) net.AddEdge(p, q, LogAffinity(params, hin, p, q));
    }
  }
  net.SortEdges();
  return net;
}

PaperNetwork PaperNetwork::FromWeights(
    size_t num_nodes, std::span<const std::tuple<size_t, size_t, double>> edges) {
  PaperNetwork net;
  net.adjacency_.resize(num_nodes);
  for (const auto& [p, q, w] : edges) {
    if (p >= num_nodes || q >= num_nodes || p == q || !(w > 0) || !std::isfinite(w)) {
      throw std::invalid_argument("invalid paper network edge");
    }
    if (net.HasEdge(p, q)) throw std::invalid_argument("duplicate paper network edge");
    net.AddEdge(p, q, std::log(w));
  }
  net.SortEdges();
  return net;
}

bool PaperNetwork::HasEdge(size_t p, size_t q) const {
  for (const auto& e : adjacency_[p]) {
    if (e.to == q) return true;
  }
  return false;
}

double PaperNetwork::weight(size_t p, size_t q) const {
  for (const auto& e : adjacency_[p]) {
    if (e.to == q) return std::exp(e.log_weight);
  }
  return 0.0;
}

std::vector<size_t> SpanningTree::Neighbors(size_t p) const {
  std::vector<size_t> out;
  if (!contains(p)) return out;
  if (parent[p] >= 0) out.push_back(static_cast<size_t>(parent[p]));
  out.insert(out.end(), children[p].begin(), children[p].end());
  return out;
}

std::vector<size_t> SpanningTree::PathFromRoot(size_t p) const {
  if (!contains(p)) {
    throw std::invalid_argument("paper " + std::to_string(p) + " is not in the tree");
  }
  std::vector<size_t> path{p};
  while (parent[path.back()] >= 0) path.push_back(static_cast<size_t>(parent[path.back()]));
  std::reverse(path.begin(), path.end());
  return path;
}

SpanningTree BuildSpanningTree(const PaperNetwork& net, size_t root) {
  const size_t n = net.size();
  if (root >= n) throw std::out_of_range("root not in paper network");
  SpanningTree tree;
  tree.root = root;
  tree.parent.assign(n, SpanningTree::kAbsent);
  tree.children.assign(n, {});

  // Prim over log weights (same ordering as the weights themselves).
  std::vector<double> best(n, kNegInf);
  std::vector<std::ptrdiff_t> via(n, -1);
  std::vector<bool> reached(n, false);
  size_t current = root;
  tree.parent[root] = SpanningTree::kNoParent;
  tree.order.push_back(root);
  reached[root] = true;
  while (true) {
    for (const auto& e : net.edges(current)) {
      if (!reached[e.to] && (via[e.to] < 0 || e.log_weight > best[e.to])) {
        best[e.to] = e.log_weight;
        via[e.to] = static_cast<std::ptrdiff_t>(current);
      }
    }
    std::ptrdiff_t next = -1;
    for (size_t v = 0; v < n; ++v) {
      if (reached[v] || via[v] < 0) continue;
      if (next < 0 || best[v] > best[static_cast<size_t>(next)]) {
        next = static_cast<std::ptrdiff_t>(v);
      }
    }
    if (next < 0) break;
    const size_t child = static_cast<size_t>(next);
    reached[child] = true;
    tree.parent[child] = via[child];
    tree.children[static_cast<size_t>(via[child])].push_back(child);
    tree.order.push_back(child);
    current = child;
  }
  return tree;
}

std::vector<double> StepProbabilities(const GeneratorParams& params,
                                      const HeterogeneousNetwork& hin,
                                      const SpanningTree& tree, size_t node) {
  const auto nbrs = tree.Neighbors(node);
  std::vector<double> logs;
  logs.reserve(nbrs.size());
  for (size_t q : nbrs) logs.push_back(LogAffinity(params, hin, node, q));
  const double lse = LogSumExp(logs);
  for (double& x : logs) x = std::exp(x - lse);
  return logs;
}

double GLikelihood(const GeneratorParams& params, const HeterogeneousNetwork& hin,
                   const SpanningTree& tree, size_t p) {
  const auto path = tree.PathFromRoot(p);
  double likelihood = 1.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const auto nbrs = tree.Neighbors(path[i]);
    const auto probs = StepProbabilities(params, hin, tree, path[i]);
    const auto at = std::find(nbrs.begin(), nbrs.end(), path[i + 1]) - nbrs.begin();
    likelihood *= probs[static_cast<size_t>(at)];
  }
  return likelihood;
}

std::vector<size_t> SampleSelection(const GeneratorParams& params,
                                    const HeterogeneousNetwork& hin,
                                    const SpanningTree& tree, Rng& rng) {
  std::vector<size_t> selection;
  std::vector<bool> visited(tree.parent.size(), false);
  size_t current = tree.root;
  visited[current] = true;
  for (size_t step = 0; step < tree.size(); ++step) {
    const auto nbrs = tree.Neighbors(current);
    if (nbrs.empty()) break;
    const auto probs = StepProbabilities(params, hin, tree, current);
    const double u = rng.Uniform();
    double acc = 0.0;
    size_t pick = nbrs.size() - 1;
    for (size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    const size_t next = nbrs[pick];
    if (visited[next]) break;
    visited[next] = true;
    selection.push_back(next);
    current = next;
  }
  return selection;
}

GeneratorParams LogLikelihoodGradient(const GeneratorParams& params,
                                      const HeterogeneousNetwork& hin,
                                      const SpanningTree& tree, size_t p) {
  GeneratorParams grad = ZerosLike(params);
  const auto path = tree.PathFromRoot(p);
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const size_t from = path[i];
    AddLogAffinityGradient(params, hin, from, path[i + 1], 1.0, grad);
    const auto nbrs = tree.Neighbors(from);
    const auto probs = StepProbabilities(params, hin, tree, from);
    for (size_t j = 0; j < nbrs.size(); ++j) {
      AddLogAffinityGradient(params, hin, from, nbrs[j], -probs[j], grad);
    }
  }
  return grad;
}

GeneratorParams UpdateG(const GeneratorParams& params,
                        const HeterogeneousNetwork& hin,
                        std::span<const SpanningTree> trees,
                        std::span<const GeneratorSample> samples, double lr) {
  GeneratorParams next = params;
  if (samples.empty()) return next;
  GeneratorParams grad = ZerosLike(params);
  for (const auto& s : samples) {
    if (s.anchor >= trees.size() || trees[s.anchor].root != s.anchor) {
      throw std::invalid_argument("no spanning tree for anchor " +
                                  std::to_string(s.anchor));
    }
    if (!std::isfinite(s.reward)) throw std::runtime_error("non-finite reward");
    if (s.reward == 0.0) continue;
    const auto& tree = trees[s.anchor];
    const auto path = tree.PathFromRoot(s.paper);
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      const size_t from = path[i];
      AddLogAffinityGradient(params, hin, from, path[i + 1], s.reward, grad);
      const auto nbrs = tree.Neighbors(from);
      const auto probs = StepProbabilities(params, hin, tree, from);
      for (size_t j = 0; j < nbrs.size(); ++j) {
        AddLogAffinityGradient(params, hin, from, nbrs[j], -s.reward * probs[j], grad);
      }
    }
  }
  if (!grad.AllFinite()) throw std::runtime_error("non-finite generator gradient");
  const double scale = -lr / static_cast<double>(samples.size());
  Axpy(scale, grad.paper.data(), next.paper.data());
  Axpy(scale, grad.entity.data(), next.entity.data());
  return next;
}

}  // namespace hinand
