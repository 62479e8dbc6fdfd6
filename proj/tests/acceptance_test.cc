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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hinand/cluster_eval.h"
#include "hinand/discriminator.h"
#include "hinand/generator.h"
#include "hinand/pipeline.h"
#include "hinand/rng.h"
#include "hinand/synthetic.h"
#include "hinand/trainer.h"
#include "nlohmann/json.hpp"

namespace {

namespace fs = std::filesystem;
using namespace hinand;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

// Random block: papers draw 1-3 fields and maybe a venue from small pools.
NameBlock RandomBlock(Rng& rng, size_t papers) {
  NameBlock b;
  b.name_ref = "X";
  const size_t pool = 2 + rng.UniformInt(4);
  for (size_t i = 0; i < papers; ++i) {
    PaperRecord r;
    r.id = "p" + std::to_string(i);
    r.name_ref = "X";
    r.title = "t";
    const size_t count = 1 + rng.UniformInt(3);
    for (size_t j = 0; j < count; ++j) {
      r.fields_of_study.push_back("f" + std::to_string(rng.UniformInt(pool)));
    }
    if (rng.Bernoulli(0.5)) r.venue = "v" + std::to_string(rng.UniformInt(pool));
    b.papers.push_back(r);
  }
  return b;
}

GeneratorParams RandomGenerator(Rng& rng, const HeterogeneousNetwork& hin, size_t k,
                                double scale) {
  GeneratorParams g;
  g.paper = Matrix(hin.num_papers(), k);
  g.entity = Matrix(hin.num_entities(), k);
  for (double& x : g.paper.data()) x = rng.Uniform(-scale, scale);
  for (double& x : g.entity.data()) x = rng.Uniform(-scale, scale);
  return g;
}

// Norm-wise relative error |a - b| / max(|a|, |b|).
double RelativeError(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-300});
}

// Central differences of f over every entry of each span, flattened.
std::vector<double> CentralDifferences(std::vector<std::span<double>> params,
                                       const std::function<double()>& f, double eps) {
  std::vector<double> out;
  for (auto span : params) {
    for (double& x : span) {
      const double saved = x;
      x = saved + eps;
      const double up = f();
      x = saved - eps;
      const double down = f();
      x = saved;
      out.push_back((up - down) / (2 * eps));
    }
  }
  return out;
}

template <typename... Spans>
std::vector<double> Flatten(const Spans&... spans) {
  std::vector<double> out;
  (out.insert(out.end(), spans.begin(), spans.end()), ...);
  return out;
}

Outcome GradientCheck() {
  const auto start = Clock::now();
  constexpr size_t kDim = 8;
  constexpr double kEps = 1e-5;
  Rng rng(101);
  double worst_d = 0.0, worst_g = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 3 + rng.UniformInt(8);  // <= 10 papers
    const auto block = RandomBlock(rng, n);
    const auto hin = HeterogeneousNetwork::Build(block);

    PaperFeatures features;
    features.content = Matrix(n, kDim);
    features.relation = Matrix(n, kDim);
    for (const auto& p : block.papers) features.ids.push_back(p.id);
    for (double& x : features.content.data()) x = rng.Uniform(-1, 1);
    for (double& x : features.relation.data()) x = rng.Uniform(-1, 1);
    auto d = DiscriminatorParams::Init(kDim, 2 * kDim, kDim, 500 + trial);
    for (double& b : d.b0) b = rng.Uniform(-0.3, 0.3);
    for (double& b : d.b1) b = rng.Uniform(-0.3, 0.3);
    std::vector<LabeledPair> batch;
    for (int i = 0; i < 12; ++i) {
      const size_t a = rng.UniformInt(n), b = (a + 1 + rng.UniformInt(n - 1)) % n;
      batch.push_back({a, b, static_cast<int>(rng.UniformInt(2))});
    }
    const auto dg = DiscriminatorGradient(d, batch, features);
    const auto d_numeric = CentralDifferences(
        {d.w0.data(), d.b0, d.w1.data(), d.b1},
        [&] { return DiscriminatorObjective(d, batch, features); }, kEps);
    worst_d = std::max(worst_d, RelativeError(Flatten(dg.w0.data(), dg.b0, dg.w1.data(), dg.b1),
                                              d_numeric));

    // Policy-gradient surrogate sum_s reward_s * log G(p_s | anchor_s) with the
    // trees held fixed, against the analytic per-path gradients.
    GeneratorParams g = RandomGenerator(rng, hin, kDim, 0.4);
    const auto net = PaperNetwork::Build(g, hin);
    std::vector<SpanningTree> trees;
    for (size_t a = 0; a < n; ++a) trees.push_back(BuildSpanningTree(net, a));
    std::vector<GeneratorSample> samples;
    for (size_t a = 0; a < n; ++a) {
      for (size_t p : SampleSelection(g, hin, trees[a], rng)) {
        samples.push_back({p, a, std::log(1.0 - rng.Uniform(0.05, 0.95))});
      }
    }
    if (samples.empty()) {
      --trial;  // no shared entities at all; draw again
      continue;
    }
    GeneratorParams analytic = g;
    for (double& x : analytic.paper.data()) x = 0.0;
    for (double& x : analytic.entity.data()) x = 0.0;
    for (const auto& s : samples) {
      const auto grad = LogLikelihoodGradient(g, hin, trees[s.anchor], s.paper);
      Axpy(s.reward, grad.paper.data(), analytic.paper.data());
      Axpy(s.reward, grad.entity.data(), analytic.entity.data());
    }
    const auto g_numeric = CentralDifferences(
        {g.paper.data(), g.entity.data()},
        [&] {
          double total = 0.0;
          for (const auto& s : samples) {
            total += s.reward * std::log(GLikelihood(g, hin, trees[s.anchor], s.paper));
          }
          return total;
        },
        kEps);
    worst_g = std::max(
        worst_g, RelativeError(Flatten(analytic.paper.data(), analytic.entity.data()), g_numeric));

    // The update applied by training is g - lr * mean(reward * grad log G).
    const double lr = 0.1;
    const auto next = UpdateG(g, hin, trees, samples, lr);
    std::vector<double> step, expected;
    for (size_t i = 0; i < g.paper.data().size(); ++i) {
      step.push_back(next.paper.data()[i] - g.paper.data()[i]);
      expected.push_back(-lr * analytic.paper.data()[i] / static_cast<double>(samples.size()));
    }
    worst_g = std::max(worst_g, RelativeError(step, expected));
  }
  const double secs = Seconds(start);
  return {worst_d < 1e-4 && worst_g < 1e-4 && secs < 5.0,
          Format("worst relative error D %.2e, G %.2e (< 1e-4); %.2fs (< 5s)", worst_d,
                 worst_g, secs)};
}

Outcome PairProbNormalization() {
  Rng rng(202);
  double worst = 0.0;
  size_t anchors = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    const auto hin = HeterogeneousNetwork::Build(RandomBlock(rng, 2 + rng.UniformInt(9)));
    const auto g = RandomGenerator(rng, hin, 1 + rng.UniformInt(8), rng.Uniform(0.1, 1.5));
    for (NodeId a = 0; a < hin.num_papers(); ++a) {
      const auto nbrs = hin.FirstOrderNeighbors(a);
      if (nbrs.empty()) continue;
      double sum = 0.0;
      for (NodeId p : nbrs) sum += PairProb(g, hin, p, a);
      worst = std::max(worst, std::abs(sum - 1.0));
      ++anchors;
    }
  }
  return {worst <= 1e-9 && anchors > 0,
          Format("max |sum - 1| = %.2e over %zu anchors (<= 1e-9)", worst, anchors)};
}

// Sums weights in sorted order so equal multisets give identical doubles.
double CanonicalSum(std::vector<double> w) {
  std::sort(w.begin(), w.end());
  double s = 0.0;
  for (double x : w) s += x;
  return s;
}

Outcome SpanningTreeOptimality() {
  Rng rng(303);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 2 + rng.UniformInt(6);  // <= 7 nodes
    const bool integral = trial % 2 == 1;    // integer weights force ties
    std::vector<std::tuple<size_t, size_t, double>> edges;
    for (size_t a = 0; a < n; ++a) {
      for (size_t b = a + 1; b < n; ++b) {
        if (rng.Bernoulli(0.6)) {
          edges.emplace_back(a, b, integral ? 1.0 + static_cast<double>(rng.UniformInt(3))
                                            : rng.Uniform(0.01, 10.0));
        }
      }
    }
    const auto net = PaperNetwork::FromWeights(n, edges);
    const size_t root = rng.UniformInt(n);
    const auto tree = BuildSpanningTree(net, root);

    // Input weights, not net.weight(): the network stores logs.
    std::map<std::pair<size_t, size_t>, double> input_weight;
    for (const auto& [a, b, w] : edges) input_weight[{a, b}] = w;
    std::vector<double> tree_weights;
    for (size_t v : tree.order) {
      if (tree.parent[v] >= 0) {
        const auto u = static_cast<size_t>(tree.parent[v]);
        tree_weights.push_back(input_weight.at({std::min(u, v), std::max(u, v)}));
      }
    }
    // Exhaustive: every (c - 1)-subset of the component's edges that connects it.
    std::vector<std::tuple<size_t, size_t, double>> comp_edges;
    for (const auto& [a, b, w] : edges) {
      if (tree.contains(a) && tree.contains(b)) comp_edges.emplace_back(a, b, w);
    }
    const size_t c = tree.size();
    double best = c == 1 ? 0.0 : -std::numeric_limits<double>::infinity();
    const size_t m = comp_edges.size();
    for (uint32_t mask = 0; mask < (1u << m); ++mask) {
      if (static_cast<size_t>(std::popcount(mask)) != c - 1 || c == 1) continue;
      std::vector<size_t> parent(n);
      for (size_t i = 0; i < n; ++i) parent[i] = i;
      std::function<size_t(size_t)> find = [&](size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
      };
      bool acyclic = true;
      std::vector<double> w;
      for (size_t e = 0; e < m && acyclic; ++e) {
        if (!((mask >> e) & 1)) continue;
        const auto& [a, b, weight] = comp_edges[e];
        const size_t ra = find(a), rb = find(b);
        if (ra == rb) acyclic = false;
        parent[ra] = rb;
        w.push_back(weight);
      }
      if (acyclic) best = std::max(best, CanonicalSum(w));
    }
    if (CanonicalSum(tree_weights) != best) ++mismatches;
  }
  return {mismatches == 0, Format("%d of 200 trees below the exhaustive maximum", mismatches)};
}

Outcome WalkLikelihoodConsistency() {
  const auto start = Clock::now();
  Rng rng(404);
  double worst = 0.0;
  int trees_checked = 0;
  size_t nodes_checked = 0;
  while (trees_checked < 10) {
    const auto hin = HeterogeneousNetwork::Build(RandomBlock(rng, 3 + rng.UniformInt(6)));
    const auto g = RandomGenerator(rng, hin, 4, 0.8);
    const auto tree = BuildSpanningTree(PaperNetwork::Build(g, hin), 0);
    if (tree.size() < 3) continue;  // <= 8 nodes by construction
    ++trees_checked;
    std::vector<int> hits(tree.parent.size(), 0);
    constexpr int kWalks = 100000;
    for (int w = 0; w < kWalks; ++w) {
      for (size_t v : SampleSelection(g, hin, tree, rng)) ++hits[v];
    }
    for (size_t v : tree.order) {
      if (v == tree.root) continue;
      const double freq = hits[v] / static_cast<double>(kWalks);
      worst = std::max(worst, std::abs(freq - GLikelihood(g, hin, tree, v)));
      ++nodes_checked;
    }
  }
  const double secs = Seconds(start);
  return {worst <= 0.01 && secs < 30.0,
          Format("max |freq - likelihood| = %.4f over %zu nodes in %d trees (<= 0.01); "
                 "%.2fs (< 30s)",
                 worst, nodes_checked, trees_checked, secs)};
}

Outcome MetricOracle() {
  // Worked example first.
  ClusteringResult pred;
  pred.clusters = {{"1", "2", "3"}};
  pred.k = 1;
  const auto ex = PairwisePrf(pred, {{"1", "a"}, {"2", "a"}, {"3", "b"}});
  const bool example = ex.precision == 1.0 / 3.0 && ex.recall == 1.0 && ex.f1 == 0.5;

  Rng rng(505);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 1 + rng.UniformInt(30);
    const size_t kp = 1 + rng.UniformInt(n), kt = 1 + rng.UniformInt(n);
    std::vector<size_t> p(n), t(n);
    TruthLabels truth;
    std::vector<std::vector<std::string>> clusters(kp);
    for (size_t i = 0; i < n; ++i) {
      p[i] = rng.UniformInt(kp);
      t[i] = rng.UniformInt(kt);
      const std::string id = "x" + std::to_string(i);
      truth[id] = std::to_string(t[i]);
      clusters[p[i]].push_back(id);
    }
    std::erase_if(clusters, [](const auto& c) { return c.empty(); });
    uint64_t both = 0, same_p = 0, same_t = 0;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        same_p += p[i] == p[j];
        same_t += t[i] == t[j];
        both += p[i] == p[j] && t[i] == t[j];
      }
    }
    const double prec = same_p ? static_cast<double>(both) / static_cast<double>(same_p) : 0.0;
    const double rec = same_t ? static_cast<double>(both) / static_cast<double>(same_t) : 0.0;
    const double f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
    ClusteringResult r;
    r.k = clusters.size();
    r.clusters = clusters;
    const auto m = PairwisePrf(r, truth);
    if (m.precision != prec || m.recall != rec || m.f1 != f1) ++mismatches;
  }
  return {example && mismatches == 0,
          Format("worked example P=%.4f R=%.4f F1=%.4f; %d of 500 partitions differ from "
                 "enumeration",
                 ex.precision, ex.recall, ex.f1, mismatches)};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double ReportF1(const fs::path& out) {
  return nlohmann::json::parse(Slurp(out / "report.json")).at("macro").at("f1").get<double>();
}

double ClusterF1(PipelineConfig config, Representation r) {
  config.cluster.representation = r;
  RunCluster(config);
  RunEvaluate(config);
  return ReportF1(config.output);
}

struct SyntheticRun {
  PipelineConfig config;
  std::string final_report;
  double seconds = 0.0;
  bool ok = false;
};

SyntheticRun RunOnPlantedBlock(const fs::path& work, const std::string& name) {
  SyntheticRun run;
  const auto corpus = GenerateSynthetic(SyntheticSpec{});  // 5 x 20, 0.8 / 0.05
  fs::create_directories(work);
  {
    std::ofstream records(work / "corpus.jsonl", std::ios::binary);
    WriteRecords(records, corpus.records);
    std::ofstream truth(work / "truth.jsonl", std::ios::binary);
    WriteTruth(truth, corpus.truth);
  }
  run.config.input = (work / "corpus.jsonl").string();
  run.config.truth = (work / "truth.jsonl").string();
  run.config.output = (work / name).string();
  const auto start = Clock::now();
  std::ostringstream err;
  run.ok = RunPipeline(run.config, err) == 0;
  run.seconds = Seconds(start);
  if (!run.ok) std::fprintf(stderr, "%s", err.str().c_str());
  run.final_report = Slurp(fs::path(run.config.output) / "report.json");
  return run;
}

double PseudoPrecision(const SampleStore& store, const PaperFeatures& features,
                       const TruthLabels& truth) {
  if (store.pseudo().empty()) return 0.0;
  size_t same = 0;
  for (const auto& p : store.pseudo()) {
    same += truth.at(features.ids[p.paper]) == truth.at(features.ids[p.anchor]);
  }
  return static_cast<double>(same) / static_cast<double>(store.pseudo().size());
}

// Replays the pipeline's training of the single block with an observer.
Outcome SelfTraining(const SyntheticRun& run) {
  const fs::path dir = fs::path(run.config.output) / "blocks/0000";
  auto records = [&] {
    std::ifstream in(dir / "records.jsonl");
    return ParseRecords(in);
  }();
  NameBlock block;
  block.name_ref = records.front().name_ref;
  block.papers = std::move(records);
  const auto truth = LoadTruth(dir / "truth.jsonl");
  const auto content = EmbeddingTable::ReadFile(dir / "content.emb");
  const auto relation = EmbeddingTable::ReadFile(dir / "relation.emb");
  const auto hin = HeterogeneousNetwork::Build(block);
  const auto features = GatherFeatures(block, content, relation);
  TrainConfig tc = run.config.train;
  tc.seed = DeriveSeed(BlockSeed(run.config.seed, block.name_ref), kTrainSalt);
  std::vector<double> precision;
  const auto result = AdversarialTrain(
      hin, features, InitGenerator(relation, hin), tc,
      [&](const IterationLog&, const SampleStore& store) {
        precision.push_back(PseudoPrecision(store, features, truth));
      });
  const bool same_run =
      result.discriminator == DiscriminatorParams::ReadFile(dir / "discriminator.ckpt");
  if (precision.empty() || !same_run) {
    return {false, same_run ? "no iterations ran" : "replay diverged from the pipeline run"};
  }
  const double lowest = *std::min_element(precision.begin(), precision.end());
  return {precision.back() >= precision.front(),
          Format("pseudo precision %.4f after iteration 1, %.4f after iteration %zu "
                 "(final >= first; lowest %.4f)",
                 precision.front(), precision.back(), precision.size(), lowest)};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "hinand_acceptance";
  fs::remove_all(work);
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("[%d] %-28s %s  %s\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };

  report(1, "gradient-check", GradientCheck());
  report(2, "pair-prob-normalization", PairProbNormalization());
  report(3, "spanning-tree-optimality", SpanningTreeOptimality());
  report(4, "walk-likelihood", WalkLikelihoodConsistency());
  report(5, "pairwise-metric-oracle", MetricOracle());

  const SyntheticRun run = RunOnPlantedBlock(work, "run1");
  if (!run.ok) {
    report(6, "synthetic-trend", {false, "pipeline failed"});
    report(7, "self-training", {false, "pipeline failed"});
    report(8, "determinism", {false, "pipeline failed"});
    return 1;
  }
  const double final_f1 = ReportF1(run.config.output);
  const double content_f1 = ClusterF1(run.config, Representation::kContent);
  const double relation_f1 = ClusterF1(run.config, Representation::kRelation);
  report(6, "synthetic-trend",
         {final_f1 >= 0.90 && final_f1 >= content_f1 + 0.05 &&
              final_f1 >= relation_f1 + 0.05 && run.seconds < 300.0,
          Format("final F1 %.4f (>= 0.90), content %.4f, relation %.4f (final must lead "
                 "both by >= 0.05); run %.1fs (< 300s)",
                 final_f1, content_f1, relation_f1, run.seconds)});
  report(7, "self-training", SelfTraining(run));

  const SyntheticRun again = RunOnPlantedBlock(work, "run2");
  report(8, "determinism",
         {again.ok && again.final_report == run.final_report,
          again.final_report == run.final_report ? "report.json byte-identical across runs"
                                                 : "report.json differs between runs"});

  fs::remove_all(work);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
