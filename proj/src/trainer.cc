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

#include "hinand/trainer.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hinand/embedding_table.h"
#include "hinand/rng.h"

namespace hinand {

void TrainConfig::Validate() const {
  if (max_outer_iters < 0 || g_steps < 1 || d_steps < 1 || top_k < 1 ||
      batch_size < 1 || convergence_window < 1 || hidden_dim < 0 ||
      output_dim < 0 || !(lr_g > 0) || !(lr_d > 0) || !(convergence_tol > 0)) {
    throw std::invalid_argument("train config: all counts and rates must be positive");
  }
}

uint64_t SampleStore::Key(size_t a, size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b);
}

bool SampleStore::IsPseudo(size_t a, size_t b) const {
  return std::binary_search(pseudo_keys_.begin(), pseudo_keys_.end(), Key(a, b));
}

void SampleStore::SetPseudo(std::span<const LabeledPair> pairs) {
  pseudo_.clear();
  pseudo_keys_.clear();
  for (const auto& p : pairs) {
    if (p.paper == p.anchor) continue;
    const uint64_t key = Key(p.paper, p.anchor);
    auto it = std::lower_bound(pseudo_keys_.begin(), pseudo_keys_.end(), key);
    if (it != pseudo_keys_.end() && *it == key) continue;
    pseudo_keys_.insert(it, key);
    pseudo_.push_back({p.paper, p.anchor, 1});
  }
  std::vector<LabeledPair> kept;
  generated_keys_.clear();
  for (const auto& g : generated_) {
    if (IsPseudo(g.paper, g.anchor)) continue;
    kept.push_back(g);
    generated_keys_.push_back(Key(g.paper, g.anchor));
  }
  std::sort(generated_keys_.begin(), generated_keys_.end());
  generated_ = std::move(kept);
}

bool SampleStore::AddGenerated(size_t paper, size_t anchor) {
  if (paper == anchor || IsPseudo(paper, anchor)) return false;
  const uint64_t key = Key(paper, anchor);
  auto it = std::lower_bound(generated_keys_.begin(), generated_keys_.end(), key);
  if (it != generated_keys_.end() && *it == key) return false;
  generated_keys_.insert(it, key);
  generated_.push_back({paper, anchor, 0});
  return true;
}

void SampleStore::ClearGenerated() {
  generated_.clear();
  generated_keys_.clear();
}

double ClampedScore(double score) {
  return std::clamp(score, kScoreClamp, 1.0 - kScoreClamp);
}

double ValueFunction(const DiscriminatorParams& params, const SampleStore& store,
                     const PaperFeatures& features) {
  if (store.empty()) throw std::invalid_argument("value function of an empty store");
  const Matrix d = EmbedAll(params, features);
  double value = 0.0;
  for (const auto& p : store.pseudo()) {
    value += std::log(ClampedScore(Score(d.row(p.paper), d.row(p.anchor))));
  }
  for (const auto& p : store.generated()) {
    value += std::log(1.0 - ClampedScore(Score(d.row(p.paper), d.row(p.anchor))));
  }
  return value;
}

std::string IterationLogJson(const IterationLog& log) {
  std::ostringstream out;
  out << "{\"iteration\":" << log.iteration << ",\"value\":" << FormatDouble(log.value)
      << ",\"pseudo_size\":" << log.pseudo_size
      << ",\"generated_size\":" << log.generated_size
      << ",\"mean_d_pseudo\":" << FormatDouble(log.mean_d_pseudo)
      << ",\"mean_d_generated\":" << FormatDouble(log.mean_d_generated) << "}";
  return out.str();
}

namespace {

double MeanScore(const Matrix& d, std::span<const LabeledPair> pairs) {
  if (pairs.empty()) return 0.0;
  double s = 0.0;
  for (const auto& p : pairs) s += Score(d.row(p.paper), d.row(p.anchor));
  return s / static_cast<double>(pairs.size());
}

std::vector<LabeledPair> BalancedBatch(const SampleStore& store, size_t batch_size,
                                       Rng& rng) {
  std::vector<LabeledPair> batch;
  const auto& pos = store.pseudo();
  const auto& neg = store.generated();
  if (pos.empty() && neg.empty()) return batch;
  size_t from_pos = pos.empty() ? 0 : (neg.empty() ? batch_size : (batch_size + 1) / 2);
  size_t from_neg = batch_size - from_pos;
  if (neg.empty()) from_neg = 0;
  for (size_t i = 0; i < from_pos; ++i) batch.push_back(pos[rng.UniformInt(pos.size())]);
  for (size_t i = 0; i < from_neg; ++i) batch.push_back(neg[rng.UniformInt(neg.size())]);
  return batch;
}

}  // namespace

TrainResult AdversarialTrain(const HeterogeneousNetwork& hin,
                             const PaperFeatures& features,
                             const GeneratorParams& initial_generator,
                             const TrainConfig& config,
                             const IterationObserver& observer) {
  config.Validate();
  const size_t n = features.size();
  if (hin.num_papers() != n || initial_generator.paper.rows() != n) {
    throw std::invalid_argument("network, features and generator cover different papers");
  }
  const size_t k = features.content.cols();
  const size_t hidden = config.hidden_dim > 0 ? static_cast<size_t>(config.hidden_dim) : 2 * k;
  const size_t out = config.output_dim > 0 ? static_cast<size_t>(config.output_dim) : k;

  TrainResult result;
  result.discriminator = DiscriminatorParams::Init(k, hidden, out, DeriveSeed(config.seed, 1));
  result.generator = initial_generator;
  if (n < 2) {
    result.warnings.push_back("block has a single paper; training skipped");
    return result;
  }

  Rng rng(DeriveSeed(config.seed, 2));
  auto& D = result.discriminator;
  auto& G = result.generator;
  auto& store = result.store;
  std::vector<double> values;

  for (int iter = 1; iter <= config.max_outer_iters; ++iter) {
    const PaperNetwork net = PaperNetwork::Build(G, hin);
    store.ClearGenerated();
    if (net.num_edges() > 0) {
      std::vector<SpanningTree> trees;
      trees.reserve(n);
      for (size_t a = 0; a < n; ++a) trees.push_back(BuildSpanningTree(net, a));
      const Matrix d = EmbedAll(D, features);
      for (int step = 0; step < config.g_steps; ++step) {
        std::vector<GeneratorSample> samples;
        for (size_t a = 0; a < n; ++a) {
          for (size_t p : SampleSelection(G, hin, trees[a], rng)) {
            store.AddGenerated(p, a);
            const double reward =
                std::log(1.0 - ClampedScore(Score(d.row(p), d.row(a))));
            samples.push_back({p, a, reward});
          }
        }
        G = UpdateG(G, hin, trees, samples, config.lr_g);
      }
    } else if (iter == 1) {
      result.warnings.push_back(
          "no two papers share an entity; generator steps skipped");
    }

    const auto pseudo =
        SelectPseudoPositives(D, features, static_cast<size_t>(config.top_k));
    store.SetPseudo(pseudo);

    for (int step = 0; step < config.d_steps; ++step) {
      const auto batch =
          BalancedBatch(store, static_cast<size_t>(config.batch_size), rng);
      if (batch.empty()) break;
      D = UpdateD(D, batch, features, config.lr_d / static_cast<double>(batch.size()));
    }

    IterationLog entry;
    entry.iteration = iter;
    entry.value = ValueFunction(D, store, features);
    entry.pseudo_size = store.pseudo().size();
    entry.generated_size = store.generated().size();
    const Matrix d = EmbedAll(D, features);
    entry.mean_d_pseudo = MeanScore(d, store.pseudo());
    entry.mean_d_generated = MeanScore(d, store.generated());
    result.log.push_back(entry);
    if (observer) observer(entry, store);

    values.push_back(entry.value);
    const size_t w = static_cast<size_t>(config.convergence_window);
    if (values.size() > w) {
      double mean_delta = 0.0;
      for (size_t i = values.size() - w; i < values.size(); ++i) {
        mean_delta += std::abs(values[i] - values[i - 1]);
      }
      mean_delta /= static_cast<double>(w);
      if (mean_delta < config.convergence_tol) {
        result.converged = true;
        break;
      }
    }
  }
  return result;
}

}  // namespace hinand
