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

#include "hinand/relation_embed.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "hinand/rng.h"
#include "hinand/sgns.h"

namespace hinand {

void WalkConfig::Validate() const {
  if (walks_per_node < 1 || walk_length < 2 || window < 1 || negatives < 1 ||
      epochs < 1 || dim < 1 || threads < 1 || !(return_param > 0) ||
      !(inout_param > 0) || !(learning_rate > 0)) {
    throw std::invalid_argument(
        "walk config: counts and rates must be positive and walk_length >= 2");
  }
}

Walk SimulateWalk(const HeterogeneousNetwork& hin, NodeId start, int length,
                  double return_param, double inout_param, Rng& rng) {
  Walk walk{start};
  std::vector<double> weights;
  while (walk.size() < static_cast<size_t>(length)) {
    const NodeId cur = walk.back();
    const auto nbrs = hin.neighbors(cur);
    if (nbrs.empty()) break;
    if (walk.size() == 1) {
      walk.push_back(nbrs[rng.UniformInt(nbrs.size())]);
      continue;
    }
    const NodeId prev = walk[walk.size() - 2];
    weights.resize(nbrs.size());
    double total = 0.0;
    for (size_t i = 0; i < nbrs.size(); ++i) {
      const NodeId x = nbrs[i];
      double w;
      if (x == prev) {
        w = 1.0 / return_param;
      } else if (hin.Adjacent(prev, x)) {
        w = 1.0;
      } else {
        w = 1.0 / inout_param;
      }
      total += w;
      weights[i] = total;
    }
    const double u = rng.Uniform() * total;
    size_t pick = static_cast<size_t>(
        std::upper_bound(weights.begin(), weights.end(), u) - weights.begin());
    walk.push_back(nbrs[std::min(pick, nbrs.size() - 1)]);
  }
  return walk;
}

std::vector<Walk> GenerateWalks(const HeterogeneousNetwork& hin,
                                const WalkConfig& config) {
  config.Validate();
  const size_t n = hin.num_nodes();
  const size_t rounds = static_cast<size_t>(config.walks_per_node);
  std::vector<Walk> walks(rounds * n);
  auto fill = [&](size_t begin, size_t end) {
    for (size_t w = begin; w < end; ++w) {
      const size_t round = w / n;
      const NodeId node = w % n;
      Rng rng(DeriveSeed(DeriveSeed(config.seed, round), node));
      walks[w] = SimulateWalk(hin, node, config.walk_length, config.return_param,
                              config.inout_param, rng);
    }
  };
  const size_t workers =
      std::min<size_t>(static_cast<size_t>(config.threads), std::max<size_t>(walks.size(), 1));
  if (workers <= 1) {
    fill(0, walks.size());
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (walks.size() + workers - 1) / workers;
    for (size_t t = 0; t < workers; ++t) {
      const size_t begin = std::min(walks.size(), t * chunk);
      const size_t end = std::min(walks.size(), begin + chunk);
      pool.emplace_back(fill, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return walks;
}

EmbeddingTable TrainRelation(const HeterogeneousNetwork& hin,
                             const std::vector<Walk>& walks,
                             const WalkConfig& config, TrainStats* stats) {
  config.Validate();
  if (walks.empty()) throw std::invalid_argument("no walks to train on");
  const size_t k = static_cast<size_t>(config.dim);
  const size_t n = hin.num_nodes();

  std::vector<uint64_t> freq(n, 0);
  uint64_t steps_per_epoch = 0;
  for (const auto& walk : walks) {
    for (NodeId v : walk) ++freq[v];
    const int64_t len = static_cast<int64_t>(walk.size());
    for (int64_t pos = 0; pos < len; ++pos) {
      steps_per_epoch += static_cast<uint64_t>(
          std::min<int64_t>(len - 1, pos + config.window) -
          std::max<int64_t>(0, pos - config.window));
    }
  }

  Rng init_rng(DeriveSeed(config.seed, 0));
  Matrix input(n, k);
  for (double& x : input.data()) x = (init_rng.Uniform() - 0.5) / static_cast<double>(k);
  Matrix output(n, k);

  if (stats) stats->epoch_loss.clear();
  // Only nodes that appear in walks can be drawn as negatives.
  if (steps_per_epoch > 0) {
    const NegativeSampler sampler(freq);
    const uint64_t total_steps = steps_per_epoch * static_cast<uint64_t>(config.epochs);
    uint64_t done = 0;
    std::vector<size_t> order(walks.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(DeriveSeed(config.seed, 1));

    // `progress` advances by `stride` per step so that concurrent workers
    // jointly follow the single-threaded learning-rate schedule.
    auto train_walk = [&](const Walk& walk, Rng& r, double& loss_sum,
                          uint64_t& count, uint64_t& progress, uint64_t stride) {
      std::vector<size_t> negs(static_cast<size_t>(config.negatives));
      std::vector<double> scratch(k);
      const int64_t len = static_cast<int64_t>(walk.size());
      for (int64_t pos = 0; pos < len; ++pos) {
        const int64_t lo = std::max<int64_t>(0, pos - config.window);
        const int64_t hi = std::min<int64_t>(len - 1, pos + config.window);
        for (int64_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const double frac = static_cast<double>(progress) /
                              static_cast<double>(total_steps);
          progress += stride;
          const double lr = config.learning_rate * std::max(1e-4, 1.0 - frac);
          for (auto& neg : negs) neg = sampler.Sample(r);
          loss_sum += SgnsStep(input.row(walk[static_cast<size_t>(pos)]), output,
                               walk[static_cast<size_t>(c)], negs, lr, scratch);
          ++count;
        }
      }
    };

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      rng.Shuffle(order.begin(), order.end());
      double loss_sum = 0.0;
      uint64_t count = 0;
      const size_t workers =
          std::min<size_t>(static_cast<size_t>(config.threads), order.size());
      if (workers <= 1) {
        for (size_t w : order) train_walk(walks[w], rng, loss_sum, count, done, 1);
      } else {
        // Hogwild: workers share the tables without synchronization.
        std::vector<double> sums(workers, 0.0);
        std::vector<uint64_t> counts(workers, 0);
        std::vector<std::thread> pool;
        const size_t chunk = (order.size() + workers - 1) / workers;
        for (size_t t = 0; t < workers; ++t) {
          pool.emplace_back([&, t] {
            Rng r(DeriveSeed(config.seed,
                             100 + static_cast<uint64_t>(epoch) * workers + t));
            const size_t begin = std::min(order.size(), t * chunk);
            const size_t end = std::min(order.size(), begin + chunk);
            uint64_t progress = done + t;
            for (size_t i = begin; i < end; ++i) {
              train_walk(walks[order[i]], r, sums[t], counts[t], progress, workers);
            }
          });
        }
        for (auto& t : pool) t.join();
        for (size_t t = 0; t < workers; ++t) {
          loss_sum += sums[t];
          count += counts[t];
        }
        done += count;
      }
      const double mean = count ? loss_sum / static_cast<double>(count) : 0.0;
      if (!std::isfinite(mean) || !input.AllFinite()) {
        throw std::runtime_error("relation training diverged in epoch " +
                                 std::to_string(epoch + 1));
      }
      if (stats) stats->epoch_loss.push_back(mean);
    }
  }

  EmbeddingTable table(k);
  for (NodeId v = 0; v < n; ++v) table.Add(hin.node_id(v), input.row(v));
  return table;
}

}  // namespace hinand
