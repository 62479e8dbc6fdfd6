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

#include "hinand/content_embed.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "hinand/rng.h"
#include "hinand/sgns.h"

namespace hinand {
namespace {

bool IsWordByte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

}  // namespace

std::vector<std::string> TokenizeText(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (IsWordByte(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> Tokenize(const PaperRecord& record) {
  auto tokens = TokenizeText(record.title);
  if (record.abstract) {
    auto more = TokenizeText(*record.abstract);
    tokens.insert(tokens.end(), std::make_move_iterator(more.begin()),
                  std::make_move_iterator(more.end()));
  }
  return tokens;
}

Vocabulary Vocabulary::Build(std::span<const std::vector<std::string>> sequences,
                             int min_count) {
  std::map<std::string, uint64_t> counts;
  for (const auto& seq : sequences) {
    for (const auto& t : seq) ++counts[t];
  }
  std::vector<std::pair<std::string, uint64_t>> kept;
  for (auto& [token, count] : counts) {
    if (count >= static_cast<uint64_t>(std::max(min_count, 1))) {
      kept.emplace_back(token, count);
    }
  }
  if (kept.empty()) throw std::invalid_argument("empty vocabulary");
  // std::map iteration is already token-ordered, so a stable sort on count
  // leaves ties in lexicographic order.
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  Vocabulary vocab;
  vocab.min_count_ = min_count;
  for (auto& [token, count] : kept) {
    vocab.index_.emplace(token, vocab.tokens_.size());
    vocab.tokens_.push_back(std::move(token));
    vocab.counts_.push_back(count);
  }
  return vocab;
}

std::optional<size_t> Vocabulary::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void ContentConfig::Validate() const {
  if (dim < 1 || window < 1 || epochs < 1 || negatives < 1 || min_count < 1 ||
      threads < 1 || !(learning_rate > 0)) {
    throw std::invalid_argument(
        "content config: dim, window, epochs, negatives, min_count and threads "
        "must be >= 1 and learning_rate > 0");
  }
}

EmbeddingTable TrainContent(std::span<const std::string> paper_ids,
                            std::span<const std::vector<std::string>> sequences,
                            const Vocabulary& vocab, const ContentConfig& config,
                            TrainStats* stats) {
  config.Validate();
  if (paper_ids.size() != sequences.size()) {
    throw std::invalid_argument("one token sequence per paper is required");
  }
  const size_t k = static_cast<size_t>(config.dim);
  const size_t n = paper_ids.size();

  // Map tokens to vocabulary indices once; out-of-vocabulary tokens vanish.
  std::vector<std::vector<size_t>> docs(n);
  uint64_t steps_per_epoch = 0;
  for (size_t i = 0; i < n; ++i) {
    for (const auto& t : sequences[i]) {
      if (auto idx = vocab.Find(t)) docs[i].push_back(*idx);
    }
    const int64_t len = static_cast<int64_t>(docs[i].size());
    for (int64_t pos = 0; pos < len; ++pos) {
      steps_per_epoch += static_cast<uint64_t>(
          std::min<int64_t>(len - 1, pos + config.window) -
          std::max<int64_t>(0, pos - config.window) + 1);
    }
  }

  Rng init_rng(DeriveSeed(config.seed, 0));
  Matrix paper(n, k);
  for (size_t i = 0; i < n; ++i) {
    if (docs[i].empty()) continue;
    for (double& x : paper.row(i)) x = (init_rng.Uniform() - 0.5) / static_cast<double>(k);
  }
  Matrix words(vocab.size(), k);
  const NegativeSampler sampler(vocab.counts());

  const uint64_t total_steps = steps_per_epoch * static_cast<uint64_t>(config.epochs);
  std::atomic<uint64_t> done{0};
  if (stats) stats->epoch_loss.clear();

  auto run_shard = [&](std::span<const size_t> order, Rng& rng, double& loss_sum,
                       uint64_t& loss_count) {
    std::vector<size_t> negs(static_cast<size_t>(config.negatives));
    std::vector<double> scratch(k);
    for (size_t doc : order) {
      const auto& tokens = docs[doc];
      const int64_t len = static_cast<int64_t>(tokens.size());
      for (int64_t pos = 0; pos < len; ++pos) {
        const int64_t lo = std::max<int64_t>(0, pos - config.window);
        const int64_t hi = std::min<int64_t>(len - 1, pos + config.window);
        for (int64_t c = lo; c <= hi; ++c) {
          const double progress =
              static_cast<double>(done.fetch_add(1, std::memory_order_relaxed)) /
              static_cast<double>(std::max<uint64_t>(total_steps, 1));
          const double lr =
              config.learning_rate * std::max(1e-4, 1.0 - progress);
          for (auto& neg : negs) neg = sampler.Sample(rng);
          loss_sum += SgnsStep(paper.row(doc), words, tokens[static_cast<size_t>(c)],
                               negs, lr, scratch);
          ++loss_count;
        }
      }
    }
  };

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng order_rng(DeriveSeed(config.seed, 1));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    order_rng.Shuffle(order.begin(), order.end());
    double loss_sum = 0.0;
    uint64_t loss_count = 0;
    const size_t workers = std::min<size_t>(static_cast<size_t>(config.threads),
                                            std::max<size_t>(n, 1));
    if (workers <= 1) {
      Rng rng(DeriveSeed(config.seed, 1000 + static_cast<uint64_t>(epoch)));
      run_shard(order, rng, loss_sum, loss_count);
    } else {
      // Hogwild: shards write shared rows without synchronization.
      std::vector<double> sums(workers, 0.0);
      std::vector<uint64_t> counts(workers, 0);
      std::vector<std::thread> pool;
      const size_t chunk = (n + workers - 1) / workers;
      for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          const size_t begin = std::min(n, w * chunk);
          const size_t end = std::min(n, begin + chunk);
          Rng rng(DeriveSeed(config.seed,
                             1000 + static_cast<uint64_t>(epoch) * workers + w));
          run_shard(std::span<const size_t>(order).subspan(begin, end - begin),
                    rng, sums[w], counts[w]);
        });
      }
      for (auto& t : pool) t.join();
      for (size_t w = 0; w < workers; ++w) {
        loss_sum += sums[w];
        loss_count += counts[w];
      }
    }
    const double mean = loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0;
    if (!std::isfinite(mean) || !paper.AllFinite()) {
      throw std::runtime_error("content training diverged in epoch " +
                               std::to_string(epoch + 1) + " (loss " +
                               std::to_string(mean) + "); lower the learning rate");
    }
    if (stats) stats->epoch_loss.push_back(mean);
  }

  EmbeddingTable table(k);
  for (size_t i = 0; i < n; ++i) table.Add(paper_ids[i], paper.row(i));
  return table;
}

}  // namespace hinand
