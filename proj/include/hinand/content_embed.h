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

#ifndef HINAND_CONTENT_EMBED_H_
#define HINAND_CONTENT_EMBED_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hinand/corpus.h"
#include "hinand/embedding_table.h"

namespace hinand {

// Lowercased runs of ASCII alphanumerics (bytes >= 0x80 count as word
// characters so UTF-8 words stay intact). Title first, then abstract.
std::vector<std::string> TokenizeText(std::string_view text);
std::vector<std::string> Tokenize(const PaperRecord& record);

class Vocabulary {
 public:
  // Drops tokens seen fewer than min_count times. Indices are assigned by
  // descending frequency, ties broken by token. Throws std::invalid_argument
  // ("empty vocabulary") when nothing survives.
  static Vocabulary Build(std::span<const std::vector<std::string>> sequences,
                          int min_count);

  size_t size() const { return tokens_.size(); }
  std::optional<size_t> Find(std::string_view token) const;
  const std::string& token(size_t i) const { return tokens_[i]; }
  uint64_t count(size_t i) const { return counts_[i]; }
  std::span<const uint64_t> counts() const { return counts_; }
  int min_count() const { return min_count_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<uint64_t> counts_;
  std::unordered_map<std::string, size_t> index_;
  int min_count_ = 1;
};

struct ContentConfig {
  int dim = 64;
  int window = 5;
  int epochs = 20;
  int negatives = 5;
  double learning_rate = 0.025;
  int min_count = 2;
  uint64_t seed = 1;
  // 1 = deterministic. More workers update the tables without locking.
  int threads = 1;

  void Validate() const;
};

struct TrainStats {
  // Mean negative-sampling loss per (center, context) step, one per epoch.
  std::vector<double> epoch_loss;
};

// Distributed bag-of-words paragraph vectors with negative sampling: for every
// position of a paper's token sequence, the paper vector predicts each token
// in the surrounding +-window span. Learning rate decays linearly to
// lr * 1e-4. Papers with empty sequences get the zero vector. Throws
// std::runtime_error if the loss becomes non-finite.
EmbeddingTable TrainContent(std::span<const std::string> paper_ids,
                            std::span<const std::vector<std::string>> sequences,
                            const Vocabulary& vocab, const ContentConfig& config,
                            TrainStats* stats = nullptr);

}  // namespace hinand

#endif  // HINAND_CONTENT_EMBED_H_
