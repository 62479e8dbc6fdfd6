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

#ifndef HINAND_SYNTHETIC_H_
#define HINAND_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "hinand/corpus.h"

namespace hinand {

// Entity generation for one kind. Each author owns `private_pool` entities of
// the kind; `global_pool` more are shared by everyone.
struct EntityPoolSpec {
  int private_pool = 1;
  int global_pool = 1;
  int per_paper = 1;
};

// A single ambiguous name with planted authors. Each author draws a topic of
// `topic_words_per_author` words from a shared vocabulary (topics may overlap).
// Every title word comes from the author's topic with probability
// `topic_word_prob`, otherwise from the whole vocabulary. Each entity slot is
// filled from the global pool with probability `noise_prob`, otherwise from
// the author's private pool with probability `share_prob`, otherwise left
// empty.
struct SyntheticSpec {
  std::string name_ref = "J. Smith";
  int num_authors = 5;
  int papers_per_author = 20;
  int vocab_size = 400;
  int topic_words_per_author = 30;
  int words_per_title = 10;
  double topic_word_prob = 0.6;
  EntityPoolSpec coauthors{12, 40, 2};
  EntityPoolSpec institutes{1, 10, 1};
  EntityPoolSpec venues{4, 10, 1};
  EntityPoolSpec fields{6, 20, 2};
  double share_prob = 0.8;
  double noise_prob = 0.05;
  uint64_t seed = 7;

  // Throws std::invalid_argument for non-positive counts, probabilities
  // outside [0, 1], or a topic larger than the vocabulary.
  void Validate() const;
};

struct SyntheticCorpus {
  std::vector<PaperRecord> records;
  TruthLabels truth;
};

SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace hinand

#endif  // HINAND_SYNTHETIC_H_
