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

#include "hinand/synthetic.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "hinand/rng.h"

namespace hinand {
namespace {

std::string Numbered(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04d", prefix, i);
  return buf;
}

// Spelled-out pseudo words so that tokens survive tokenization intact.
std::string Word(int i) {
  static const char* kSyllables[] = {"ka", "lo", "mi", "ne", "ru", "ta", "vo", "zi"};
  std::string w;
  int x = i + 8;
  while (x > 0) {
    w += kSyllables[x % 8];
    x /= 8;
  }
  return w;
}

}  // namespace

void SyntheticSpec::Validate() const {
  auto pool_ok = [](const EntityPoolSpec& p) {
    return p.private_pool >= 1 && p.global_pool >= 1 && p.per_paper >= 0;
  };
  if (num_authors < 1 || papers_per_author < 1 || vocab_size < 1 ||
      topic_words_per_author < 1 || words_per_title < 1 || name_ref.empty() ||
      !pool_ok(coauthors) || !pool_ok(institutes) || !pool_ok(venues) ||
      !pool_ok(fields)) {
    throw std::invalid_argument("synthetic corpus: counts must be positive");
  }
  for (double p : {share_prob, noise_prob, topic_word_prob}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("synthetic corpus: probabilities must lie in [0, 1]");
    }
  }
  if (topic_words_per_author > vocab_size) {
    throw std::invalid_argument(
        "synthetic corpus: topic_words_per_author exceeds vocab_size");
  }
}

SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  SyntheticCorpus corpus;

  std::vector<int> all_words(static_cast<size_t>(spec.vocab_size));
  std::iota(all_words.begin(), all_words.end(), 0);
  std::vector<std::vector<int>> topics;
  for (int a = 0; a < spec.num_authors; ++a) {
    rng.Shuffle(all_words.begin(), all_words.end());
    topics.emplace_back(all_words.begin(),
                        all_words.begin() + spec.topic_words_per_author);
  }

  auto draw = [&](const EntityPoolSpec& pool, const std::string& kind, int author) {
    std::vector<std::string> out;
    for (int s = 0; s < pool.per_paper; ++s) {
      if (rng.Bernoulli(spec.noise_prob)) {
        out.push_back("Shared " + kind + " " +
                      std::to_string(rng.UniformInt(static_cast<uint64_t>(pool.global_pool))));
      } else if (rng.Bernoulli(spec.share_prob)) {
        out.push_back("Author " + std::to_string(author) + " " + kind + " " +
                      std::to_string(rng.UniformInt(static_cast<uint64_t>(pool.private_pool))));
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  int paper = 0;
  for (int a = 0; a < spec.num_authors; ++a) {
    const std::string label = Numbered("author", a);
    for (int i = 0; i < spec.papers_per_author; ++i, ++paper) {
      PaperRecord r;
      r.id = Numbered("p", paper);
      r.name_ref = spec.name_ref;
      for (int w = 0; w < spec.words_per_title; ++w) {
        int word;
        if (rng.Bernoulli(spec.topic_word_prob)) {
          word = topics[static_cast<size_t>(a)][rng.UniformInt(topics[static_cast<size_t>(a)].size())];
        } else {
          word = static_cast<int>(rng.UniformInt(static_cast<uint64_t>(spec.vocab_size)));
        }
        if (w) r.title += ' ';
        r.title += Word(word);
      }
      r.coauthors = draw(spec.coauthors, "Coauthor", a);
      r.institutes = draw(spec.institutes, "Institute", a);
      auto venue = draw(spec.venues, "Venue", a);
      if (!venue.empty()) r.venue = venue.front();
      r.fields_of_study = draw(spec.fields, "Field", a);
      r.year = 2000 + static_cast<int>(rng.UniformInt(20));
      corpus.truth.emplace(r.id, label);
      corpus.records.push_back(std::move(r));
    }
  }
  return corpus;
}

}  // namespace hinand
