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

// Command-line entry point. Every stage subcommand takes the shared run flags
// and reads or writes artifacts under --output.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hinand/corpus.h"
#include "hinand/pipeline.h"
#include "hinand/synthetic.h"

namespace {

namespace fs = std::filesystem;
using hinand::PipelineConfig;

struct RunFlags {
  std::string config;
  std::optional<std::string> input;
  std::optional<std::string> truth;
  std::optional<std::string> k_file;
  std::optional<std::string> output;
  std::optional<uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> mode;
  std::optional<std::string> representation;
  std::optional<std::string> linkage;
};

void AddRunFlags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--input", f.input, "JSONL corpus");
  cmd->add_option("--truth", f.truth, "JSONL ground-truth labels");
  cmd->add_option("--k-file", f.k_file, "JSON object mapping name_ref to cluster count");
  cmd->add_option("--output", f.output, "artifact directory");
  cmd->add_option("--seed", f.seed, "global seed");
  cmd->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", f.mode, "deterministic or parallel")
      ->check(CLI::IsMember({"deterministic", "parallel"}));
  cmd->add_option("--representation", f.representation,
                  "final, content, relation, discriminator or generator");
  cmd->add_option("--linkage", f.linkage, "average, single or complete");
}

// Precedence: defaults < config file < environment < flags.
PipelineConfig Resolve(const RunFlags& f) {
  PipelineConfig c = f.config.empty() ? PipelineConfig{} : hinand::LoadPipelineConfig(f.config);
  hinand::ApplyEnvironmentOverrides(c);
  if (f.input) c.input = *f.input;
  if (f.truth) c.truth = *f.truth;
  if (f.k_file) c.k_file = *f.k_file;
  if (f.output) c.output = *f.output;
  if (f.seed) c.seed = *f.seed;
  if (f.threads) c.threads = *f.threads;
  if (f.mode) {
    c.mode = *f.mode == "parallel" ? hinand::ExecutionMode::kParallel
                                   : hinand::ExecutionMode::kDeterministic;
  }
  if (f.representation) c.cluster.representation = hinand::ParseRepresentation(*f.representation);
  if (f.linkage) c.cluster.linkage = hinand::ParseLinkage(*f.linkage);
  c.Validate();
  return c;
}

int WriteSynthetic(const hinand::SyntheticSpec& spec, const fs::path& out) {
  spec.Validate();
  const auto corpus = hinand::GenerateSynthetic(spec);
  fs::create_directories(out);
  std::ofstream records(out / "corpus.jsonl", std::ios::binary);
  hinand::WriteRecords(records, corpus.records);
  std::ofstream truth(out / "truth.jsonl", std::ios::binary);
  hinand::WriteTruth(truth, corpus.truth);
  if (!records || !truth) throw std::runtime_error("cannot write to " + out.string());
  std::cout << "wrote " << corpus.records.size() << " records to "
            << (out / "corpus.jsonl").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Author name disambiguation over heterogeneous paper networks"};
  app.require_subcommand(1);

  RunFlags flags;
  struct Stage {
    const char* name;
    const char* help;
    void (*run)(const PipelineConfig&);
  };
  const Stage stages[] = {
      {"ingest", "block the corpus by name and write per-block records", hinand::RunIngest},
      {"embed-content", "train paragraph vectors per block", hinand::RunEmbedContent},
      {"embed-relation", "train random-walk node vectors per block", hinand::RunEmbedRelation},
      {"train", "adversarial training per block", hinand::RunTrain},
      {"cluster", "agglomerative clustering per block", hinand::RunCluster},
      {"evaluate", "pairwise metrics against ground truth", hinand::RunEvaluate},
  };
  std::vector<std::pair<CLI::App*, const Stage*>> stage_cmds;
  for (const auto& s : stages) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    AddRunFlags(cmd, flags);
    stage_cmds.emplace_back(cmd, &s);
  }
  CLI::App* pipeline = app.add_subcommand("pipeline", "run every stage in order");
  AddRunFlags(pipeline, flags);

  hinand::SyntheticSpec spec;
  std::string synth_out = "synth";
  CLI::App* synth = app.add_subcommand("synth", "write a planted single-name corpus");
  synth->add_option("--output", synth_out, "directory for corpus.jsonl and truth.jsonl");
  synth->add_option("--name", spec.name_ref, "ambiguous name");
  synth->add_option("--authors", spec.num_authors, "planted authors");
  synth->add_option("--papers", spec.papers_per_author, "papers per author");
  synth->add_option("--vocab", spec.vocab_size, "vocabulary size");
  synth->add_option("--topic-words", spec.topic_words_per_author, "topic words per author");
  synth->add_option("--title-words", spec.words_per_title, "words per title");
  synth->add_option("--topic-prob", spec.topic_word_prob, "chance a title word is on-topic");
  synth->add_option("--share", spec.share_prob, "chance an entity slot uses the author pool");
  synth->add_option("--noise", spec.noise_prob, "chance an entity slot uses the global pool");
  synth->add_option("--seed", spec.seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) return WriteSynthetic(spec, synth_out);
    const PipelineConfig config = Resolve(flags);
    if (*pipeline) return hinand::RunPipeline(config, std::cerr);
    for (const auto& [cmd, stage] : stage_cmds) {
      if (*cmd) stage->run(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
