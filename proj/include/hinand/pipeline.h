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

#ifndef HINAND_PIPELINE_H_
#define HINAND_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hinand/cluster_eval.h"
#include "hinand/content_embed.h"
#include "hinand/relation_embed.h"
#include "hinand/trainer.h"

namespace hinand {

enum class ExecutionMode { kDeterministic, kParallel };

// Which per-paper vectors the cluster stage groups.
enum class Representation { kFinal, kContent, kRelation, kDiscriminator, kGenerator };

Representation ParseRepresentation(std::string_view name);
std::string_view RepresentationName(Representation r);

struct ClusterOptions {
  Linkage linkage = Linkage::kAverage;
  Representation representation = Representation::kFinal;
};

// Whole-run configuration. JSON layout (every key optional, unknown keys
// rejected):
//   {"input", "truth", "k_file", "output", "seed", "threads", "mode",
//    "content": {"dim", "window", "epochs", "negatives", "learning_rate",
//                "min_count"},
//    "relation": {"walks_per_node", "walk_length", "p", "q", "window",
//                 "negatives", "epochs", "learning_rate"},
//    "discriminator": {"hidden", "output"},
//    "train": {"max_outer_iters", "g_steps", "d_steps", "lr_g", "lr_d",
//              "top_k", "batch_size", "convergence_window",
//              "convergence_tol"},
//    "cluster": {"linkage", "representation"}}
// The relation dimension always equals content.dim. Per-component seeds are
// derived from `seed` and each block's name.
struct PipelineConfig {
  std::string input;
  std::string truth;
  std::string k_file;
  std::string output = "out";
  uint64_t seed = 42;
  int threads = 1;
  ExecutionMode mode = ExecutionMode::kDeterministic;
  ContentConfig content;
  WalkConfig relation;
  TrainConfig train;
  ClusterOptions cluster;

  static PipelineConfig FromJsonText(std::string_view text);
  std::string ToJsonText() const;
  void Validate() const;
};

PipelineConfig LoadPipelineConfig(const std::filesystem::path& path);

// HINAND_SEED and HINAND_OUTPUT override the seed and output directory.
void ApplyEnvironmentOverrides(PipelineConfig& config);

// Failure inside a named stage ("ingest", "embed-content", ...).
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Seed for one block: DeriveSeed(global seed, StableHash(name_ref)). Each
// stage then uses DeriveSeed(block seed, its salt).
uint64_t BlockSeed(uint64_t global_seed, std::string_view name_ref);
inline constexpr uint64_t kContentSalt = 11;
inline constexpr uint64_t kRelationSalt = 12;
inline constexpr uint64_t kTrainSalt = 13;

// Stages. All artifacts live under config.output:
//   manifest.json                      blocks written by ingest
//   blocks/NNNN/records.jsonl          the block's records
//   blocks/NNNN/truth.jsonl            ground truth, when supplied
//   blocks/NNNN/content.emb            u
//   blocks/NNNN/relation.emb           all node vectors (papers give v)
//   blocks/NNNN/discriminator.ckpt     D weights
//   blocks/NNNN/generator.emb          g for papers and entities
//   blocks/NNNN/train_log.jsonl        one line per outer iteration
//   clusters.json                      per-block clusters
//   report.json                        clusters plus pairwise metrics
// Each stage reads only what earlier stages wrote and raises StageError naming
// any missing file.
void RunIngest(const PipelineConfig& config);
void RunEmbedContent(const PipelineConfig& config);
void RunEmbedRelation(const PipelineConfig& config);
void RunTrain(const PipelineConfig& config);
void RunCluster(const PipelineConfig& config);
void RunEvaluate(const PipelineConfig& config);

// All stages in order. Returns 0 on success; otherwise prints the
// stage-tagged error to `err` and returns 1, leaving partial artifacts.
int RunPipeline(const PipelineConfig& config, std::ostream& err);

}  // namespace hinand

#endif  // HINAND_PIPELINE_H_
