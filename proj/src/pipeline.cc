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

#include "hinand/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "hinand/corpus.h"
#include "hinand/discriminator.h"
#include "hinand/embedding_table.h"
#include "hinand/generator.h"
#include "hinand/rng.h"
#include "json.hpp"

namespace hinand {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void RejectUnknownKeys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw std::invalid_argument("unknown config key \"" + where + "." + key + "\"");
    }
  }
}

template <typename T>
void Read(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

ExecutionMode ParseMode(const std::string& mode) {
  if (mode == "deterministic") return ExecutionMode::kDeterministic;
  if (mode == "parallel") return ExecutionMode::kParallel;
  throw std::invalid_argument("unknown mode \"" + mode + "\"");
}

struct BlockEntry {
  std::string name_ref;
  std::string dir;  // relative to the output directory
  size_t papers = 0;
  bool has_truth = false;
};

fs::path OutputDir(const PipelineConfig& config) { return fs::path(config.output); }

fs::path RequireFile(const fs::path& path, const std::string& stage) {
  if (!fs::exists(path)) {
    throw StageError(stage, "missing required file " + path.string());
  }
  return path;
}

std::vector<BlockEntry> ReadManifest(const PipelineConfig& config,
                                     const std::string& stage) {
  const fs::path path = RequireFile(OutputDir(config) / "manifest.json", stage);
  std::ifstream in(path);
  const json j = json::parse(in);
  std::vector<BlockEntry> blocks;
  for (const auto& b : j.at("blocks")) {
    blocks.push_back({b.at("name_ref").get<std::string>(), b.at("dir").get<std::string>(),
                      b.at("papers").get<size_t>(), b.at("truth").get<bool>()});
  }
  return blocks;
}

NameBlock LoadBlock(const PipelineConfig& config, const BlockEntry& entry,
                    const std::string& stage) {
  const fs::path dir = OutputDir(config) / entry.dir;
  NameBlock block;
  block.name_ref = entry.name_ref;
  block.papers = LoadRecords(RequireFile(dir / "records.jsonl", stage));
  if (entry.has_truth) block.truth = LoadTruth(RequireFile(dir / "truth.jsonl", stage));
  return block;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Runs fn(i) for every block, across config.threads workers. The error of the
// lowest-indexed failing block is rethrown, tagged with the stage.
void ForEachBlock(const PipelineConfig& config, size_t count, const std::string& stage,
                  const std::function<void(size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  auto guarded = [&](size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const size_t workers = std::min<size_t>(static_cast<size_t>(std::max(config.threads, 1)), count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) guarded(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < count; i = next++) guarded(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& ex) {
      throw StageError(stage, ex.what());
    }
  }
}

int InnerThreads(const PipelineConfig& config) {
  return config.mode == ExecutionMode::kParallel ? std::max(config.threads, 1) : 1;
}

std::map<std::string, size_t> LoadKFile(const std::string& path, const std::string& stage) {
  std::map<std::string, size_t> ks;
  if (path.empty()) return ks;
  std::ifstream in(RequireFile(path, stage));
  const json j = json::parse(in);
  if (!j.is_object()) throw StageError(stage, "k file must map name_ref to a cluster count");
  for (const auto& [name, k] : j.items()) ks[name] = k.get<size_t>();
  return ks;
}

json ClustersJson(const ClusteringResult& r) {
  json j;
  j["name_ref"] = r.name_ref;
  j["k"] = r.k;
  j["clusters"] = r.clusters;
  return j;
}

}  // namespace

Representation ParseRepresentation(std::string_view name) {
  if (name == "final") return Representation::kFinal;
  if (name == "content") return Representation::kContent;
  if (name == "relation") return Representation::kRelation;
  if (name == "discriminator") return Representation::kDiscriminator;
  if (name == "generator") return Representation::kGenerator;
  throw std::invalid_argument("unknown representation \"" + std::string(name) + "\"");
}

std::string_view RepresentationName(Representation r) {
  switch (r) {
    case Representation::kFinal:
      return "final";
    case Representation::kContent:
      return "content";
    case Representation::kRelation:
      return "relation";
    case Representation::kDiscriminator:
      return "discriminator";
    case Representation::kGenerator:
      return "generator";
  }
  return "final";
}

PipelineConfig PipelineConfig::FromJsonText(std::string_view text) {
  const json j = json::parse(text);
  RejectUnknownKeys(j,
                    {"input", "truth", "k_file", "output", "seed", "threads", "mode",
                     "content", "relation", "discriminator", "train", "cluster"},
                    "config");
  PipelineConfig c;
  Read(j, "input", c.input);
  Read(j, "truth", c.truth);
  Read(j, "k_file", c.k_file);
  Read(j, "output", c.output);
  Read(j, "seed", c.seed);
  Read(j, "threads", c.threads);
  if (auto it = j.find("mode"); it != j.end()) c.mode = ParseMode(it->get<std::string>());
  if (auto it = j.find("content"); it != j.end()) {
    RejectUnknownKeys(*it, {"dim", "window", "epochs", "negatives", "learning_rate", "min_count"},
                      "content");
    Read(*it, "dim", c.content.dim);
    Read(*it, "window", c.content.window);
    Read(*it, "epochs", c.content.epochs);
    Read(*it, "negatives", c.content.negatives);
    Read(*it, "learning_rate", c.content.learning_rate);
    Read(*it, "min_count", c.content.min_count);
  }
  if (auto it = j.find("relation"); it != j.end()) {
    RejectUnknownKeys(*it,
                      {"walks_per_node", "walk_length", "p", "q", "window", "negatives",
                       "epochs", "learning_rate"},
                      "relation");
    Read(*it, "walks_per_node", c.relation.walks_per_node);
    Read(*it, "walk_length", c.relation.walk_length);
    Read(*it, "p", c.relation.return_param);
    Read(*it, "q", c.relation.inout_param);
    Read(*it, "window", c.relation.window);
    Read(*it, "negatives", c.relation.negatives);
    Read(*it, "epochs", c.relation.epochs);
    Read(*it, "learning_rate", c.relation.learning_rate);
  }
  if (auto it = j.find("discriminator"); it != j.end()) {
    RejectUnknownKeys(*it, {"hidden", "output"}, "discriminator");
    Read(*it, "hidden", c.train.hidden_dim);
    Read(*it, "output", c.train.output_dim);
  }
  if (auto it = j.find("train"); it != j.end()) {
    RejectUnknownKeys(*it,
                      {"max_outer_iters", "g_steps", "d_steps", "lr_g", "lr_d", "top_k",
                       "batch_size", "convergence_window", "convergence_tol"},
                      "train");
    Read(*it, "max_outer_iters", c.train.max_outer_iters);
    Read(*it, "g_steps", c.train.g_steps);
    Read(*it, "d_steps", c.train.d_steps);
    Read(*it, "lr_g", c.train.lr_g);
    Read(*it, "lr_d", c.train.lr_d);
    Read(*it, "top_k", c.train.top_k);
    Read(*it, "batch_size", c.train.batch_size);
    Read(*it, "convergence_window", c.train.convergence_window);
    Read(*it, "convergence_tol", c.train.convergence_tol);
  }
  if (auto it = j.find("cluster"); it != j.end()) {
    RejectUnknownKeys(*it, {"linkage", "representation"}, "cluster");
    if (auto l = it->find("linkage"); l != it->end()) {
      c.cluster.linkage = ParseLinkage(l->get<std::string>());
    }
    if (auto r = it->find("representation"); r != it->end()) {
      c.cluster.representation = ParseRepresentation(r->get<std::string>());
    }
  }
  c.relation.dim = c.content.dim;
  c.Validate();
  return c;
}

std::string PipelineConfig::ToJsonText() const {
  json j;
  j["input"] = input;
  j["truth"] = truth;
  j["k_file"] = k_file;
  j["output"] = output;
  j["seed"] = seed;
  j["threads"] = threads;
  j["mode"] = mode == ExecutionMode::kParallel ? "parallel" : "deterministic";
  j["content"] = {{"dim", content.dim},
                  {"window", content.window},
                  {"epochs", content.epochs},
                  {"negatives", content.negatives},
                  {"learning_rate", content.learning_rate},
                  {"min_count", content.min_count}};
  j["relation"] = {{"walks_per_node", relation.walks_per_node},
                   {"walk_length", relation.walk_length},
                   {"p", relation.return_param},
                   {"q", relation.inout_param},
                   {"window", relation.window},
                   {"negatives", relation.negatives},
                   {"epochs", relation.epochs},
                   {"learning_rate", relation.learning_rate}};
  j["discriminator"] = {{"hidden", train.hidden_dim}, {"output", train.output_dim}};
  j["train"] = {{"max_outer_iters", train.max_outer_iters},
                {"g_steps", train.g_steps},
                {"d_steps", train.d_steps},
                {"lr_g", train.lr_g},
                {"lr_d", train.lr_d},
                {"top_k", train.top_k},
                {"batch_size", train.batch_size},
                {"convergence_window", train.convergence_window},
                {"convergence_tol", train.convergence_tol}};
  j["cluster"] = {{"linkage", LinkageName(cluster.linkage)},
                  {"representation", RepresentationName(cluster.representation)}};
  return j.dump(2) + "\n";
}

void PipelineConfig::Validate() const {
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (output.empty()) throw std::invalid_argument("output directory is empty");
  content.Validate();
  relation.Validate();
  train.Validate();
  if (relation.dim != content.dim) {
    throw std::invalid_argument("relation and content dimensions must match");
  }
}

PipelineConfig LoadPipelineConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return PipelineConfig::FromJsonText(buf.str());
}

void ApplyEnvironmentOverrides(PipelineConfig& config) {
  if (const char* seed = std::getenv("HINAND_SEED"); seed && *seed) {
    config.seed = std::stoull(seed);
  }
  if (const char* out = std::getenv("HINAND_OUTPUT"); out && *out) {
    config.output = out;
  }
}

uint64_t BlockSeed(uint64_t global_seed, std::string_view name_ref) {
  return DeriveSeed(global_seed, StableHash(name_ref));
}

void RunIngest(const PipelineConfig& config) {
  const std::string stage = "ingest";
  try {
    if (config.input.empty()) throw StageError(stage, "no input corpus given");
    auto blocks = BlockByName(LoadRecords(RequireFile(config.input, stage)));
    const bool has_truth = !config.truth.empty();
    if (has_truth) AttachTruth(blocks, LoadTruth(RequireFile(config.truth, stage)));
    const fs::path out = OutputDir(config);
    fs::create_directories(out / "blocks");
    json manifest;
    manifest["blocks"] = json::array();
    for (size_t i = 0; i < blocks.size(); ++i) {
      char dir[32];
      std::snprintf(dir, sizeof(dir), "blocks/%04zu", i);
      fs::create_directories(out / dir);
      std::ostringstream records;
      WriteRecords(records, blocks[i].papers);
      WriteText(out / dir / "records.jsonl", records.str());
      if (blocks[i].truth) {
        std::ostringstream truth;
        WriteTruth(truth, *blocks[i].truth);
        WriteText(out / dir / "truth.jsonl", truth.str());
      }
      manifest["blocks"].push_back({{"name_ref", blocks[i].name_ref},
                                    {"dir", dir},
                                    {"papers", blocks[i].papers.size()},
                                    {"truth", blocks[i].truth.has_value()}});
    }
    WriteText(out / "manifest.json", manifest.dump(2) + "\n");
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void RunEmbedContent(const PipelineConfig& config) {
  const std::string stage = "embed-content";
  const auto entries = ReadManifest(config, stage);
  ForEachBlock(config, entries.size(), stage, [&](size_t i) {
    const NameBlock block = LoadBlock(config, entries[i], stage);
    std::vector<std::string> ids;
    std::vector<std::vector<std::string>> sequences;
    for (const auto& p : block.papers) {
      ids.push_back(p.id);
      sequences.push_back(Tokenize(p));
    }
    ContentConfig cc = config.content;
    cc.seed = DeriveSeed(BlockSeed(config.seed, block.name_ref), kContentSalt);
    cc.threads = InnerThreads(config);
    EmbeddingTable table(static_cast<size_t>(cc.dim));
    try {
      const Vocabulary vocab = Vocabulary::Build(sequences, cc.min_count);
      table = TrainContent(ids, sequences, vocab, cc);
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()) != "empty vocabulary") throw;
      // No token reaches min_count: every paper gets the zero vector.
      const std::vector<double> zero(static_cast<size_t>(cc.dim), 0.0);
      for (const auto& id : ids) table.Add(id, zero);
    }
    table.WriteFile(OutputDir(config) / entries[i].dir / "content.emb");
  });
}

void RunEmbedRelation(const PipelineConfig& config) {
  const std::string stage = "embed-relation";
  const auto entries = ReadManifest(config, stage);
  ForEachBlock(config, entries.size(), stage, [&](size_t i) {
    const NameBlock block = LoadBlock(config, entries[i], stage);
    const auto hin = HeterogeneousNetwork::Build(block);
    WalkConfig wc = config.relation;
    wc.seed = DeriveSeed(BlockSeed(config.seed, block.name_ref), kRelationSalt);
    wc.threads = InnerThreads(config);
    const auto walks = GenerateWalks(hin, wc);
    TrainRelation(hin, walks, wc).WriteFile(OutputDir(config) / entries[i].dir /
                                            "relation.emb");
  });
}

void RunTrain(const PipelineConfig& config) {
  const std::string stage = "train";
  const auto entries = ReadManifest(config, stage);
  std::mutex log_mutex;
  ForEachBlock(config, entries.size(), stage, [&](size_t i) {
    const fs::path dir = OutputDir(config) / entries[i].dir;
    const NameBlock block = LoadBlock(config, entries[i], stage);
    const auto hin = HeterogeneousNetwork::Build(block);
    const auto content = EmbeddingTable::ReadFile(RequireFile(dir / "content.emb", stage));
    const auto relation = EmbeddingTable::ReadFile(RequireFile(dir / "relation.emb", stage));
    const PaperFeatures features = GatherFeatures(block, content, relation);
    TrainConfig tc = config.train;
    tc.seed = DeriveSeed(BlockSeed(config.seed, block.name_ref), kTrainSalt);
    const TrainResult result =
        AdversarialTrain(hin, features, InitGenerator(relation, hin), tc);
    {
      std::lock_guard lock(log_mutex);
      for (const auto& w : result.warnings) {
        std::cerr << "warning: " << block.name_ref << ": " << w << "\n";
      }
    }
    result.discriminator.WriteFile(dir / "discriminator.ckpt");
    result.generator.ToTable(hin).WriteFile(dir / "generator.emb");
    std::string log;
    for (const auto& entry : result.log) log += IterationLogJson(entry) + "\n";
    WriteText(dir / "train_log.jsonl", log);
  });
}

void RunCluster(const PipelineConfig& config) {
  const std::string stage = "cluster";
  const auto entries = ReadManifest(config, stage);
  const auto k_file = LoadKFile(config.k_file, stage);
  std::vector<ClusteringResult> results(entries.size());
  ForEachBlock(config, entries.size(), stage, [&](size_t i) {
    const fs::path dir = OutputDir(config) / entries[i].dir;
    const NameBlock block = LoadBlock(config, entries[i], stage);
    size_t k = 0;
    if (block.truth) {
      std::set<std::string> labels;
      for (const auto& [id, label] : *block.truth) labels.insert(label);
      k = labels.size();
    } else if (auto it = k_file.find(block.name_ref); it != k_file.end()) {
      k = it->second;
    } else {
      throw StageError(stage, "no cluster count for \"" + block.name_ref +
                                  "\": supply truth labels or a k file");
    }
    std::vector<std::string> ids;
    for (const auto& p : block.papers) ids.push_back(p.id);
    Matrix reps;
    const auto rep = config.cluster.representation;
    if (rep == Representation::kContent) {
      const auto content = EmbeddingTable::ReadFile(RequireFile(dir / "content.emb", stage));
      reps = Matrix(0, content.dim());
      for (const auto& id : ids) reps.AppendRow(content.at(id));
    } else if (rep == Representation::kRelation) {
      const auto relation = EmbeddingTable::ReadFile(RequireFile(dir / "relation.emb", stage));
      reps = Matrix(0, relation.dim());
      for (const auto& id : ids) reps.AppendRow(relation.at(PaperNodeId(id)));
    } else {
      const auto hin = HeterogeneousNetwork::Build(block);
      const auto content = EmbeddingTable::ReadFile(RequireFile(dir / "content.emb", stage));
      const auto relation = EmbeddingTable::ReadFile(RequireFile(dir / "relation.emb", stage));
      const auto features = GatherFeatures(block, content, relation);
      const auto d = DiscriminatorParams::ReadFile(RequireFile(dir / "discriminator.ckpt", stage));
      const auto g = InitGenerator(
          EmbeddingTable::ReadFile(RequireFile(dir / "generator.emb", stage)), hin);
      if (rep == Representation::kFinal) {
        reps = FinalRepresentations(d, g, features);
      } else if (rep == Representation::kDiscriminator) {
        reps = EmbedAll(d, features);
      } else {
        reps = g.paper;
      }
    }
    results[i] = ClusterHac(ids, reps, k, config.cluster.linkage, block.name_ref);
  });
  json j;
  j["representation"] = RepresentationName(config.cluster.representation);
  j["linkage"] = LinkageName(config.cluster.linkage);
  j["blocks"] = json::array();
  for (const auto& r : results) j["blocks"].push_back(ClustersJson(r));
  try {
    WriteText(OutputDir(config) / "clusters.json", j.dump(2) + "\n");
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void RunEvaluate(const PipelineConfig& config) {
  const std::string stage = "evaluate";
  try {
    const fs::path clusters_path = RequireFile(OutputDir(config) / "clusters.json", stage);
    const auto entries = ReadManifest(config, stage);
    std::ifstream in(clusters_path);
    const json clusters = json::parse(in);
    const auto& blocks = clusters.at("blocks");
    if (blocks.size() != entries.size()) {
      throw StageError(stage, clusters_path.string() + " does not match manifest.json");
    }
    json report;
    report["names"] = json::array();
    std::vector<PairwiseMetrics> metrics;
    for (size_t i = 0; i < entries.size(); ++i) {
      ClusteringResult r;
      r.name_ref = blocks[i].at("name_ref").get<std::string>();
      r.k = blocks[i].at("k").get<size_t>();
      r.clusters = blocks[i].at("clusters").get<std::vector<std::vector<std::string>>>();
      if (r.name_ref != entries[i].name_ref) {
        throw StageError(stage, "block order in clusters.json differs from manifest.json");
      }
      json entry = ClustersJson(r);
      if (entries[i].has_truth) {
        const NameBlock block = LoadBlock(config, entries[i], stage);
        const PairwiseMetrics m = PairwisePrf(r, *block.truth);
        entry["precision"] = m.precision;
        entry["recall"] = m.recall;
        entry["f1"] = m.f1;
        metrics.push_back(m);
      }
      report["names"].push_back(std::move(entry));
    }
    if (!metrics.empty()) {
      const PairwiseMetrics macro = MacroAverage(metrics);
      report["macro"] = {{"names", metrics.size()},
                         {"precision", macro.precision},
                         {"recall", macro.recall},
                         {"f1", macro.f1}};
    }
    WriteText(OutputDir(config) / "report.json", report.dump(2) + "\n");
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

int RunPipeline(const PipelineConfig& config, std::ostream& err) {
  try {
    RunIngest(config);
    RunEmbedContent(config);
    RunEmbedRelation(config);
    RunTrain(config);
    RunCluster(config);
    RunEvaluate(config);
  } catch (const StageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace hinand
