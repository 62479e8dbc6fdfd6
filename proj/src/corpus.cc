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

#include "hinand/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace hinand {
namespace {

using nlohmann::json;

const std::set<std::string> kRecordKeys = {
    "id",    "name_ref",        "title", "abstract", "coauthors", "institutes",
    "venue", "fields_of_study", "year"};

std::string LineError(size_t line, const std::string& msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

std::string RequiredString(const json& obj, const char* key, size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(LineError(line, std::string("missing required field \"") +
                                         key + "\""),
                     line);
  }
  if (!it->is_string()) {
    throw ParseError(LineError(line, std::string("field \"") + key +
                                         "\" must be a string"),
                     line);
  }
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const json& obj, const char* key,
                                          size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw ParseError(LineError(line, std::string("field \"") + key +
                                         "\" must be a string"),
                     line);
  }
  return it->get<std::string>();
}

std::vector<std::string> StringList(const json& obj, const char* key,
                                    size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_array()) {
    throw ParseError(LineError(line, std::string("field \"") + key +
                                         "\" must be an array of strings"),
                     line);
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw ParseError(LineError(line, std::string("field \"") + key +
                                           "\" must be an array of strings"),
                       line);
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

bool HasWhitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

json RecordToJson(const PaperRecord& r) {
  json j;
  j["id"] = r.id;
  j["name_ref"] = r.name_ref;
  j["title"] = r.title;
  if (r.abstract) j["abstract"] = *r.abstract;
  j["coauthors"] = r.coauthors;
  j["institutes"] = r.institutes;
  if (r.venue) j["venue"] = *r.venue;
  j["fields_of_study"] = r.fields_of_study;
  if (r.year) j["year"] = *r.year;
  return j;
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<PaperRecord> ParseRecords(std::istream& in) {
  std::vector<PaperRecord> records;
  std::unordered_set<std::string> seen;
  std::string text;
  size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (IsBlank(text)) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(LineError(line, std::string("malformed JSON: ") + e.what()),
                       line);
    }
    if (!obj.is_object()) {
      throw ParseError(LineError(line, "expected a JSON object"), line);
    }
    for (const auto& [key, value] : obj.items()) {
      if (!kRecordKeys.contains(key)) {
        throw ParseError(LineError(line, "unknown field \"" + key + "\""), line);
      }
    }
    PaperRecord r;
    r.id = RequiredString(obj, "id", line);
    r.name_ref = RequiredString(obj, "name_ref", line);
    r.title = RequiredString(obj, "title", line);
    if (r.id.empty()) throw ParseError(LineError(line, "empty id"), line);
    if (HasWhitespace(r.id)) {
      throw ParseError(LineError(line, "id \"" + r.id + "\" contains whitespace"),
                       line);
    }
    if (r.name_ref.empty()) {
      throw ParseError(LineError(line, "empty name_ref"), line);
    }
    r.abstract = OptionalString(obj, "abstract", line);
    r.coauthors = StringList(obj, "coauthors", line);
    std::erase(r.coauthors, r.name_ref);
    r.institutes = StringList(obj, "institutes", line);
    r.venue = OptionalString(obj, "venue", line);
    r.fields_of_study = StringList(obj, "fields_of_study", line);
    if (auto it = obj.find("year"); it != obj.end() && !it->is_null()) {
      if (!it->is_number_integer()) {
        throw ParseError(LineError(line, "field \"year\" must be an integer"),
                         line);
      }
      r.year = it->get<int>();
    }
    if (!seen.insert(r.id).second) {
      throw ParseError(LineError(line, "duplicate id \"" + r.id + "\""), line);
    }
    records.push_back(std::move(r));
  }
  if (in.bad()) throw std::runtime_error("I/O error while reading records");
  return records;
}

std::vector<PaperRecord> LoadRecords(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  try {
    return ParseRecords(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void WriteRecords(std::ostream& out, std::span<const PaperRecord> records) {
  for (const auto& r : records) out << RecordToJson(r).dump() << '\n';
}

TruthLabels ParseTruth(std::istream& in) {
  TruthLabels truth;
  std::string text;
  size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (IsBlank(text)) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(LineError(line, std::string("malformed JSON: ") + e.what()),
                       line);
    }
    if (!obj.is_object()) {
      throw ParseError(LineError(line, "expected a JSON object"), line);
    }
    std::string id = RequiredString(obj, "id", line);
    std::string label = RequiredString(obj, "label", line);
    if (!truth.emplace(id, std::move(label)).second) {
      throw ParseError(LineError(line, "duplicate id \"" + id + "\""), line);
    }
  }
  return truth;
}

TruthLabels LoadTruth(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  try {
    return ParseTruth(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void WriteTruth(std::ostream& out, const TruthLabels& truth) {
  for (const auto& [id, label] : truth) {
    json j;
    j["id"] = id;
    j["label"] = label;
    out << j.dump() << '\n';
  }
}

std::vector<NameBlock> BlockByName(std::vector<PaperRecord> records) {
  std::map<std::string, std::vector<PaperRecord>> grouped;
  for (auto& r : records) grouped[r.name_ref].push_back(std::move(r));
  std::vector<NameBlock> blocks;
  blocks.reserve(grouped.size());
  for (auto& [name, papers] : grouped) {
    blocks.push_back(NameBlock{name, std::move(papers), std::nullopt});
  }
  return blocks;
}

void AttachTruth(std::span<NameBlock> blocks, const TruthLabels& truth) {
  size_t used = 0;
  for (auto& block : blocks) {
    TruthLabels labels;
    for (const auto& p : block.papers) {
      auto it = truth.find(p.id);
      if (it == truth.end()) {
        throw std::invalid_argument("no truth label for paper \"" + p.id + "\"");
      }
      labels.emplace(p.id, it->second);
    }
    used += labels.size();
    block.truth = std::move(labels);
  }
  if (used != truth.size()) {
    throw std::invalid_argument(
        "truth labels reference papers that are not in the corpus");
  }
}

std::string_view EntityKindPrefix(EntityKind kind) {
  switch (kind) {
    case EntityKind::kCoAuthor:
      return "coauthor";
    case EntityKind::kInstitute:
      return "institute";
    case EntityKind::kVenue:
      return "venue";
    case EntityKind::kFieldOfStudy:
      return "fos";
  }
  return "unknown";
}

std::optional<std::string> NormalizeEntity(std::string_view raw,
                                           EntityKind /*kind*/) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c) || std::ispunct(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::string PaperNodeId(std::string_view paper_id) {
  return "paper:" + std::string(paper_id);
}

HeterogeneousNetwork HeterogeneousNetwork::Build(const NameBlock& block) {
  HeterogeneousNetwork hin;
  hin.num_papers_ = block.papers.size();
  for (const auto& p : block.papers) {
    hin.index_.emplace(PaperNodeId(p.id), hin.node_ids_.size());
    hin.node_ids_.push_back(PaperNodeId(p.id));
  }
  hin.adjacency_.resize(hin.num_papers_);
  const auto focal = NormalizeEntity(block.name_ref, EntityKind::kCoAuthor);

  std::set<std::pair<NodeId, NodeId>> edges;
  auto link = [&](NodeId paper, EntityKind kind, const std::string& raw) {
    auto value = NormalizeEntity(raw, kind);
    if (!value) return;
    if (kind == EntityKind::kCoAuthor && value == focal) return;
    std::replace(value->begin(), value->end(), ' ', '_');
    std::string id = std::string(EntityKindPrefix(kind)) + ":" + *value;
    auto [it, inserted] = hin.index_.emplace(id, hin.node_ids_.size());
    if (inserted) {
      hin.node_ids_.push_back(std::move(id));
      hin.entity_kinds_.push_back(kind);
      hin.adjacency_.emplace_back();
    }
    edges.emplace(paper, it->second);
  };

  for (NodeId i = 0; i < block.papers.size(); ++i) {
    const auto& p = block.papers[i];
    for (const auto& a : p.coauthors) link(i, EntityKind::kCoAuthor, a);
    for (const auto& s : p.institutes) link(i, EntityKind::kInstitute, s);
    if (p.venue) link(i, EntityKind::kVenue, *p.venue);
    for (const auto& f : p.fields_of_study) link(i, EntityKind::kFieldOfStudy, f);
  }
  hin.edges_.assign(edges.begin(), edges.end());
  for (const auto& [paper, entity] : hin.edges_) {
    hin.adjacency_[paper].push_back(entity);
    hin.adjacency_[entity].push_back(paper);
  }
  for (auto& list : hin.adjacency_) std::sort(list.begin(), list.end());
  return hin;
}

void HeterogeneousNetwork::CheckNode(NodeId n) const {
  if (n >= node_ids_.size()) {
    throw std::out_of_range("unknown node " + std::to_string(n));
  }
}

void HeterogeneousNetwork::CheckPaper(NodeId n) const {
  if (n >= num_papers_) {
    throw std::out_of_range("unknown paper node " + std::to_string(n));
  }
}

EntityKind HeterogeneousNetwork::entity_kind(NodeId n) const {
  CheckNode(n);
  if (is_paper(n)) throw std::invalid_argument("node is a paper");
  return entity_kinds_[n - num_papers_];
}

const std::string& HeterogeneousNetwork::node_id(NodeId n) const {
  CheckNode(n);
  return node_ids_[n];
}

std::optional<NodeId> HeterogeneousNetwork::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const NodeId> HeterogeneousNetwork::neighbors(NodeId n) const {
  CheckNode(n);
  return adjacency_[n];
}

bool HeterogeneousNetwork::Adjacent(NodeId a, NodeId b) const {
  const auto& list = adjacency_[a];
  return std::binary_search(list.begin(), list.end(), b);
}

std::vector<NodeId> HeterogeneousNetwork::FirstOrderNeighbors(NodeId p) const {
  CheckPaper(p);
  std::vector<NodeId> out;
  for (NodeId entity : adjacency_[p]) {
    for (NodeId q : adjacency_[entity]) {
      if (q != p) out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NodeId> HeterogeneousNetwork::SharedEntities(NodeId p,
                                                         NodeId q) const {
  CheckPaper(p);
  CheckPaper(q);
  std::vector<NodeId> out;
  std::set_intersection(adjacency_[p].begin(), adjacency_[p].end(),
                        adjacency_[q].begin(), adjacency_[q].end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace hinand
