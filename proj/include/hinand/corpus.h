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

#ifndef HINAND_CORPUS_H_
#define HINAND_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hinand {

// One bibliographic record filed under an ambiguous author name.
struct PaperRecord {
  std::string id;
  std::string name_ref;
  std::string title;
  std::optional<std::string> abstract;
  std::vector<std::string> coauthors;
  std::vector<std::string> institutes;
  std::optional<std::string> venue;
  std::vector<std::string> fields_of_study;
  std::optional<int> year;

  friend bool operator==(const PaperRecord&, const PaperRecord&) = default;
};

// Paper id -> author label.
using TruthLabels = std::map<std::string, std::string>;

// All records sharing one name reference, plus optional ground truth.
struct NameBlock {
  std::string name_ref;
  std::vector<PaperRecord> papers;
  std::optional<TruthLabels> truth;
};

// Thrown for malformed input files. `line` is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t line)
      : std::runtime_error(what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Reads one JSON object per line. Blank lines are skipped. Rejects duplicate
// ids, missing id/name_ref/title, and ids containing whitespace (ids are used
// as tokens in the embedding text format). Co-author entries equal to the
// record's own name_ref are dropped.
std::vector<PaperRecord> LoadRecords(const std::filesystem::path& path);
std::vector<PaperRecord> ParseRecords(std::istream& in);
void WriteRecords(std::ostream& out, std::span<const PaperRecord> records);

// Truth files are JSON lines of {"id": ..., "label": ...}.
TruthLabels LoadTruth(const std::filesystem::path& path);
TruthLabels ParseTruth(std::istream& in);
void WriteTruth(std::ostream& out, const TruthLabels& truth);

// Exact-string blocking on name_ref. Blocks come out sorted by name_ref and
// keep the input order of their papers.
std::vector<NameBlock> BlockByName(std::vector<PaperRecord> records);

// Distributes corpus-wide labels to blocks. Every paper of every block must be
// labeled; labels for unknown ids are an error.
void AttachTruth(std::span<NameBlock> blocks, const TruthLabels& truth);

enum class EntityKind { kCoAuthor, kInstitute, kVenue, kFieldOfStudy };

std::string_view EntityKindPrefix(EntityKind kind);

// Lowercase, strip ASCII punctuation, collapse whitespace. A hyphen or other
// punctuation between word characters becomes a separator, so
// "Machine-Learning" -> "machine learning". Returns nullopt when nothing is
// left, meaning the entity should be dropped.
std::optional<std::string> NormalizeEntity(std::string_view raw,
                                           EntityKind kind);

// Node index in a HeterogeneousNetwork. Papers occupy [0, num_papers()),
// entities occupy [num_papers(), num_nodes()).
using NodeId = size_t;

// Bipartite paper/entity graph for one name block. Immutable once built.
class HeterogeneousNetwork {
 public:
  static HeterogeneousNetwork Build(const NameBlock& block);

  size_t num_papers() const { return num_papers_; }
  size_t num_entities() const { return entity_kinds_.size(); }
  size_t num_nodes() const { return node_ids_.size(); }
  size_t num_edges() const { return edges_.size(); }

  bool is_paper(NodeId n) const { return n < num_papers_; }
  EntityKind entity_kind(NodeId n) const;

  // Namespaced id: "paper:<id>", "coauthor:<value>", "institute:<value>",
  // "venue:<value>", "fos:<value>". Spaces in entity values become '_'.
  const std::string& node_id(NodeId n) const;
  std::optional<NodeId> Find(std::string_view node_id) const;

  // Sorted ascending.
  std::span<const NodeId> neighbors(NodeId n) const;
  bool Adjacent(NodeId a, NodeId b) const;

  // (paper, entity) pairs sorted ascending.
  std::span<const std::pair<NodeId, NodeId>> edges() const { return edges_; }

  // Papers q != p sharing at least one entity with p, sorted ascending.
  std::vector<NodeId> FirstOrderNeighbors(NodeId p) const;

  // Entities adjacent to both papers, sorted ascending.
  std::vector<NodeId> SharedEntities(NodeId p, NodeId q) const;

 private:
  void CheckNode(NodeId n) const;
  void CheckPaper(NodeId n) const;

  size_t num_papers_ = 0;
  std::vector<std::string> node_ids_;
  std::vector<EntityKind> entity_kinds_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::unordered_map<std::string, NodeId> index_;
};

std::string PaperNodeId(std::string_view paper_id);

}  // namespace hinand

#endif  // HINAND_CORPUS_H_
