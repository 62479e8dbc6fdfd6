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

#ifndef HINAND_EMBEDDING_TABLE_H_
#define HINAND_EMBEDDING_TABLE_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hinand/matrix.h"

namespace hinand {

// Shortest decimal text that parses back to exactly `x`.
std::string FormatDouble(double x);
// Strict parse of a full token; throws std::invalid_argument.
double ParseDouble(std::string_view token);

// Id-keyed table of equal-length vectors.
//
// Text format:
//   N k
//   id x1 x2 ... xk      (N lines)
// Ids may not contain whitespace.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(size_t dim) : values_(0, dim) {}

  size_t size() const { return ids_.size(); }
  size_t dim() const { return values_.cols(); }

  // Throws on duplicate id, width mismatch, non-finite entries or ids with
  // whitespace.
  void Add(std::string id, std::span<const double> values);

  const std::string& id(size_t row) const { return ids_[row]; }
  std::optional<size_t> Find(std::string_view id) const;

  std::span<double> row(size_t r) { return values_.row(r); }
  std::span<const double> row(size_t r) const { return values_.row(r); }

  // Throws std::out_of_range naming the id when absent.
  std::span<const double> at(std::string_view id) const;

  const Matrix& values() const { return values_; }

  void Write(std::ostream& out) const;
  static EmbeddingTable Read(std::istream& in);
  void WriteFile(const std::filesystem::path& path) const;
  static EmbeddingTable ReadFile(const std::filesystem::path& path);

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.ids_ == b.ids_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, size_t> index_;
  Matrix values_;
};

}  // namespace hinand

#endif  // HINAND_EMBEDDING_TABLE_H_
