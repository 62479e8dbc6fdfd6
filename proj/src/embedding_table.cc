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

#include "hinand/embedding_table.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hinand {

std::string FormatDouble(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf, end);
}

double ParseDouble(std::string_view token) {
  double x = 0.0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
  if (ec != std::errc() || end != token.data() + token.size()) {
    throw std::invalid_argument("not a number: \"" + std::string(token) + "\"");
  }
  return x;
}

void EmbeddingTable::Add(std::string id, std::span<const double> values) {
  if (id.empty() || std::any_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isspace(c) != 0;
      })) {
    throw std::invalid_argument("invalid embedding id \"" + id + "\"");
  }
  if (values.size() != dim()) {
    throw std::invalid_argument("vector for \"" + id + "\" has length " +
                                std::to_string(values.size()) + ", expected " +
                                std::to_string(dim()));
  }
  for (double x : values) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("non-finite value in vector for \"" + id + "\"");
    }
  }
  if (!index_.emplace(id, ids_.size()).second) {
    throw std::invalid_argument("duplicate embedding id \"" + id + "\"");
  }
  ids_.push_back(std::move(id));
  values_.AppendRow(values);
}

std::optional<size_t> EmbeddingTable::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingTable::at(std::string_view id) const {
  auto row_index = Find(id);
  if (!row_index) {
    throw std::out_of_range("missing embedding for \"" + std::string(id) + "\"");
  }
  return row(*row_index);
}

void EmbeddingTable::Write(std::ostream& out) const {
  out << size() << ' ' << dim() << '\n';
  for (size_t r = 0; r < size(); ++r) {
    out << ids_[r];
    for (double x : row(r)) out << ' ' << FormatDouble(x);
    out << '\n';
  }
}

EmbeddingTable EmbeddingTable::Read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("embedding file: missing header line");
  }
  std::istringstream header(line);
  long long n = -1, k = -1;
  std::string extra;
  if (!(header >> n >> k) || n < 0 || k < 1 || (header >> extra)) {
    throw std::runtime_error("embedding file: bad header \"" + line + "\"");
  }
  EmbeddingTable table(static_cast<size_t>(k));
  std::vector<double> values(static_cast<size_t>(k));
  for (long long i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("embedding file: expected " + std::to_string(n) +
                               " rows, found " + std::to_string(i));
    }
    std::istringstream row_in(line);
    std::string id, token;
    row_in >> id;
    size_t count = 0;
    while (row_in >> token) {
      if (count == values.size()) {
        throw std::runtime_error("embedding file: row " + std::to_string(i + 2) +
                                 " has more than " + std::to_string(k) +
                                 " values");
      }
      values[count++] = ParseDouble(token);
    }
    if (count != values.size()) {
      throw std::runtime_error("embedding file: row " + std::to_string(i + 2) +
                               " has " + std::to_string(count) + " values, expected " +
                               std::to_string(k));
    }
    table.Add(std::move(id), values);
  }
  while (std::getline(in, line)) {
    if (!line.empty()) {
      throw std::runtime_error("embedding file: more rows than the header declares");
    }
  }
  return table;
}

void EmbeddingTable::WriteFile(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  Write(out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

EmbeddingTable EmbeddingTable::ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Read(in);
}

}  // namespace hinand
