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

#include <cmath>
#include <limits>
#include <sstream>

#include "gtest/gtest.h"
#include "hinand/rng.h"

namespace hinand {
namespace {

TEST(FormatDoubleTest, RoundTripsExactly) {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(rng.Uniform(-1.0, 1.0), static_cast<int>(rng.UniformInt(80)) - 40);
    EXPECT_EQ(ParseDouble(FormatDouble(x)), x);
  }
  EXPECT_EQ(FormatDouble(0.5), "0.5");
  EXPECT_EQ(FormatDouble(-2.0), "-2");
}

TEST(ParseDoubleTest, RejectsPartialTokens) {
  EXPECT_THROW(ParseDouble("1.5x"), std::invalid_argument);
  EXPECT_THROW(ParseDouble(""), std::invalid_argument);
  EXPECT_THROW(ParseDouble("abc"), std::invalid_argument);
}

TEST(EmbeddingTableTest, AddValidates) {
  EmbeddingTable t(2);
  t.Add("a", std::vector<double>{1.0, 2.0});
  EXPECT_THROW(t.Add("a", std::vector<double>{1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(t.Add("b", std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(t.Add("c d", std::vector<double>{1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(t.Add("e", std::vector<double>{1.0, std::numeric_limits<double>::quiet_NaN()}),
               std::invalid_argument);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.at("a")[1], 2.0);
  EXPECT_THROW(t.at("zzz"), std::out_of_range);
  EXPECT_FALSE(t.Find("zzz").has_value());
}

TEST(EmbeddingTableTest, TextRoundTripIsByteIdentical) {
  Rng rng(9);
  EmbeddingTable t(5);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> v(5);
    for (double& x : v) x = rng.Uniform(-3.0, 3.0);
    t.Add("paper:p" + std::to_string(i), v);
  }
  std::ostringstream first;
  t.Write(first);
  std::istringstream in(first.str());
  const EmbeddingTable back = EmbeddingTable::Read(in);
  EXPECT_EQ(back, t);
  std::ostringstream second;
  back.Write(second);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(first.str().substr(0, 5), "20 5\n");
}

TEST(EmbeddingTableTest, ReaderValidatesCounts) {
  std::istringstream too_few("2 2\na 1 2\n");
  EXPECT_THROW(EmbeddingTable::Read(too_few), std::runtime_error);
  std::istringstream short_row("1 3\na 1 2\n");
  EXPECT_THROW(EmbeddingTable::Read(short_row), std::runtime_error);
  std::istringstream long_row("1 1\na 1 2\n");
  EXPECT_THROW(EmbeddingTable::Read(long_row), std::runtime_error);
  std::istringstream bad_header("x 1\n");
  EXPECT_THROW(EmbeddingTable::Read(bad_header), std::runtime_error);
}

}  // namespace
}  // namespace hinand
