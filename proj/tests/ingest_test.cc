// Copyright 2026 The Tabaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tabaudit/ingest.h"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "test_util.h"

namespace tabaudit {
namespace {

TEST(CsvTest, QuotesAndBlankLines) {
  const auto rows = ParseCsv("\xEF\xBB\xBF" "a,b\n\"x,y\",\"he said \"\"hi\"\"\"\n\n1,2\r\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "a");
  EXPECT_EQ(rows[1][0], "x,y");
  EXPECT_EQ(rows[1][1], "he said \"hi\"");
  EXPECT_EQ(rows[2][1], "2");
  EXPECT_THROW(ParseCsv("a\n\"open"), ValidationError);
}

TEST(ParseTableTest, NumericTable) {
  const DataTable t = ParseTable("a,b\n1,2\n3,4.5\n-1e3,0\n");
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t.cols(), 2u);
  EXPECT_EQ(t.schema().column(0).kind, ColumnKind::kNumeric);
  EXPECT_EQ(t.schema().column(1).kind, ColumnKind::kNumeric);
  EXPECT_EQ(t.Number(2, 0), -1000.0);
}

TEST(ParseTableTest, InfersCategorical) {
  const DataTable t = ParseTable("v\n1\n2\nx\n");
  EXPECT_EQ(t.schema().column(0).kind, ColumnKind::kCategorical);
  EXPECT_EQ(*t.schema().column(0).categories,
            (std::vector<std::string>{"1", "2", "x"}));
}

TEST(ParseTableTest, MissingValueNamesCoordinates) {
  try {
    ParseTable("id,age\n1,3\n2,4\n3,5\n4,6\n5,\n");
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("row 5, column \"age\""),
              std::string::npos)
        << e.what();
  }
}

TEST(ParseTableTest, EmptyAndRagged) {
  EXPECT_THROW(ParseTable(""), ValidationError);
  EXPECT_THROW(ParseTable("a,b\n"), ValidationError);
  EXPECT_THROW(ParseTable("a,b\n1\n"), ValidationError);
}

TEST(ParseTableTest, SchemaEnforced) {
  const TableSchema schema({{"n", ColumnKind::kNumeric, std::nullopt},
                            {"c", ColumnKind::kCategorical,
                             std::vector<std::string>{"a", "b"}}});
  const DataTable t = ParseTable("n,c\n1,b\n2,a\n", schema);
  EXPECT_EQ(t.schema(), schema);
  EXPECT_THROW(ParseTable("n,c\nx,a\n", schema), ValidationError);
  EXPECT_THROW(ParseTable("n,c\n1,z\n", schema), ValidationError);
  EXPECT_THROW(ParseTable("n,d\n1,a\n", schema), ValidationError);
}

TEST(ParseTableTest, WriteRoundTrip) {
  const DataTable t = ParseTable("x,label\n0.1,\"a,b\"\n1e-300,plain\n");
  std::stringstream ss;
  WriteTable(t, ss);
  const DataTable back = ParseTable(ss.str());
  EXPECT_EQ(back, t);
}

TEST(SchemaJsonTest, RoundTrip) {
  const TableSchema schema({{"n", ColumnKind::kNumeric, std::nullopt},
                            {"c", ColumnKind::kCategorical,
                             std::vector<std::string>{"a", "b"}}});
  EXPECT_EQ(SchemaFromJson(SchemaToJson(schema)), schema);
  EXPECT_THROW(SchemaFromJson(nlohmann::json::parse(R"({"columns":[{"name":"a","kind":"blob"}]})")),
               ValidationError);
}

TEST(SplitTest, EightyTwentyDefault) {
  const SplitSizes s = ComputeSplitSizes(100, 0.2);
  EXPECT_EQ(s.train, 80u);
  EXPECT_EQ(s.holdout, 10u);
  EXPECT_EQ(s.reference, 10u);
}

TEST(SplitTest, OddTestSizeExhaustive) {
  const SplitSizes s = ComputeSplitSizes(101, 0.2);
  EXPECT_EQ(s.train, 80u);
  EXPECT_EQ(std::set<size_t>({s.holdout, s.reference}), std::set<size_t>({11, 10}));
  // Size accounting over a range of n and fractions.
  for (size_t n = 10; n < 300; ++n) {
    for (double f : {0.1, 0.2, 0.33, 0.5}) {
      const SplitSizes z = ComputeSplitSizes(n, f);
      const size_t test = n - z.train;
      EXPECT_EQ(z.train + z.holdout + z.reference, n);
      EXPECT_GE(static_cast<double>(test), f * n - 1e-9);
      EXPECT_LT(static_cast<double>(test) - 1, f * n);
      EXPECT_LE(z.holdout - z.reference, 1u);
    }
  }
}

TEST(SplitTest, DisjointCoveringDeterministic) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 57; ++i) rows.push_back({static_cast<double>(i)});
  const DataTable data = testutil::Numeric(rows);
  const SplitResult a = SplitReal(data, {0.2, RandomSeed{3}});
  const SplitResult b = SplitReal(data, {0.2, RandomSeed{3}});
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.reference, b.reference);
  std::multiset<double> seen;
  for (const DataTable* t : {&a.train, &a.holdout, &a.reference}) {
    for (size_t i = 0; i < t->rows(); ++i) seen.insert(t->Number(i, 0));
  }
  EXPECT_EQ(seen.size(), 57u);
  EXPECT_EQ(std::set<double>(seen.begin(), seen.end()).size(), 57u);
}

TEST(SplitTest, TooSmall) {
  const DataTable data = testutil::Numeric({{1}, {2}, {3}, {4}, {5}});
  EXPECT_THROW(SplitReal(data, {0.2, RandomSeed{1}}), ValidationError);
}

TEST(FingerprintTest, StableAndSensitive) {
  const DataTable a = ParseTable("x,y\n1,a\n2,b\n");
  const DataTable b = ParseTable("x,y\n1,a\n2,b\n");
  const DataTable c = ParseTable("x,y\n2,b\n1,a\n");
  EXPECT_EQ(Fingerprint(a), Fingerprint(b));
  EXPECT_NE(Fingerprint(a), Fingerprint(c));
  EXPECT_EQ(FingerprintHex(a).size(), 16u);
}

}  // namespace
}  // namespace tabaudit
