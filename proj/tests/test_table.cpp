// Copyright 2026 The grel Authors.
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

#include <gtest/gtest.h>

#include "grel/error.hpp"
#include "grel/table.hpp"

namespace grel {
namespace {

TEST(Table, ParsesHeaderRowsAndSkipsProvenance) {
  Table t = parse_table("# grel-artifact {}\n\na\tb\n1\t2\n3\t4\n", '\t', "t.tsv");
  ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][0], "3");
  EXPECT_EQ(t.row_lines[0], 4u);
  EXPECT_EQ(t.column("b"), 1u);
  EXPECT_FALSE(t.has_column("c"));
  EXPECT_THROW(t.column("c"), ParseError);
}

TEST(Table, QuotedFieldsKeepDelimitersQuotesAndNewlines) {
  Table t = parse_table("x,y\n\"a,b\",\"say \"\"hi\"\"\"\n\"two\nlines\",z\n", ',', "t.csv");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0], "a,b");
  EXPECT_EQ(t.rows[0][1], "say \"hi\"");
  EXPECT_EQ(t.rows[1][0], "two\nlines");
  EXPECT_EQ(t.row_lines[1], 3u);
}

TEST(Table, HandlesBomAndCrlf) {
  Table t = parse_table("\xEF\xBB\xBFid\tv\r\nk\t1\r\n", '\t', "t.tsv");
  EXPECT_EQ(t.header[0], "id");
  EXPECT_EQ(t.rows[0][1], "1");
}

TEST(Table, RejectsMalformedInput) {
  EXPECT_THROW(parse_table("a\tb\n1\n", '\t', "t"), ParseError);
  EXPECT_THROW(parse_table("a\n\"open\n", '\t', "t"), ParseError);
  EXPECT_THROW(parse_table("a\n\"x\"y\n", '\t', "t"), ParseError);
  EXPECT_THROW(parse_table("# only comments\n", '\t', "t"), ParseError);
}

TEST(Table, WriterRoundTripsAwkwardFields) {
  TableWriter w({"k", "v"});
  w.add_row({"#lead", "tab\there"});
  w.add_row({"q\"uote", "line\nbreak"});
  w.add_row({"", "plain"});
  std::string text = w.str("# provenance\n");
  Table t = parse_table(text, '\t', "rt");
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0][0], "#lead");
  EXPECT_EQ(t.rows[0][1], "tab\there");
  EXPECT_EQ(t.rows[1][0], "q\"uote");
  EXPECT_EQ(t.rows[1][1], "line\nbreak");
  EXPECT_EQ(t.rows[2][0], "");
}

TEST(Table, DelimiterFollowsExtension) {
  EXPECT_EQ(delimiter_for("x.csv"), ',');
  EXPECT_EQ(delimiter_for("x.tsv"), '\t');
  EXPECT_EQ(delimiter_for("x"), '\t');
}

TEST(Table, StrictNumberParsing) {
  Table t = parse_table("n\n12\n1.5\nabc\n\n", '\t', "n.tsv");
  EXPECT_EQ(parse_int(t, 0, 0), 12);
  EXPECT_DOUBLE_EQ(parse_real(t, 1, 0), 1.5);
  EXPECT_THROW(parse_int(t, 1, 0), ParseError);
  EXPECT_THROW(parse_real(t, 2, 0), ParseError);
}

}  // namespace
}  // namespace grel
