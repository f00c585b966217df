// Copyright 2026 The uacoref Authors.
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

#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

#include "coref/format.hpp"
#include "helpers.hpp"

using namespace coref;

namespace {

Corpus parse_ua(const std::string& text) {
  std::istringstream in(text);
  return parse_columns(in, ColumnSchema::ua(), "test");
}

std::string serialize_ua(const Corpus& corpus) {
  std::ostringstream out;
  serialize_columns(corpus, ColumnSchema::ua(), out);
  return out.str();
}

}  // namespace

TEST_CASE("single singleton via bracket annotation") {
  Corpus c = parse_ua(
      "#begin document d1\n"
      "d1\t0\thello\tA\t(1)\t-\n"
      "d1\t1\tworld\tA\t-\t-\n"
      "\n"
      "#end document\n");
  REQUIRE(c.documents.size() == 1);
  const Document& doc = c.documents[0];
  REQUIRE(doc.gold_clusters.has_value());
  CHECK(doc.gold_clusters->clusters == std::vector<Cluster>{{{0, 0}}});
  CHECK(doc.sentences[0].speaker == "A");
}

TEST_CASE("open/close pairing across tokens") {
  Corpus c = parse_ua(
      "#begin document d1\n"
      "d1\t0\ta\t-\t(1\t-\n"
      "d1\t1\tb\t-\t-\t-\n"
      "d1\t2\tc\t-\t1)\t-\n"
      "\n"
      "#end document\n");
  CHECK(c.documents[0].gold_clusters->clusters == std::vector<Cluster>{{{0, 2}}});
  CHECK_FALSE(c.documents[0].sentences[0].speaker.has_value());
}

TEST_CASE("nested mentions with distinct ids are both retained") {
  const std::string lines =
      "#begin document d1\n"
      "d1\t0\ta\t-\t(1|(2\t-\n"
      "d1\t1\tb\t-\t2)\t-\n"
      "d1\t2\tc\t-\t1)\t-\n"
      "\n"
      "#end document\n";
  Corpus c = parse_ua(lines);

  // independent oracle: regex-free hand matcher over the same column
  std::map<int, std::vector<int>> opens;
  std::map<int, std::vector<Span>> spans;
  const std::vector<std::pair<int, std::string>> rows = {{0, "(1|(2"}, {1, "2)"}, {2, "1)"}};
  for (const auto& [tok, field] : rows) {
    std::istringstream ss(field);
    std::string item;
    while (std::getline(ss, item, '|')) {
      if (item.front() == '(' && item.back() == ')')
        spans[std::stoi(item.substr(1, item.size() - 2))].push_back({tok, tok});
      else if (item.front() == '(')
        opens[std::stoi(item.substr(1))].push_back(tok);
      else {
        int id = std::stoi(item.substr(0, item.size() - 1));
        spans[id].push_back({opens[id].back(), tok});
        opens[id].pop_back();
      }
    }
  }
  ClusterSet expected;
  for (auto& [id, sp] : spans) expected.clusters.push_back(sp);
  expected.normalize();

  CHECK(*c.documents[0].gold_clusters == expected);
  CHECK(c.documents[0].gold_clusters->clusters.size() == 2);
}

TEST_CASE("same id may nest via LIFO matching") {
  Corpus c = parse_ua(
      "#begin document d1\n"
      "d1\t0\ta\t-\t(7\t-\n"
      "d1\t1\tb\t-\t(7\t-\n"
      "d1\t2\tc\t-\t7)|7)\t-\n"
      "\n"
      "#end document\n");
  CHECK(c.documents[0].gold_clusters->clusters == std::vector<Cluster>{{{0, 2}, {1, 2}}});
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_ua("#begin document d1\n"
                                "d1\t0\ta\t-\t(1\t-\n"
                                "\n"
                                "#end document\n"),
                       doctest::Contains("unbalanced"), ParseError);
  CHECK_THROWS_AS(parse_ua("#begin document d1\n"
                           "d1\t0\ta\t-\t1)\t-\n"
                           "\n"
                           "#end document\n"),
                  ParseError);
  // duplicate doc ids
  CHECK_THROWS_AS(parse_ua("#begin document d1\n"
                           "d1\t0\ta\t-\t-\t-\n"
                           "\n"
                           "#end document\n"
                           "#begin document d1\n"
                           "d1\t0\ta\t-\t-\t-\n"
                           "\n"
                           "#end document\n"),
                  ParseError);
  // token index discontinuity
  CHECK_THROWS_AS(parse_ua("#begin document d1\n"
                           "d1\t0\ta\t-\t-\t-\n"
                           "d1\t2\tb\t-\t-\t-\n"
                           "\n"
                           "#end document\n"),
                  ParseError);
}

TEST_CASE("non-referring column goes to the non-referring layer") {
  Corpus c = parse_ua(
      "#begin document d1\n"
      "d1\t0\tmaybe\t-\t-\t(1)\n"
      "d1\t1\tJohn\t-\t(1)\t-\n"
      "\n"
      "#end document\n");
  CHECK(c.documents[0].non_referring == std::vector<Span>{{0, 0}});
  CHECK(c.documents[0].gold_clusters->clusters == std::vector<Cluster>{{{1, 1}}});
}

TEST_CASE("doc_id is the begin-line remainder, bit-exact") {
  Corpus c = parse_ua(
      "#begin document (trains_93); part 012\n"
      "x\t0\ta\t-\t-\t-\n"
      "\n"
      "#end document\n");
  CHECK(c.documents[0].doc_id == "(trains_93); part 012");
}

TEST_CASE("empty corpus serializes to nothing and parses back") {
  Corpus empty{"e", FormatTag::UA, {}};
  CHECK(serialize_ua(empty).empty());
  CHECK(parse_ua("").documents.empty());
}

TEST_CASE("column round-trip on random corpora, both formats") {
  std::mt19937_64 rng(42);
  for (FormatTag tag : {FormatTag::UA, FormatTag::CONLL}) {
    const ColumnSchema schema = ColumnSchema::for_tag(tag);
    for (int it = 0; it < 100; ++it) {
      Corpus corpus = testing::random_corpus(rng, 3, tag);
      std::ostringstream out;
      serialize_columns(corpus, schema, out);
      std::istringstream in(out.str());
      Corpus back = parse_columns(in, schema, corpus.name);
      CHECK(back == corpus);
    }
  }
}

TEST_CASE("interchange round-trip including non-referring and absent gold") {
  std::mt19937_64 rng(43);
  for (int it = 0; it < 100; ++it) {
    Corpus corpus = testing::random_corpus(rng, 3, FormatTag::UA);
    Corpus back = from_interchange(to_interchange(corpus));
    CHECK(back == corpus);
  }
}

TEST_CASE("interchange rejects version mismatch") {
  std::mt19937_64 rng(1);
  Corpus corpus = testing::random_corpus(rng, 1, FormatTag::UA);
  std::string text = to_interchange(corpus);
  auto pos = text.find("\"version\": 1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 12, "\"version\": 9");
  CHECK_THROWS_WITH_AS(from_interchange(text), doctest::Contains("version"), Error);
}

TEST_CASE("hand-written minimal interchange file") {
  const std::string text = R"({
    "format": "uacoref-interchange", "version": 1, "name": "mini", "format_tag": "UA",
    "documents": [{
      "doc_id": "m0", "is_dialogue": true,
      "sentences": [{"speaker": "A", "tokens": ["hi", "there"]}],
      "gold_clusters": [[[0, 0]]],
      "non_referring": [[1, 1]]
    }]})";
  Corpus c = from_interchange(text);
  REQUIRE(c.documents.size() == 1);
  CHECK(c.documents[0].doc_id == "m0");
  CHECK(c.documents[0].tokens.size() == 2);
  CHECK(c.documents[0].gold_clusters->clusters.size() == 1);
  CHECK(c.documents[0].non_referring.size() == 1);
}

TEST_CASE("serializing to CONLL drops non-referring with a count") {
  Document doc = testing::make_doc("d", {{"a", "b"}});
  doc.gold_clusters = testing::clusters({{{0, 0}}});
  doc.non_referring = {{1, 1}};
  Corpus corpus{"c", FormatTag::CONLL, {doc}};
  std::ostringstream out;
  SerializeStats st = serialize_columns(corpus, ColumnSchema::conll(), out);
  CHECK(st.dropped_non_referring == 1);
}

TEST_CASE("serialize rejects out-of-bounds spans") {
  Document doc = testing::make_doc("d", {{"a"}});
  ClusterSet bad;
  bad.clusters = {{{0, 3}}};
  doc.gold_clusters = bad;
  Corpus corpus{"c", FormatTag::UA, {doc}};
  std::ostringstream out;
  CHECK_THROWS_AS(serialize_columns(corpus, ColumnSchema::ua(), out), Error);
}

TEST_CASE("cluster id to cluster mapping preserves mention count") {
  std::mt19937_64 rng(77);
  for (int it = 0; it < 30; ++it) {
    Corpus corpus = testing::random_corpus(rng, 2, FormatTag::UA);
    std::ostringstream out;
    serialize_columns(corpus, ColumnSchema::ua(), out);
    std::istringstream in(out.str());
    Corpus back = parse_columns(in, ColumnSchema::ua(), corpus.name);
    for (size_t d = 0; d < corpus.documents.size(); ++d) {
      const auto& orig = corpus.documents[d].gold_clusters;
      const auto& rt = back.documents[d].gold_clusters;
      CHECK(orig.has_value() == rt.has_value());
      if (orig && rt) CHECK(orig->mention_count() == rt->mention_count());
    }
  }
}
