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

#ifndef UACOREF_TYPES_HPP_
#define UACOREF_TYPES_HPP_

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coref {

// Base error type for the whole toolkit. Parsers raise ParseError with a
// line number; everything else uses Error directly.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
  ParseError(const std::string& msg, int line_no)
      : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
  int line = 0;
};

// Token-index interval, inclusive on both ends.
struct Span {
  int start = 0;
  int end = 0;
  auto operator<=>(const Span&) const = default;
};

inline int width(Span s) { return s.end - s.start + 1; }

struct Token {
  std::string text;
  int index = 0;  // 0-based position within the document
  bool operator==(const Token&) const = default;
};

// Inclusive start, exclusive end, in document token indices.
struct Sentence {
  int start = 0;
  int end = 0;
  std::optional<std::string> speaker;  // absent when unknown
  bool operator==(const Sentence&) const = default;
};

using Cluster = std::vector<Span>;

// Partition of a mention subset into entity clusters; singletons allowed.
struct ClusterSet {
  std::vector<Cluster> clusters;

  // Sorts spans within clusters and clusters among themselves, giving a
  // canonical form so value equality is meaningful.
  void normalize();
  int mention_count() const;
  int singleton_count() const;

  bool operator==(const ClusterSet&) const = default;
};

struct Document {
  std::string doc_id;
  std::vector<Token> tokens;
  std::vector<Sentence> sentences;
  bool is_dialogue = false;
  std::optional<ClusterSet> gold_clusters;
  std::vector<Span> non_referring;  // sorted, unique

  int num_tokens() const { return static_cast<int>(tokens.size()); }
  // Index of the sentence containing token t; throws if out of range.
  int sentence_of(int t) const;
  // Checks the structural invariants (contiguous indices, sentence tiling,
  // spans in bounds, gold/non-referring disjoint); throws Error on violation.
  void validate() const;

  bool operator==(const Document&) const = default;
};

enum class FormatTag { UA, CONLL };

std::string_view to_string(FormatTag tag);
FormatTag format_tag_from_string(std::string_view s);

struct Corpus {
  std::string name;
  FormatTag format_tag = FormatTag::UA;
  std::vector<Document> documents;

  void validate() const;  // per-document invariants + unique doc_ids
  bool operator==(const Corpus&) const = default;
};

// Canonical candidate ordering: ascending by start, ties by end.
// Input treated as a set (duplicates removed).
std::vector<Span> candidate_order(std::vector<Span> spans);

struct CorpusStats {
  int documents = 0;
  int mentions = 0;
  int clusters = 0;
  int singletons = 0;
  double singleton_pct = 0.0;  // singletons / clusters, 0 when no clusters
  int pronoun_mentions = 0;    // width-1 mentions from the personal-pronoun list
  double avg_speakers = 0.0;   // distinct known speakers per document, averaged
};

// Gold-annotation statistics; throws Error when any document lacks gold.
CorpusStats corpus_stats(const Corpus& corpus);

// Injected speaker tokens look like "[SPK3]".
bool is_speaker_token(std::string_view text);
// Closed personal-pronoun list (case-insensitive): I, me, my, mine, you,
// your, yours, he, him, his, she, her, hers, we, us, our, ours, they,
// them, their, theirs, it, its.
bool is_personal_pronoun(std::string_view text);

}  // namespace coref

#endif  // UACOREF_TYPES_HPP_
