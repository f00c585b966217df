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

#ifndef UACOREF_FORMAT_HPP_
#define UACOREF_FORMAT_HPP_

#include <iosfwd>
#include <string>

#include "coref/types.hpp"

namespace coref {

// Column layout of a CoNLL-style file. Positions are 0-based; -1 marks an
// absent column. Documents are delimited by "#begin document <doc_id>" /
// "#end document" lines; sentences are separated by blank lines. The
// serializer also emits one "#meta dialogue=<0|1> gold=<0|1>" line per
// document so that the dialogue flag and the presence of gold annotation
// survive a round trip; the parser falls back to schema defaults when the
// line is missing.
struct ColumnSchema {
  FormatTag tag = FormatTag::UA;
  int col_doc_id = 0;
  int col_token_index = 1;
  int col_token_text = 2;
  int col_speaker = 3;
  int col_coref = 4;
  int col_non_referring = 5;  // UA only
  bool default_is_dialogue = true;

  int column_count() const;
  static ColumnSchema ua();
  static ColumnSchema conll();
  static ColumnSchema for_tag(FormatTag tag);
};

struct SerializeStats {
  int dropped_non_referring = 0;  // spans the target schema could not carry
};

Corpus parse_columns(std::istream& in, const ColumnSchema& schema,
                     const std::string& corpus_name = "");
SerializeStats serialize_columns(const Corpus& corpus, const ColumnSchema& schema,
                                 std::ostream& out);

// Lossless JSON interchange: carries every Document field including
// is_dialogue, gold presence and non-referring spans.
std::string to_interchange(const Corpus& corpus);
Corpus from_interchange(const std::string& text);

// File helpers. Format is chosen by extension when `format` is "auto":
// .json -> interchange, otherwise the column format named by `format`
// ("ua" or "conll").
Corpus load_corpus(const std::string& path, const std::string& format = "auto");
SerializeStats save_corpus(const Corpus& corpus, const std::string& path,
                           const std::string& format = "auto");

}  // namespace coref

#endif  // UACOREF_FORMAT_HPP_
