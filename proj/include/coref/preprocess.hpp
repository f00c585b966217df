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

#ifndef UACOREF_PREPROCESS_HPP_
#define UACOREF_PREPROCESS_HPP_

#include <span>
#include <string>
#include <vector>

#include "coref/types.hpp"

namespace coref {

// Drops the non-referring layer; those spans become plain non-mentions.
Document strip_non_referring(Document doc);

// Speaker label -> "[SPKk]" token, k assigned by order of first appearance.
struct SpeakerVocabulary {
  std::vector<std::pair<std::string, std::string>> items;

  const std::string* token_for(const std::string& label) const;
  std::string add(const std::string& label);  // returns the (possibly new) token
  size_t size() const { return items.size(); }
};

struct AugmentResult {
  Document doc;
  SpeakerVocabulary vocab;
  // Positions of injected tokens, in augmented-document indices, ascending.
  std::vector<int> inserted_positions;
};

// Prepends one speaker token to every sentence with a known speaker and
// shifts all annotation spans so they stay anchored to their tokens.
AugmentResult augment_speakers(const Document& doc);

// Maps spans from augmented token space back to the original document.
// Spans that touch an injected token are rejected with Error.
std::vector<Span> unshift_spans(std::span<const Span> spans,
                                const std::vector<int>& inserted_positions);
// Inverse of augment_speakers (used by tests and prediction output).
Document remove_speaker_tokens(const Document& doc,
                               const std::vector<int>& inserted_positions);

struct SplitResult {
  std::vector<Document> children;
  std::vector<int> token_offsets;  // child token 0 = parent token offset[i]
  int split_clusters = 0;          // gold clusters that lost cross-child links
};

// Splits a long document into segments along sentence boundaries (greedy
// packing), then groups segments max_segments at a time into child
// documents. Gold clusters are restricted to each child.
SplitResult split_document(const Document& doc, int max_segment_tokens, int max_segments);

enum class TransferMode { UAD_ONLY, MIX, PRETRAIN_ADAPT };

std::string_view to_string(TransferMode mode);
TransferMode transfer_mode_from_string(std::string_view s);

struct TrainingSchedule {
  struct Phase {
    std::string name;
    std::vector<Document> documents;
    int epochs = 0;
  };
  TransferMode mode = TransferMode::UAD_ONLY;
  std::vector<Phase> phases;
};

// UAD_ONLY -> [(uad, E)]; MIX -> [(uad + od, E)]; PRETRAIN_ADAPT -> [(od, E), (uad, E)].
// Documents within a phase are concatenated; per-epoch shuffling is the
// trainer's job. Empty uad is an error in every mode.
TrainingSchedule build_schedule(const std::vector<Corpus>& uad, const std::vector<Corpus>& od,
                                TransferMode mode, int epochs);

}  // namespace coref

#endif  // UACOREF_PREPROCESS_HPP_
