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

#ifndef UACOREF_SYNTHETIC_HPP_
#define UACOREF_SYNTHETIC_HPP_

#include <cstdint>
#include <string>

#include "coref/types.hpp"

namespace coref {

// Generator for synthetic gold-annotated dialogues with deterministic
// coreference rules: name tokens corefer by string identity, first-person
// pronouns (I/me) corefer with the sentence speaker, "you" corefers with
// the previous sentence's speaker, adverbs and verbs are non-mentions.
struct SyntheticConfig {
  int num_docs = 200;
  int min_sentences = 8;
  int max_sentences = 11;
  double p_three_speakers = 0.6;   // else two speakers
  double p_pronoun_subject = 0.35;
  double p_pronoun_object = 0.35;
  double p_adverb = 0.5;
  // name slots: speaker name / recurring extra / fresh once-only name
  double p_speaker_name_mention = 0.12;
  double p_recurring_name = 0.3;
  uint64_t seed = 7;
  std::string doc_prefix = "syn";
};

Corpus make_synthetic_dialogues(const SyntheticConfig& cfg);

}  // namespace coref

#endif  // UACOREF_SYNTHETIC_HPP_
