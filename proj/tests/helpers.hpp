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

#ifndef UACOREF_TESTS_HELPERS_HPP_
#define UACOREF_TESTS_HELPERS_HPP_

#include <random>
#include <set>
#include <string>
#include <vector>

#include "coref/types.hpp"

namespace coref::testing {

// Document with sentences given as token lists; speakers optional ("" =
// unknown).
inline Document make_doc(const std::string& id,
                         const std::vector<std::vector<std::string>>& sents,
                         const std::vector<std::string>& speakers = {},
                         bool is_dialogue = true) {
  Document doc;
  doc.doc_id = id;
  doc.is_dialogue = is_dialogue;
  for (size_t s = 0; s < sents.size(); ++s) {
    Sentence sent;
    sent.start = doc.num_tokens();
    if (s < speakers.size() && !speakers[s].empty()) sent.speaker = speakers[s];
    for (const std::string& w : sents[s]) doc.tokens.push_back({w, doc.num_tokens()});
    sent.end = doc.num_tokens();
    doc.sentences.push_back(sent);
  }
  return doc;
}

inline ClusterSet clusters(std::vector<Cluster> cs) {
  ClusterSet set;
  set.clusters = std::move(cs);
  set.normalize();
  return set;
}

// Random well-formed corpus for round-trip property tests.
inline Corpus random_corpus(std::mt19937_64& rng, int num_docs, FormatTag tag) {
  static const std::vector<std::string> kWords = {"the", "cat",  "dog", "saw",   "ran",  "John",
                                                  "Mary", "big", "hm",  "today", "well", "so"};
  static const std::vector<std::string> kSpeakers = {"A", "B", "C"};
  auto pick = [&rng](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  auto chance = [&rng](double p) {
    return std::uniform_real_distribution<>(0, 1)(rng) < p;
  };

  Corpus corpus;
  corpus.name = "random";
  corpus.format_tag = tag;
  for (int d = 0; d < num_docs; ++d) {
    Document doc;
    doc.doc_id = "doc-" + std::to_string(d);
    doc.is_dialogue = chance(0.5);
    const int num_sents = 1 + pick(4);
    for (int s = 0; s < num_sents; ++s) {
      Sentence sent;
      sent.start = doc.num_tokens();
      if (chance(0.5)) sent.speaker = kSpeakers[pick(static_cast<int>(kSpeakers.size()))];
      const int len = 1 + pick(6);
      for (int t = 0; t < len; ++t)
        doc.tokens.push_back({kWords[pick(static_cast<int>(kWords.size()))], doc.num_tokens()});
      sent.end = doc.num_tokens();
      doc.sentences.push_back(sent);
    }
    const int T = doc.num_tokens();

    auto random_span = [&]() {
      int a = pick(T);
      int b = std::min(T - 1, a + pick(3));
      return Span{a, b};
    };
    std::set<Span> used;
    if (chance(0.8)) {
      ClusterSet gold;
      const int num_mentions = pick(std::min(8, T + 1));
      std::vector<Span> mentions;
      for (int m = 0; m < num_mentions; ++m) {
        Span sp = random_span();
        if (used.insert(sp).second) mentions.push_back(sp);
      }
      // random partition; crossing spans may not share a cluster (the
      // bracket annotation cannot express that), so such picks fall back
      // to a fresh cluster
      auto crosses_any = [](const Cluster& c, Span sp) {
        for (Span o : c)
          if ((o.start < sp.start && sp.start <= o.end && o.end < sp.end) ||
              (sp.start < o.start && o.start <= sp.end && sp.end < o.end))
            return true;
        return false;
      };
      std::vector<Cluster> cs;
      for (Span sp : mentions) {
        const int target = cs.empty() ? -1 : pick(static_cast<int>(cs.size()));
        if (target < 0 || chance(0.4) || crosses_any(cs[target], sp))
          cs.push_back({sp});
        else
          cs[target].push_back(sp);
      }
      gold.clusters = std::move(cs);
      gold.normalize();
      doc.gold_clusters = std::move(gold);
    }
    if (tag == FormatTag::UA) {
      const int num_nonref = pick(3);
      std::vector<Span> nonref;
      for (int m = 0; m < num_nonref; ++m) {
        Span sp = random_span();
        if (used.insert(sp).second) nonref.push_back(sp);
      }
      doc.non_referring = candidate_order(std::move(nonref));
    }
    doc.validate();
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace coref::testing

#endif  // UACOREF_TESTS_HELPERS_HPP_
