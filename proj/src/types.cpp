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

#include "coref/types.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

namespace coref {

void ClusterSet::normalize() {
  for (auto& c : clusters) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::sort(clusters.begin(), clusters.end());
}

int ClusterSet::mention_count() const {
  int n = 0;
  for (const auto& c : clusters) n += static_cast<int>(c.size());
  return n;
}

int ClusterSet::singleton_count() const {
  int n = 0;
  for (const auto& c : clusters)
    if (c.size() == 1) ++n;
  return n;
}

int Document::sentence_of(int t) const {
  for (int i = 0; i < static_cast<int>(sentences.size()); ++i)
    if (t >= sentences[i].start && t < sentences[i].end) return i;
  throw Error("token index " + std::to_string(t) + " outside every sentence in " + doc_id);
}

void Document::validate() const {
  const int t_count = num_tokens();
  for (int i = 0; i < t_count; ++i) {
    if (tokens[i].text.empty()) throw Error(doc_id + ": empty token text at " + std::to_string(i));
    if (tokens[i].index != i) throw Error(doc_id + ": token index discontinuity at " + std::to_string(i));
  }
  int pos = 0;
  for (const auto& s : sentences) {
    if (s.start != pos || s.end <= s.start)
      throw Error(doc_id + ": sentences must tile the document");
    pos = s.end;
  }
  if (pos != t_count) throw Error(doc_id + ": sentences do not cover all tokens");

  auto check_span = [&](Span sp) {
    if (sp.start < 0 || sp.end < sp.start || sp.end >= t_count)
      throw Error(doc_id + ": span (" + std::to_string(sp.start) + "," +
                  std::to_string(sp.end) + ") out of bounds");
  };
  std::set<Span> in_clusters;
  if (gold_clusters) {
    for (const auto& c : gold_clusters->clusters) {
      if (c.empty()) throw Error(doc_id + ": empty gold cluster");
      for (Span sp : c) {
        check_span(sp);
        if (!in_clusters.insert(sp).second)
          throw Error(doc_id + ": mention span appears in two clusters");
      }
    }
  }
  for (Span sp : non_referring) {
    check_span(sp);
    if (in_clusters.count(sp))
      throw Error(doc_id + ": span is both gold mention and non-referring");
  }
}

std::string_view to_string(FormatTag tag) {
  return tag == FormatTag::UA ? "UA" : "CONLL";
}

FormatTag format_tag_from_string(std::string_view s) {
  if (s == "UA") return FormatTag::UA;
  if (s == "CONLL") return FormatTag::CONLL;
  throw Error("unknown format tag: " + std::string(s));
}

void Corpus::validate() const {
  std::unordered_set<std::string> ids;
  for (const auto& d : documents) {
    d.validate();
    if (!ids.insert(d.doc_id).second) throw Error("duplicate doc_id: " + d.doc_id);
  }
}

std::vector<Span> candidate_order(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end());
  spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
  return spans;
}

bool is_speaker_token(std::string_view text) {
  if (text.size() < 6 || text.substr(0, 4) != "[SPK" || text.back() != ']') return false;
  for (size_t i = 4; i + 1 < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  return true;
}

bool is_personal_pronoun(std::string_view text) {
  static const std::set<std::string> kPronouns = {
      "i",  "me",  "my",  "mine",  "you",  "your",  "yours", "he",
      "him", "his", "she", "her",   "hers", "we",    "us",    "our",
      "ours", "they", "them", "their", "theirs", "it", "its"};
  std::string lower;
  lower.reserve(text.size());
  for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  return kPronouns.count(lower) > 0;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats st;
  st.documents = static_cast<int>(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    if (!doc.gold_clusters)
      throw Error("corpus_stats: document " + doc.doc_id + " has no gold annotation");
    for (const auto& c : doc.gold_clusters->clusters) {
      ++st.clusters;
      if (c.size() == 1) ++st.singletons;
      for (Span sp : c) {
        ++st.mentions;
        if (sp.start == sp.end && is_personal_pronoun(doc.tokens[sp.start].text))
          ++st.pronoun_mentions;
      }
    }
    std::set<std::string> speakers;
    for (const auto& s : doc.sentences)
      if (s.speaker) speakers.insert(*s.speaker);
    st.avg_speakers += static_cast<double>(speakers.size());
  }
  if (st.documents > 0) st.avg_speakers /= st.documents;
  st.singleton_pct = st.clusters > 0 ? 100.0 * st.singletons / st.clusters : 0.0;
  return st;
}

}  // namespace coref
