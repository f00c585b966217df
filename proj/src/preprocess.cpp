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

#include "coref/preprocess.hpp"

#include <algorithm>
#include <numeric>

namespace coref {

Document strip_non_referring(Document doc) {
  doc.non_referring.clear();
  return doc;
}

const std::string* SpeakerVocabulary::token_for(const std::string& label) const {
  for (const auto& [lab, tok] : items)
    if (lab == label) return &tok;
  return nullptr;
}

std::string SpeakerVocabulary::add(const std::string& label) {
  if (const std::string* tok = token_for(label)) return *tok;
  std::string tok = "[SPK" + std::to_string(items.size() + 1) + "]";
  items.emplace_back(label, tok);
  return tok;
}

namespace {

// Number of injected positions <= t (for shifting augmented index t back).
int inserted_before(const std::vector<int>& inserted, int t) {
  return static_cast<int>(std::upper_bound(inserted.begin(), inserted.end(), t) - inserted.begin());
}

}  // namespace

AugmentResult augment_speakers(const Document& doc) {
  AugmentResult res;
  res.doc.doc_id = doc.doc_id;
  res.doc.is_dialogue = doc.is_dialogue;

  // shift[t] = new index of original token t
  std::vector<int> shift(doc.tokens.size());
  for (const Sentence& sent : doc.sentences) {
    Sentence out = sent;
    out.start = res.doc.num_tokens();
    if (sent.speaker) {
      std::string tok = res.vocab.add(*sent.speaker);
      res.inserted_positions.push_back(res.doc.num_tokens());
      res.doc.tokens.push_back({tok, res.doc.num_tokens()});
    }
    for (int t = sent.start; t < sent.end; ++t) {
      shift[t] = res.doc.num_tokens();
      res.doc.tokens.push_back({doc.tokens[t].text, res.doc.num_tokens()});
    }
    out.end = res.doc.num_tokens();
    res.doc.sentences.push_back(out);
  }

  auto shift_span = [&](Span sp) { return Span{shift[sp.start], shift[sp.end]}; };
  if (doc.gold_clusters) {
    ClusterSet cs;
    for (const Cluster& c : doc.gold_clusters->clusters) {
      Cluster out;
      for (Span sp : c) out.push_back(shift_span(sp));
      cs.clusters.push_back(std::move(out));
    }
    cs.normalize();
    res.doc.gold_clusters = std::move(cs);
  }
  for (Span sp : doc.non_referring) res.doc.non_referring.push_back(shift_span(sp));
  res.doc.non_referring = candidate_order(std::move(res.doc.non_referring));
  res.doc.validate();
  return res;
}

std::vector<Span> unshift_spans(std::span<const Span> spans,
                                const std::vector<int>& inserted_positions) {
  std::vector<Span> out;
  out.reserve(spans.size());
  for (Span sp : spans) {
    if (std::binary_search(inserted_positions.begin(), inserted_positions.end(), sp.start) ||
        std::binary_search(inserted_positions.begin(), inserted_positions.end(), sp.end))
      throw Error("cannot unshift a span anchored on an injected speaker token");
    out.push_back({sp.start - inserted_before(inserted_positions, sp.start),
                   sp.end - inserted_before(inserted_positions, sp.end)});
  }
  return out;
}

Document remove_speaker_tokens(const Document& doc, const std::vector<int>& inserted_positions) {
  Document out;
  out.doc_id = doc.doc_id;
  out.is_dialogue = doc.is_dialogue;
  for (const Sentence& sent : doc.sentences) {
    Sentence s = sent;
    s.start = out.num_tokens();
    for (int t = sent.start; t < sent.end; ++t) {
      if (std::binary_search(inserted_positions.begin(), inserted_positions.end(), t)) continue;
      out.tokens.push_back({doc.tokens[t].text, out.num_tokens()});
    }
    s.end = out.num_tokens();
    out.sentences.push_back(s);
  }
  if (doc.gold_clusters) {
    ClusterSet cs;
    for (const Cluster& c : doc.gold_clusters->clusters) {
      std::vector<Span> shifted = unshift_spans(c, inserted_positions);
      cs.clusters.emplace_back(shifted.begin(), shifted.end());
    }
    cs.normalize();
    out.gold_clusters = std::move(cs);
  }
  out.non_referring = candidate_order(unshift_spans(doc.non_referring, inserted_positions));
  out.validate();
  return out;
}

SplitResult split_document(const Document& doc, int max_segment_tokens, int max_segments) {
  if (max_segments < 1) throw Error("split_document: max_segments must be >= 1");
  for (const Sentence& s : doc.sentences)
    if (s.end - s.start > max_segment_tokens)
      throw Error(doc.doc_id + ": sentence longer than max_segment_tokens (" +
                  std::to_string(s.end - s.start) + " > " + std::to_string(max_segment_tokens) + ")");

  const int num_sents = static_cast<int>(doc.sentences.size());

  // Atoms are maximal sentence runs glued together by gold mentions that
  // cross a sentence boundary; a segment boundary never cuts an atom, which
  // keeps every mention inside one segment.
  std::vector<int> atom_end(num_sents);  // index of last sentence in this atom
  std::iota(atom_end.begin(), atom_end.end(), 0);
  auto spans_of = [&](auto&& fn) {
    if (doc.gold_clusters)
      for (const Cluster& c : doc.gold_clusters->clusters)
        for (Span sp : c) fn(sp);
    for (Span sp : doc.non_referring) fn(sp);
  };
  spans_of([&](Span sp) {
    int a = doc.sentence_of(sp.start), b = doc.sentence_of(sp.end);
    for (int s = a; s < b; ++s) atom_end[s] = std::max(atom_end[s], b);
  });
  for (int s = num_sents - 2; s >= 0; --s)
    if (atom_end[s] > s) atom_end[s] = std::max(atom_end[s], atom_end[atom_end[s]]);

  // Greedy packing of whole atoms into segments.
  std::vector<int> segment_first_sent;  // per segment
  {
    int s = 0;
    while (s < num_sents) {
      segment_first_sent.push_back(s);
      int seg_tokens = 0;
      while (s < num_sents) {
        int last = atom_end[s];
        int atom_tokens = doc.sentences[last].end - doc.sentences[s].start;
        if (seg_tokens > 0 && seg_tokens + atom_tokens > max_segment_tokens) break;
        if (seg_tokens == 0 && atom_tokens > max_segment_tokens)
          throw Error(doc.doc_id + ": gold mention run longer than max_segment_tokens");
        seg_tokens += atom_tokens;
        s = last + 1;
      }
    }
  }

  SplitResult res;
  const int num_segments = static_cast<int>(segment_first_sent.size());
  std::vector<int> split_cluster_ids;
  for (int g = 0; g < num_segments; g += max_segments) {
    int first_sent = segment_first_sent[g];
    int next_g = std::min(g + max_segments, num_segments);
    int end_sent = next_g < num_segments ? segment_first_sent[next_g] : num_sents;
    int tok_begin = doc.sentences[first_sent].start;
    int tok_end = doc.sentences[end_sent - 1].end;

    Document child;
    child.doc_id = num_segments <= max_segments
                       ? doc.doc_id
                       : doc.doc_id + "#" + std::to_string(res.children.size());
    child.is_dialogue = doc.is_dialogue;
    for (int t = tok_begin; t < tok_end; ++t)
      child.tokens.push_back({doc.tokens[t].text, t - tok_begin});
    for (int s = first_sent; s < end_sent; ++s) {
      const Sentence& sent = doc.sentences[s];
      child.sentences.push_back({sent.start - tok_begin, sent.end - tok_begin, sent.speaker});
    }
    if (doc.gold_clusters) {
      ClusterSet cs;
      for (int ci = 0; ci < static_cast<int>(doc.gold_clusters->clusters.size()); ++ci) {
        const Cluster& c = doc.gold_clusters->clusters[ci];
        Cluster kept;
        for (Span sp : c)
          if (sp.start >= tok_begin && sp.end < tok_end)
            kept.push_back({sp.start - tok_begin, sp.end - tok_begin});
        if (!kept.empty()) {
          if (kept.size() < c.size()) split_cluster_ids.push_back(ci);
          cs.clusters.push_back(std::move(kept));
        }
      }
      cs.normalize();
      child.gold_clusters = std::move(cs);
    }
    for (Span sp : doc.non_referring)
      if (sp.start >= tok_begin && sp.end < tok_end)
        child.non_referring.push_back({sp.start - tok_begin, sp.end - tok_begin});
    child.validate();
    res.children.push_back(std::move(child));
    res.token_offsets.push_back(tok_begin);
  }
  std::sort(split_cluster_ids.begin(), split_cluster_ids.end());
  res.split_clusters = static_cast<int>(
      std::unique(split_cluster_ids.begin(), split_cluster_ids.end()) - split_cluster_ids.begin());
  return res;
}

std::string_view to_string(TransferMode mode) {
  switch (mode) {
    case TransferMode::UAD_ONLY: return "uad";
    case TransferMode::MIX: return "mix";
    case TransferMode::PRETRAIN_ADAPT: return "pretrain";
  }
  return "uad";
}

TransferMode transfer_mode_from_string(std::string_view s) {
  if (s == "uad" || s == "uad_only") return TransferMode::UAD_ONLY;
  if (s == "mix") return TransferMode::MIX;
  if (s == "pretrain" || s == "pretrain_adapt") return TransferMode::PRETRAIN_ADAPT;
  throw Error("unknown transfer mode: " + std::string(s));
}

TrainingSchedule build_schedule(const std::vector<Corpus>& uad, const std::vector<Corpus>& od,
                                TransferMode mode, int epochs) {
  size_t uad_docs = 0;
  for (const Corpus& c : uad) uad_docs += c.documents.size();
  if (uad_docs == 0) throw Error("build_schedule: UAD corpus set is empty");
  if (epochs < 1) throw Error("build_schedule: epochs must be >= 1");

  auto collect = [](const std::vector<Corpus>& sets, std::vector<Document>& out) {
    for (const Corpus& c : sets)
      for (const Document& d : c.documents) out.push_back(d);
  };

  TrainingSchedule sched;
  sched.mode = mode;
  switch (mode) {
    case TransferMode::UAD_ONLY: {
      TrainingSchedule::Phase p{"uad", {}, epochs};
      collect(uad, p.documents);
      sched.phases.push_back(std::move(p));
      break;
    }
    case TransferMode::MIX: {
      TrainingSchedule::Phase p{"mix", {}, epochs};
      collect(od, p.documents);
      collect(uad, p.documents);
      sched.phases.push_back(std::move(p));
      break;
    }
    case TransferMode::PRETRAIN_ADAPT: {
      size_t od_docs = 0;
      for (const Corpus& c : od) od_docs += c.documents.size();
      if (od_docs == 0) throw Error("build_schedule: pretrain mode requires OD documents");
      TrainingSchedule::Phase pre{"od-pretrain", {}, epochs};
      collect(od, pre.documents);
      TrainingSchedule::Phase adapt{"uad-adapt", {}, epochs};
      collect(uad, adapt.documents);
      sched.phases.push_back(std::move(pre));
      sched.phases.push_back(std::move(adapt));
      break;
    }
  }
  return sched;
}

}  // namespace coref
