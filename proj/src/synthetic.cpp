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

#include "coref/synthetic.hpp"

#include <algorithm>
#include <map>

#include "coref/rng.hpp"

namespace coref {
namespace {

const char* kNames[] = {"Alice",  "Bob",    "Carol",  "David",  "Emma",   "Frank",  "Grace",
                        "Henry",  "Irene",  "Jack",   "Karen",  "Leo",    "Mina",   "Nathan",
                        "Olivia", "Peter",  "Rachel", "Sam",    "Tina",   "Victor", "Wendy",
                        "Yara",   "Zoe",    "Adam",   "Bella",  "Cyrus",  "Dora",   "Elias",
                        "Fiona",  "Gus",    "Hana",   "Ivan",   "Jade",   "Kurt",   "Lena",
                        "Marco",  "Nora",   "Oscar",  "Pia",    "Quinn"};
const char* kVerbs[] = {"likes", "knows", "sees", "meets", "calls", "helps", "trusts", "misses"};
const char* kAdverbs[] = {"really", "quickly", "slowly", "often",   "maybe",
                          "again",  "here",    "now",    "clearly", "soon"};

struct Slot {
  std::string text;
  int entity = -1;  // -1 = non-mention
};

}  // namespace

Corpus make_synthetic_dialogues(const SyntheticConfig& cfg) {
  Corpus corpus;
  corpus.name = cfg.doc_prefix;
  corpus.format_tag = FormatTag::UA;

  for (int doc_idx = 0; doc_idx < cfg.num_docs; ++doc_idx) {
    std::mt19937_64 rng = make_rng(cfg.seed, "synthetic-doc", static_cast<uint64_t>(doc_idx));
    auto chance = [&](double p) { return std::uniform_real_distribution<>(0, 1)(rng) < p; };
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };

    // Entities: speakers, a couple of recurring extras, then a supply of
    // names each used at most once (the singleton clusters).
    const int num_speakers = chance(cfg.p_three_speakers) ? 3 : 2;
    const int num_recurring = 2 + pick(2);  // 2..3
    std::vector<int> name_pool(std::size(kNames));
    for (size_t i = 0; i < name_pool.size(); ++i) name_pool[i] = static_cast<int>(i);
    std::shuffle(name_pool.begin(), name_pool.end(), rng);

    // entity e: [0, num_speakers) speakers, then recurring, then fresh names
    int next_entity = num_speakers + num_recurring;
    auto entity_name = [&](int e) { return std::string(kNames[name_pool[e]]); };

    const int num_sentences =
        cfg.min_sentences + pick(cfg.max_sentences - cfg.min_sentences + 1);
    // no immediate repetition, so "you" always addresses the previous speaker
    std::vector<int> turn(num_sentences);
    turn[0] = pick(num_speakers);
    for (int s = 1; s < num_sentences; ++s) {
      int next = pick(num_speakers - 1);
      if (next >= turn[s - 1]) ++next;
      turn[s] = next;
    }

    auto pick_name_entity = [&]() {
      const double r = std::uniform_real_distribution<>(0, 1)(rng);
      if (r < cfg.p_speaker_name_mention) return pick(num_speakers);
      if (r < cfg.p_speaker_name_mention + cfg.p_recurring_name)
        return num_speakers + pick(num_recurring);
      if (next_entity < static_cast<int>(name_pool.size())) return next_entity++;
      return num_speakers + pick(num_recurring);
    };

    Document doc;
    doc.doc_id = cfg.doc_prefix + "_" + std::to_string(doc_idx);
    doc.is_dialogue = true;
    std::map<int, Cluster> clusters;  // entity -> mention spans

    for (int s = 0; s < num_sentences; ++s) {
      std::vector<Slot> slots;
      if (chance(cfg.p_pronoun_subject)) {
        slots.push_back({"I", turn[s]});
      } else {
        const int e = pick_name_entity();
        slots.push_back({entity_name(e), e});
      }
      slots.push_back({kVerbs[pick(std::size(kVerbs))], -1});
      if (chance(cfg.p_pronoun_object)) {
        if (s > 0 && chance(0.5)) {
          slots.push_back({"you", turn[s - 1]});
        } else {
          slots.push_back({"me", turn[s]});
        }
      } else {
        const int e = pick_name_entity();
        slots.push_back({entity_name(e), e});
      }
      if (chance(cfg.p_adverb)) slots.push_back({kAdverbs[pick(std::size(kAdverbs))], -1});
      slots.push_back({".", -1});

      Sentence sent;
      sent.start = doc.num_tokens();
      sent.speaker = entity_name(turn[s]);
      for (const Slot& slot : slots) {
        const int t = doc.num_tokens();
        doc.tokens.push_back({slot.text, t});
        if (slot.entity >= 0) clusters[slot.entity].push_back({t, t});
      }
      sent.end = doc.num_tokens();
      doc.sentences.push_back(std::move(sent));
    }

    ClusterSet gold;
    for (auto& [entity, spans] : clusters) gold.clusters.push_back(std::move(spans));
    gold.normalize();
    doc.gold_clusters = std::move(gold);
    doc.validate();
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace coref
