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

#include "coref/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <json.hpp>

#include "coref/kernels.hpp"
#include "coref/rng.hpp"

namespace coref {

int width_bucket(int w) {
  if (w <= 4) return w - 1;
  if (w <= 7) return 4;
  if (w <= 15) return 5;
  return 6;
}

int distance_bucket(int d) {
  if (d <= 4) return d - 1;
  if (d <= 7) return 4;
  if (d <= 15) return 5;
  if (d <= 31) return 6;
  if (d <= 63) return 7;
  return 8;
}

namespace {

// Portable uniform doubles in [-limit, limit) from a splitmix64 stream.
void fill_uniform(Vec& v, uint64_t seed, double limit) {
  uint64_t state = seed;
  for (double& x : v) {
    state = splitmix64(state);
    x = (static_cast<double>(state >> 11) * 0x1.0p-53 * 2.0 - 1.0) * limit;
  }
}

void glorot_init(Matrix& m, uint64_t seed) {
  fill_uniform(m.a, seed, std::sqrt(6.0 / (m.rows + m.cols)));
}

Ffnn init_ffnn(int in, int hidden, uint64_t seed) {
  Ffnn f;
  f.w1 = Matrix(hidden, in);
  f.b1.assign(hidden, 0.0);
  f.w2 = Matrix(hidden, hidden);
  f.b2.assign(hidden, 0.0);
  f.w_out.assign(hidden, 0.0);
  f.b_out.assign(1, 0.0);
  glorot_init(f.w1, derive_seed(seed, "w1"));
  glorot_init(f.w2, derive_seed(seed, "w2"));
  fill_uniform(f.w_out, derive_seed(seed, "w_out"), std::sqrt(6.0 / (hidden + 1)));
  return f;
}

}  // namespace

Parameters Parameters::init(const ModelConfig& cfg, std::vector<std::string> vocab) {
  Parameters p;
  p.cfg = cfg;
  const uint64_t s = derive_seed(cfg.seed, "params");
  p.att_w.assign(cfg.embed_dim, 0.0);
  fill_uniform(p.att_w, derive_seed(s, "att_w"), std::sqrt(3.0 / cfg.embed_dim));
  p.width_emb = Matrix(kWidthBuckets, cfg.width_emb_dim);
  glorot_init(p.width_emb, derive_seed(s, "width_emb"));
  p.dialogue_emb = Matrix(2, cfg.feature_emb_dim);
  glorot_init(p.dialogue_emb, derive_seed(s, "dialogue_emb"));
  p.speaker_emb = Matrix(kSpeakerFeatures, cfg.feature_emb_dim);
  glorot_init(p.speaker_emb, derive_seed(s, "speaker_emb"));
  p.dist_emb = Matrix(kDistanceBuckets, cfg.feature_emb_dim);
  glorot_init(p.dist_emb, derive_seed(s, "dist_emb"));
  p.mention_ffnn = init_ffnn(cfg.span_dim(), cfg.ffnn_hidden, derive_seed(s, "mention_ffnn"));
  p.pair_ffnn = init_ffnn(cfg.pair_dim(), cfg.ffnn_hidden, derive_seed(s, "pair_ffnn"));

  if (cfg.provider == "learned") {
    p.vocab = std::move(vocab);
    p.token_table = Matrix(static_cast<int>(p.vocab.size()), cfg.embed_dim);
    HashedEmbedding hashed(cfg.embed_dim, cfg.seed);
    for (int r = 0; r < p.token_table.rows; ++r) hashed.lookup(p.vocab[r], p.token_table.row(r));
  }
  return p;
}

Parameters Parameters::zeros_like(const Parameters& src) {
  Parameters p;
  p.cfg = src.cfg;
  p.att_w.assign(src.att_w.size(), 0.0);
  p.width_emb = Matrix(src.width_emb.rows, src.width_emb.cols);
  p.dialogue_emb = Matrix(src.dialogue_emb.rows, src.dialogue_emb.cols);
  p.speaker_emb = Matrix(src.speaker_emb.rows, src.speaker_emb.cols);
  p.dist_emb = Matrix(src.dist_emb.rows, src.dist_emb.cols);
  p.mention_ffnn = coref::zeros_like(src.mention_ffnn);
  p.pair_ffnn = coref::zeros_like(src.pair_ffnn);
  p.vocab = src.vocab;
  p.token_table = Matrix(src.token_table.rows, src.token_table.cols);
  return p;
}

std::vector<TensorRef> Parameters::tensors() {
  std::vector<TensorRef> out = {
      {"att_w", ParamGroup::task, &att_w},
      {"width_emb", ParamGroup::task, &width_emb.a},
      {"dialogue_emb", ParamGroup::task, &dialogue_emb.a},
      {"speaker_emb", ParamGroup::task, &speaker_emb.a},
      {"dist_emb", ParamGroup::task, &dist_emb.a},
      {"mention_ffnn.w1", ParamGroup::task, &mention_ffnn.w1.a},
      {"mention_ffnn.b1", ParamGroup::task, &mention_ffnn.b1},
      {"mention_ffnn.w2", ParamGroup::task, &mention_ffnn.w2.a},
      {"mention_ffnn.b2", ParamGroup::task, &mention_ffnn.b2},
      {"mention_ffnn.w_out", ParamGroup::task, &mention_ffnn.w_out},
      {"mention_ffnn.b_out", ParamGroup::task, &mention_ffnn.b_out},
      {"pair_ffnn.w1", ParamGroup::task, &pair_ffnn.w1.a},
      {"pair_ffnn.b1", ParamGroup::task, &pair_ffnn.b1},
      {"pair_ffnn.w2", ParamGroup::task, &pair_ffnn.w2.a},
      {"pair_ffnn.b2", ParamGroup::task, &pair_ffnn.b2},
      {"pair_ffnn.w_out", ParamGroup::task, &pair_ffnn.w_out},
      {"pair_ffnn.b_out", ParamGroup::task, &pair_ffnn.b_out},
  };
  if (token_table.rows > 0)
    out.push_back({"token_table", ParamGroup::encoder, &token_table.a});
  return out;
}

std::vector<TensorRef> Parameters::tensors() const {
  return const_cast<Parameters*>(this)->tensors();
}

size_t Parameters::parameter_count() const {
  size_t n = 0;
  for (const TensorRef& t : tensors()) n += t.data->size();
  return n;
}

void HashedEmbedding::lookup(std::string_view token, double* out) const {
  uint64_t state = derive_seed(seed_, "token-embed", fnv1a(token));
  const double limit = std::sqrt(3.0 / dim_);
  for (int k = 0; k < dim_; ++k) {
    state = splitmix64(state);
    out[k] = (static_cast<double>(state >> 11) * 0x1.0p-53 * 2.0 - 1.0) * limit;
  }
}

LearnedEmbedding::LearnedEmbedding(const Parameters& params)
    : params_(&params), fallback_(params.cfg.embed_dim, params.cfg.seed) {
  index_.reserve(params.vocab.size());
  for (int r = 0; r < static_cast<int>(params.vocab.size()); ++r)
    index_.emplace_back(params.vocab[r], r);
  std::sort(index_.begin(), index_.end());
}

int LearnedEmbedding::dimension() const { return params_->cfg.embed_dim; }

int LearnedEmbedding::learned_row(std::string_view token) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), token,
                             [](const auto& a, std::string_view b) { return a.first < b; });
  return it != index_.end() && it->first == token ? it->second : -1;
}

void LearnedEmbedding::lookup(std::string_view token, double* out) const {
  const int row = learned_row(token);
  if (row < 0) {
    fallback_.lookup(token, out);
    return;
  }
  const double* src = params_->token_table.row(row);
  std::copy(src, src + params_->cfg.embed_dim, out);
}

std::unique_ptr<EmbeddingProvider> make_provider(const Parameters& params) {
  if (params.cfg.provider == "learned") return std::make_unique<LearnedEmbedding>(params);
  if (params.cfg.provider == "hashed")
    return std::make_unique<HashedEmbedding>(params.cfg.embed_dim, params.cfg.seed);
  throw Error("unknown embedding provider: " + params.cfg.provider);
}

double ScoreTable::antecedent_score(int i, int j) const {
  const int wb = window_begin(i);
  if (j < wb || j >= i) throw Error("antecedent index outside window");
  return antecedent_scores[pair_offsets[i] + (j - wb)];
}

double pair_score(const ScoreTable& table, int i, int j) {
  if (i < 0 || i >= table.size()) throw Error("pair_score: candidate index out of range");
  if (j == kEpsilon) return 0.0;
  if (j >= i) throw Error("pair_score: antecedent must precede the candidate");
  return table.mention_scores[i] + table.mention_scores[j] + table.antecedent_score(i, j);
}

std::string score_table_to_json(const ScoreTable& table, const std::string& doc_id) {
  nlohmann::json j;
  j["doc_id"] = doc_id;
  j["max_antecedents"] = table.max_antecedents;
  nlohmann::json cands = nlohmann::json::array();
  for (Span sp : table.candidates) cands.push_back({sp.start, sp.end});
  j["candidates"] = std::move(cands);
  j["s_m"] = table.mention_scores;
  nlohmann::json pairs = nlohmann::json::array();
  for (int i = 0; i < table.size(); ++i)
    for (int jx = table.window_begin(i); jx < i; ++jx)
      pairs.push_back({i, jx, table.antecedent_score(i, jx)});
  j["s_a"] = std::move(pairs);
  return j.dump();
}

std::pair<ScoreTable, std::string> score_table_from_json(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("score table parse failure: ") + e.what());
  }
  ScoreTable t;
  t.max_antecedents = j.at("max_antecedents").get<int>();
  for (const auto& c : j.at("candidates")) t.candidates.push_back({c.at(0), c.at(1)});
  t.mention_scores = j.at("s_m").get<Vec>();
  const int n = t.size();
  if (static_cast<int>(t.mention_scores.size()) != n)
    throw Error("score table: s_m size mismatch");
  t.pair_offsets.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    t.pair_offsets[i + 1] = t.pair_offsets[i] + (i - t.window_begin(i));
  t.antecedent_scores.assign(t.pair_offsets[n], 0.0);
  std::vector<char> seen(t.pair_offsets[n], 0);
  for (const auto& triple : j.at("s_a")) {
    const int i = triple.at(0).get<int>();
    const int jx = triple.at(1).get<int>();
    if (i < 0 || i >= n || jx < t.window_begin(i) || jx >= i)
      throw Error("score table: pair outside the antecedent window");
    const int slot = t.pair_offsets[i] + (jx - t.window_begin(i));
    t.antecedent_scores[slot] = triple.at(2).get<double>();
    seen[slot] = 1;
  }
  for (char s : seen)
    if (!s) throw Error("score table: missing antecedent score entries");
  return {std::move(t), j.at("doc_id").get<std::string>()};
}

std::vector<Span> enumerate_spans(const Document& doc, int max_width) {
  if (max_width < 1) throw Error("enumerate_spans: max_width must be >= 1");
  std::vector<Span> out;
  for (const Sentence& sent : doc.sentences) {
    for (int a = sent.start; a < sent.end; ++a) {
      if (is_speaker_token(doc.tokens[a].text)) continue;
      const int last = std::min(sent.end - 1, a + max_width - 1);
      for (int b = a; b <= last; ++b) {
        if (is_speaker_token(doc.tokens[b].text)) continue;
        out.push_back({a, b});
      }
    }
  }
  return out;  // already in candidate order by construction
}

bool spans_cross(Span a, Span b) {
  return (a.start < b.start && b.start <= a.end && a.end < b.end) ||
         (b.start < a.start && a.start <= b.end && b.end < a.end);
}

std::vector<int> prune_candidates(const std::vector<Span>& spans, const Vec& mention_scores,
                                  double lambda, int num_tokens) {
  if (lambda <= 0) throw Error("prune_candidates: lambda must be positive");
  if (spans.size() != mention_scores.size())
    throw Error("prune_candidates: score/span size mismatch");
  const int budget = std::min<int>(static_cast<int>(spans.size()),
                                   static_cast<int>(std::ceil(lambda * num_tokens)));
  std::vector<int> order(spans.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return mention_scores[a] != mention_scores[b] ? mention_scores[a] > mention_scores[b] : a < b;
  });
  std::vector<int> kept;
  for (int idx : order) {
    if (static_cast<int>(kept.size()) >= budget) break;
    bool crosses = false;
    for (int k : kept)
      if (spans_cross(spans[idx], spans[k])) {
        crosses = true;
        break;
      }
    if (!crosses) kept.push_back(idx);
  }
  std::sort(kept.begin(), kept.end());  // spans are stored in candidate order
  return kept;
}

DocForward run_forward(const Parameters& params, const Document& doc, const Exec& exec,
                       const std::vector<Span>* fixed_candidates) {
  const ModelConfig& cfg = params.cfg;
  const int T = doc.num_tokens();
  const int d = cfg.embed_dim;

  DocForward fwd;
  fwd.num_tokens = T;
  fwd.max_antecedents = cfg.max_antecedents;
  fwd.base.resize(static_cast<size_t>(T) * d);
  fwd.token_rows.resize(T);
  std::unique_ptr<EmbeddingProvider> provider = make_provider(params);
  for (int t = 0; t < T; ++t) {
    provider->lookup(doc.tokens[t].text, fwd.base.data() + static_cast<size_t>(t) * d);
    fwd.token_rows[t] = provider->learned_row(doc.tokens[t].text);
  }
  fwd.ctx.resize(fwd.base.size());
  kernels::context_mix(fwd.base.data(), T, d, doc.sentences, cfg.context_current,
                       cfg.context_previous, fwd.ctx.data(), exec);

  fwd.spans = fixed_candidates ? candidate_order(*fixed_candidates)
                               : enumerate_spans(doc, cfg.max_span_width);
  fwd.sm_spans.assign(fwd.spans.size(), 0.0);
  kernels::span_mention_scores(params, fwd.ctx.data(), T, fwd.spans, fwd.sm_spans.data(), exec);

  if (fixed_candidates) {
    fwd.cand.resize(fwd.spans.size());
    std::iota(fwd.cand.begin(), fwd.cand.end(), 0);
  } else {
    fwd.cand = prune_candidates(fwd.spans, fwd.sm_spans, cfg.lambda_keep, T);
  }
  const int C = static_cast<int>(fwd.cand.size());

  fwd.att_offsets.assign(C + 1, 0);
  for (int c = 0; c < C; ++c)
    fwd.att_offsets[c + 1] = fwd.att_offsets[c] + width(fwd.spans[fwd.cand[c]]);
  fwd.att.assign(fwd.att_offsets[C], 0.0);
  fwd.reps.assign(static_cast<size_t>(C) * cfg.span_dim(), 0.0);
  fwd.m_acts.assign(static_cast<size_t>(C) * params.mention_ffnn.acts_size(), 0.0);
  kernels::candidate_reps(params, fwd.ctx.data(), fwd, exec);

  // window pair lists + meta features
  std::map<std::string, int> speaker_ids;
  std::vector<int> cand_speaker(C, -1);
  for (int c = 0; c < C; ++c) {
    const Sentence& sent = doc.sentences[doc.sentence_of(fwd.spans[fwd.cand[c]].start)];
    if (sent.speaker) {
      auto [it, _] = speaker_ids.emplace(*sent.speaker, static_cast<int>(speaker_ids.size()));
      cand_speaker[c] = it->second;
    }
  }
  fwd.pair_offsets.assign(C + 1, 0);
  for (int i = 0; i < C; ++i) {
    const int wb = i > cfg.max_antecedents ? i - cfg.max_antecedents : 0;
    for (int j = wb; j < i; ++j) {
      fwd.pair_i.push_back(i);
      fwd.pair_j.push_back(j);
      fwd.feat_dialogue.push_back(doc.is_dialogue ? 1 : 0);
      fwd.feat_speaker.push_back(cand_speaker[i] < 0 || cand_speaker[j] < 0 ? 2
                                 : cand_speaker[i] == cand_speaker[j]      ? 0
                                                                           : 1);
      fwd.feat_distance.push_back(distance_bucket(i - j));
    }
    fwd.pair_offsets[i + 1] = static_cast<int>(fwd.pair_i.size());
  }
  const size_t P = fwd.pair_i.size();
  fwd.pair_inputs.assign(P * cfg.pair_dim(), 0.0);
  fwd.a_acts.assign(P * params.pair_ffnn.acts_size(), 0.0);
  fwd.sa.assign(P, 0.0);
  kernels::pair_scores(params, fwd, exec);

  auto finite = [](const Vec& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  if (!finite(fwd.sm_spans) || !finite(fwd.sa)) {
    double max_param = 0.0;
    for (const TensorRef& t : params.tensors())
      for (double x : *t.data) max_param = std::max(max_param, std::abs(x));
    throw Error("non-finite activation in document " + doc.doc_id +
                " (max |parameter| = " + std::to_string(max_param) + ")");
  }
  return fwd;
}

ScoreTable to_score_table(const DocForward& fwd) {
  ScoreTable t;
  const int C = static_cast<int>(fwd.cand.size());
  t.candidates.reserve(C);
  t.mention_scores.reserve(C);
  for (int c = 0; c < C; ++c) {
    t.candidates.push_back(fwd.spans[fwd.cand[c]]);
    t.mention_scores.push_back(fwd.sm_spans[fwd.cand[c]]);
  }
  t.max_antecedents = fwd.max_antecedents;
  t.pair_offsets = fwd.pair_offsets;
  t.antecedent_scores = fwd.sa;
  return t;
}

GoldInfo make_gold_info(const Document& doc, const ScoreTable& table) {
  if (!doc.gold_clusters) throw Error("make_gold_info: document " + doc.doc_id + " has no gold");
  std::map<Span, int> cluster_of;
  for (int c = 0; c < static_cast<int>(doc.gold_clusters->clusters.size()); ++c)
    for (Span sp : doc.gold_clusters->clusters[c]) cluster_of[sp] = c;

  const int C = table.size();
  GoldInfo info;
  info.gold_antecedents.resize(C);
  std::vector<int> cand_cluster(C, -1);
  for (int i = 0; i < C; ++i) {
    auto it = cluster_of.find(table.candidates[i]);
    if (it != cluster_of.end()) {
      cand_cluster[i] = it->second;
      info.positives.push_back(i);
    }
  }
  for (int i = 0; i < C; ++i) {
    if (cand_cluster[i] >= 0) {
      for (int j = table.window_begin(i); j < i; ++j)
        if (cand_cluster[j] == cand_cluster[i]) info.gold_antecedents[i].push_back(j);
    }
    if (info.gold_antecedents[i].empty()) info.gold_antecedents[i].push_back(kEpsilon);
  }
  return info;
}

double coref_loss(const ScoreTable& table, const std::vector<std::vector<int>>& gold_antecedents,
                  Vec* dpair_scores) {
  const int C = table.size();
  if (static_cast<int>(gold_antecedents.size()) != C)
    throw Error("coref_loss: gold antecedent set count mismatch");
  if (dpair_scores) dpair_scores->assign(table.antecedent_scores.size(), 0.0);

  double loss = 0.0;
  Vec logits;
  for (int i = 0; i < C; ++i) {
    const auto& gold = gold_antecedents[i];
    if (gold.empty()) throw Error("coref_loss: empty gold antecedent set for candidate " +
                                  std::to_string(i));
    const int wb = table.window_begin(i);
    const int n = i - wb;
    logits.assign(n + 1, 0.0);  // slot 0 = epsilon
    for (int j = wb; j < i; ++j) logits[j - wb + 1] = pair_score(table, i, j);

    double maxl = 0.0;
    for (double l : logits) maxl = std::max(maxl, l);
    double z = 0.0;
    for (double l : logits) z += std::exp(l - maxl);
    const double lse = maxl + std::log(z);

    double gold_z = 0.0;
    for (int g : gold) {
      if (g != kEpsilon && (g < wb || g >= i))
        throw Error("coref_loss: gold antecedent outside window");
      gold_z += std::exp((g == kEpsilon ? 0.0 : logits[g - wb + 1]) - maxl);
    }
    const double gold_lse = maxl + std::log(gold_z);
    loss += lse - gold_lse;

    if (dpair_scores) {
      const double inv_pg = std::exp(lse - gold_lse);  // 1 / P(gold)
      Vec is_gold(n + 1, 0.0);
      for (int g : gold) is_gold[g == kEpsilon ? 0 : g - wb + 1] = 1.0;
      for (int k = 1; k <= n; ++k) {
        const double p = std::exp(logits[k] - lse);
        (*dpair_scores)[table.pair_offsets[i] + (k - 1)] = p - is_gold[k] * p * inv_pg;
      }
    }
  }
  if (!std::isfinite(loss)) throw Error("coref_loss: non-finite loss");
  return loss;
}

std::vector<int> sample_negatives(int num_candidates, const std::vector<int>& positives,
                                  uint64_t seed) {
  std::vector<char> is_pos(num_candidates, 0);
  for (int p : positives) is_pos[p] = 1;
  std::vector<int> pool;
  for (int i = 0; i < num_candidates; ++i)
    if (!is_pos[i]) pool.push_back(i);
  const size_t k = std::min(pool.size(), positives.size());
  std::mt19937_64 rng(derive_seed(seed, "negative-sampling"));
  for (size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

double mention_loss(const ScoreTable& table, const std::vector<int>& positives,
                    const std::vector<int>& negatives, Vec* dsm) {
  if (dsm) dsm->assign(table.size(), 0.0);
  double loss = 0.0;
  for (int p : positives) {
    const double s = table.mention_scores[p];
    loss += softplus(-s);  // -log sigmoid(s)
    if (dsm) (*dsm)[p] += sigmoid(s) - 1.0;
  }
  for (int n : negatives) {
    const double s = table.mention_scores[n];
    loss += softplus(s);  // -log(1 - sigmoid(s))
    if (dsm) (*dsm)[n] += sigmoid(s);
  }
  if (!std::isfinite(loss)) throw Error("mention_loss: non-finite loss");
  return loss;
}

double total_loss(double coref, double mention, double alpha_mention) {
  return coref + alpha_mention * mention;
}

LossBreakdown doc_loss(const Parameters& params, const Document& doc, const DocForward& fwd,
                       uint64_t sample_seed, Parameters* grads, const Exec& exec) {
  const ScoreTable table = to_score_table(fwd);
  const GoldInfo gold = make_gold_info(doc, table);

  Vec dpair, dsm_mention;
  LossBreakdown out;
  out.coref = coref_loss(table, gold.gold_antecedents, grads ? &dpair : nullptr);
  const std::vector<int> negatives = sample_negatives(table.size(), gold.positives, sample_seed);
  out.mention = mention_loss(table, gold.positives, negatives, grads ? &dsm_mention : nullptr);
  out.total = total_loss(out.coref, out.mention, params.cfg.alpha_mention);
  out.num_positives = static_cast<int>(gold.positives.size());
  out.num_negatives = static_cast<int>(negatives.size());
  if (!grads) return out;

  const int C = table.size();
  // d(total)/d(s_m): the mention-loss path plus every pair score that sums it.
  Vec dsm(C, 0.0);
  for (int c = 0; c < C; ++c) dsm[c] = params.cfg.alpha_mention * dsm_mention[c];
  for (size_t k = 0; k < fwd.pair_i.size(); ++k) {
    dsm[fwd.pair_i[k]] += dpair[k];
    dsm[fwd.pair_j[k]] += dpair[k];
  }

  Vec dreps(fwd.reps.size(), 0.0);
  kernels::pair_backward(params, fwd, dpair, *grads, dreps.data(), exec);
  kernels::mention_backward(params, fwd, dsm, *grads, dreps.data(), exec);
  Vec dctx(fwd.ctx.size(), 0.0);
  kernels::span_backward(params, fwd, dreps.data(), *grads, dctx.data(), exec);
  kernels::context_backward(fwd, doc.sentences, params.cfg.context_current,
                            params.cfg.context_previous, dctx.data(), *grads);
  return out;
}

}  // namespace coref
