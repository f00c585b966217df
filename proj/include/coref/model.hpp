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

#ifndef UACOREF_MODEL_HPP_
#define UACOREF_MODEL_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "coref/math.hpp"
#include "coref/types.hpp"

namespace coref {

constexpr int kEpsilon = -1;  // index of the dummy antecedent

struct ModelConfig {
  int embed_dim = 32;
  int ffnn_hidden = 150;
  int width_emb_dim = 16;
  int feature_emb_dim = 16;
  int max_span_width = 30;
  double lambda_keep = 0.5;   // keep ceil(lambda * T) candidates
  int max_antecedents = 50;
  double alpha_mention = 0.1;
  // Sentence-context mixing of the embedding provider: each token vector is
  // base + cur * base[first token of its sentence] + prev * base[first token
  // of the previous sentence]. Sentence-initial tokens carry the turn
  // signal, so augmented speaker tokens reach every token of their turn.
  double context_current = 0.5;
  double context_previous = 0.25;
  std::string provider = "hashed";  // "hashed" | "learned"
  uint64_t seed = 1;

  int span_dim() const { return 3 * embed_dim + width_emb_dim; }
  int pair_dim() const { return 3 * span_dim() + 3 * feature_emb_dim; }
};

constexpr int kWidthBuckets = 7;    // 1,2,3,4,5-7,8-15,16+
constexpr int kDistanceBuckets = 9; // 1,2,3,4,5-7,8-15,16-31,32-63,64+
constexpr int kSpeakerFeatures = 3; // same, different, unavailable

int width_bucket(int w);
int distance_bucket(int d);

enum class ParamGroup { task, encoder };

struct TensorRef {
  std::string name;
  ParamGroup group;
  Vec* data;
};

struct Parameters {
  ModelConfig cfg;
  Vec att_w;            // d — soft-head attention projection
  Matrix width_emb;     // kWidthBuckets x width_emb_dim
  Matrix dialogue_emb;  // 2 x feature_emb_dim
  Matrix speaker_emb;   // kSpeakerFeatures x feature_emb_dim
  Matrix dist_emb;      // kDistanceBuckets x feature_emb_dim
  Ffnn mention_ffnn;    // span_dim -> 1
  Ffnn pair_ffnn;       // pair_dim -> 1
  std::vector<std::string> vocab;  // learned provider only; row order
  Matrix token_table;              // |vocab| x d

  static Parameters init(const ModelConfig& cfg, std::vector<std::string> vocab = {});
  static Parameters zeros_like(const Parameters& p);

  std::vector<TensorRef> tensors();
  std::vector<TensorRef> tensors() const;  // data points into const storage; do not write
  size_t parameter_count() const;
};

// Maps token strings to d-dimensional vectors.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dimension() const = 0;
  virtual void lookup(std::string_view token, double* out) const = 0;
  // Row in Parameters::token_table receiving gradient, or -1 when frozen.
  virtual int learned_row(std::string_view /*token*/) const { return -1; }
};

// Deterministic frozen vectors derived from (seed, token).
class HashedEmbedding final : public EmbeddingProvider {
 public:
  HashedEmbedding(int dim, uint64_t seed) : dim_(dim), seed_(seed) {}
  int dimension() const override { return dim_; }
  void lookup(std::string_view token, double* out) const override;

 private:
  int dim_;
  uint64_t seed_;
};

// Trainable lookup table over a fixed vocabulary; out-of-vocabulary tokens
// fall back to the frozen hashed vectors.
class LearnedEmbedding final : public EmbeddingProvider {
 public:
  explicit LearnedEmbedding(const Parameters& params);
  int dimension() const override;
  void lookup(std::string_view token, double* out) const override;
  int learned_row(std::string_view token) const override;

 private:
  const Parameters* params_;
  HashedEmbedding fallback_;
  std::vector<std::pair<std::string, int>> index_;  // sorted by token
};

std::unique_ptr<EmbeddingProvider> make_provider(const Parameters& params);

// Per-candidate mention scores plus windowed pairwise antecedent scores.
// Pairs of candidate i occupy [pair_offsets[i], pair_offsets[i+1]) with
// antecedent j running from window_begin(i) to i-1.
struct ScoreTable {
  std::vector<Span> candidates;  // candidate order
  Vec mention_scores;            // s_m per candidate
  int max_antecedents = 50;
  std::vector<int> pair_offsets;  // size candidates+1
  Vec antecedent_scores;          // s_a, flattened

  int size() const { return static_cast<int>(candidates.size()); }
  int window_begin(int i) const { return i > max_antecedents ? i - max_antecedents : 0; }
  double antecedent_score(int i, int j) const;
};

// s(x_i, y) = s_m(i) + s_m(j) + s_a(i, j); s(x_i, epsilon) = 0.
// j must be kEpsilon or lie in the window of i; j >= i is an error.
double pair_score(const ScoreTable& table, int i, int j);

// Lossless JSON-lines export of score tables (one document per line).
std::string score_table_to_json(const ScoreTable& table, const std::string& doc_id);
std::pair<ScoreTable, std::string> score_table_from_json(const std::string& line);

// ---- span enumeration & pruning ----

// All spans of width <= max_width that stay within one sentence and do not
// start or end on an injected speaker token, in candidate order.
std::vector<Span> enumerate_spans(const Document& doc, int max_width);

// Top ceil(lambda*T) spans by mention score, ties broken by candidate
// order, skipping spans that cross an already-selected span; result is
// re-sorted into candidate order and returned as indices into `spans`.
std::vector<int> prune_candidates(const std::vector<Span>& spans, const Vec& mention_scores,
                                  double lambda, int num_tokens);

bool spans_cross(Span a, Span b);

// ---- forward pass ----

// Everything the backward pass needs; layouts documented in kernels.cpp.
struct DocForward {
  int num_tokens = 0;
  int max_antecedents = 50;
  std::vector<double> base;      // T x d token vectors from the provider
  std::vector<int> token_rows;   // learned-table row per token, -1 = frozen
  std::vector<double> ctx;       // T x d context-mixed vectors
  std::vector<Span> spans;       // enumerated spans, candidate order
  std::vector<int> cand;         // candidate -> span index
  std::vector<double> reps;      // |cand| x span_dim (candidates only)
  std::vector<int> att_offsets;  // |cand|+1, ragged attention layout
  std::vector<double> att;       // attention weights per candidate span
  std::vector<double> m_acts;    // |cand| x mention acts
  Vec sm_spans;                  // mention score for every span
  std::vector<int> pair_i, pair_j;    // flattened pairs (candidate indices)
  std::vector<int> pair_offsets;      // |cand|+1
  std::vector<double> pair_inputs;    // P x pair_dim
  std::vector<double> a_acts;         // P x pair acts
  Vec sa;                             // P
  std::vector<int> feat_dialogue, feat_speaker, feat_distance;  // P
};

// When `fixed_candidates` is given, span enumeration and pruning are skipped
// and exactly those spans become the candidate set (used by gradient checks
// and table re-scoring).
DocForward run_forward(const Parameters& params, const Document& doc, const Exec& exec,
                       const std::vector<Span>* fixed_candidates = nullptr);

ScoreTable to_score_table(const DocForward& fwd);

// ---- losses ----

struct GoldInfo {
  // Per candidate: gold antecedent candidate indices, kEpsilon when none in
  // window or the candidate is not anaphoric. Always non-empty.
  std::vector<std::vector<int>> gold_antecedents;
  std::vector<int> positives;  // candidates that are gold mentions
};

GoldInfo make_gold_info(const Document& doc, const ScoreTable& table);

// Marginal log-likelihood loss over gold antecedents; optional gradient
// w.r.t. the full pair scores s(i,j), laid out like table pairs.
double coref_loss(const ScoreTable& table, const std::vector<std::vector<int>>& gold_antecedents,
                  Vec* dpair_scores = nullptr);

// Uniform without-replacement sample of min(|pool|, |positives|) negatives.
std::vector<int> sample_negatives(int num_candidates, const std::vector<int>& positives,
                                  uint64_t seed);

// Binary cross-entropy on mention scores; optional gradient w.r.t. s_m.
double mention_loss(const ScoreTable& table, const std::vector<int>& positives,
                    const std::vector<int>& negatives, Vec* dsm = nullptr);

double total_loss(double coref, double mention, double alpha_mention);

struct LossBreakdown {
  double coref = 0.0;
  double mention = 0.0;
  double total = 0.0;
  int num_positives = 0;
  int num_negatives = 0;
};

// Joint loss on one document; when `grads` is non-null the full analytic
// gradient of the total loss is accumulated into it.
LossBreakdown doc_loss(const Parameters& params, const Document& doc, const DocForward& fwd,
                       uint64_t sample_seed, Parameters* grads, const Exec& exec);

}  // namespace coref

#endif  // UACOREF_MODEL_HPP_
