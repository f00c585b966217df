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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "coref/model.hpp"
#include "coref/train.hpp"
#include "gradcheck.hpp"
#include "helpers.hpp"

using namespace coref;

namespace {

// random score table: width-1 candidates, uniform scores
ScoreTable random_table(std::mt19937_64& rng, int n, int window) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScoreTable t;
  t.max_antecedents = window;
  for (int i = 0; i < n; ++i) {
    t.candidates.push_back({i, i});
    t.mention_scores.push_back(u(rng));
  }
  t.pair_offsets.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    t.pair_offsets[i + 1] = t.pair_offsets[i] + (i - t.window_begin(i));
    for (int j = t.window_begin(i); j < i; ++j) t.antecedent_scores.push_back(u(rng));
  }
  return t;
}

}  // namespace

TEST_CASE("enumerate_spans basic counts") {
  Document one = testing::make_doc("d", {{"a", "b", "c"}});
  CHECK(enumerate_spans(one, 30).size() == 6);  // 3+2+1
  CHECK(enumerate_spans(one, 1).size() == 3);

  Document two = testing::make_doc("d", {{"a", "b"}, {"c", "d"}});
  std::vector<Span> spans = enumerate_spans(two, 30);
  // brute-force oracle: all (a,b) pairs inside one sentence
  std::vector<Span> expected;
  for (const Sentence& s : two.sentences)
    for (int a = s.start; a < s.end; ++a)
      for (int b = a; b < s.end; ++b) expected.push_back({a, b});
  CHECK(spans == candidate_order(expected));
  CHECK(spans.size() == 6);
}

TEST_CASE("enumerate_spans skips injected speaker tokens") {
  Document doc = testing::make_doc("d", {{"[SPK1]", "a", "b"}});
  std::vector<Span> spans = enumerate_spans(doc, 30);
  CHECK(spans == std::vector<Span>{{1, 1}, {1, 2}, {2, 2}});
}

TEST_CASE("enumerate_spans matches brute force on random documents") {
  std::mt19937_64 rng(55);
  for (int it = 0; it < 30; ++it) {
    Corpus corpus = testing::random_corpus(rng, 1, FormatTag::UA);
    const Document& doc = corpus.documents[0];
    const int w = 1 + static_cast<int>(rng() % 5);
    std::vector<Span> expected;
    for (const Sentence& s : doc.sentences)
      for (int a = s.start; a < s.end; ++a)
        for (int b = a; b < s.end && b - a + 1 <= w; ++b) expected.push_back({a, b});
    CHECK(enumerate_spans(doc, w) == candidate_order(expected));
  }
}

TEST_CASE("prune_candidates keeps ceil(lambda*T) by score") {
  // 30 spans over T=10 tokens
  std::vector<Span> spans;
  for (int i = 0; i < 10; ++i) spans.push_back({i, i});
  for (int i = 0; i < 9; ++i) spans.push_back({i, i + 1});
  for (int i = 0; i < 8; ++i) spans.push_back({i, i + 2});
  spans = candidate_order(spans);
  REQUIRE(spans.size() == 27);
  Vec scores(spans.size());
  for (size_t i = 0; i < scores.size(); ++i) scores[i] = static_cast<double>(i);
  std::vector<int> kept = prune_candidates(spans, scores, 0.5, 10);
  CHECK(kept.size() == 5);

  // equal scores, width-1 spans (no crossings): earliest in candidate order
  std::vector<Span> units;
  for (int i = 0; i < 10; ++i) units.push_back({i, i});
  Vec equal_unit(units.size(), 1.0);
  CHECK(prune_candidates(units, equal_unit, 0.5, 10) == std::vector<int>{0, 1, 2, 3, 4});

  // equal scores with mixed widths: earliest non-crossing spans win;
  // (1,2) crosses (0,1) and (1,3) crosses (0,2), so index 6 = (2,2) enters
  Vec equal(spans.size(), 1.0);
  CHECK(prune_candidates(spans, equal, 0.5, 10) == std::vector<int>{0, 1, 2, 3, 6});
}

TEST_CASE("prune_candidates replaces crossing spans") {
  // two crossing spans rank on top; the lower-scored one is skipped
  std::vector<Span> spans = {{0, 2}, {1, 3}, {4, 4}, {5, 5}};
  Vec scores = {10.0, 9.0, 1.0, 0.5};
  std::vector<int> kept = prune_candidates(spans, scores, 0.5, 6);  // budget 3
  CHECK(kept == std::vector<int>{0, 2, 3});

  // oracle: greedy filter honoring scores and the crossing rule
  std::vector<int> oracle;
  std::vector<int> order = {0, 1, 2, 3};
  for (int idx : order) {
    if (static_cast<int>(oracle.size()) >= 3) break;
    bool crosses = false;
    for (int k : oracle) crosses = crosses || spans_cross(spans[idx], spans[k]);
    if (!crosses) oracle.push_back(idx);
  }
  CHECK(kept == oracle);
}

TEST_CASE("prune output is a subset in candidate order with exact size") {
  std::mt19937_64 rng(66);
  for (int it = 0; it < 30; ++it) {
    const int T = 5 + static_cast<int>(rng() % 20);
    Document doc = testing::make_doc("d", {std::vector<std::string>(T, "w")});
    std::vector<Span> spans = enumerate_spans(doc, 1);  // width-1: no crossings
    Vec scores(spans.size());
    std::uniform_real_distribution<double> u(-1, 1);
    for (double& s : scores) s = u(rng);
    std::vector<int> kept = prune_candidates(spans, scores, 0.5, T);
    CHECK(kept.size() == std::min(spans.size(), static_cast<size_t>(std::ceil(0.5 * T))));
    CHECK(std::is_sorted(kept.begin(), kept.end()));
  }
}

TEST_CASE("pair_score sums the three scores; epsilon is zero") {
  std::mt19937_64 rng(4);
  ScoreTable t = random_table(rng, 5, 50);
  t.mention_scores[3] = 1.0;
  t.mention_scores[1] = 0.5;
  t.antecedent_scores[t.pair_offsets[3] + 1] = -0.2;  // pair (3,1)
  CHECK(pair_score(t, 3, 1) == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(pair_score(t, 3, kEpsilon) == 0.0);
  CHECK_THROWS_AS(pair_score(t, 2, 2), Error);
  CHECK_THROWS_AS(pair_score(t, 2, 3), Error);
}

TEST_CASE("score table JSON round-trip is exact") {
  std::mt19937_64 rng(8);
  ScoreTable t = random_table(rng, 12, 5);
  auto [back, doc_id] = score_table_from_json(score_table_to_json(t, "docX"));
  CHECK(doc_id == "docX");
  CHECK(back.candidates == t.candidates);
  CHECK(back.max_antecedents == t.max_antecedents);
  CHECK(back.pair_offsets == t.pair_offsets);
  CHECK(back.mention_scores == t.mention_scores);        // bit-exact
  CHECK(back.antecedent_scores == t.antecedent_scores);  // bit-exact
}

TEST_CASE("coref_loss trivial cases") {
  // single candidate: only epsilon available
  ScoreTable t;
  t.max_antecedents = 50;
  t.candidates = {{0, 0}};
  t.mention_scores = {0.3};
  t.pair_offsets = {0, 0};
  CHECK(coref_loss(t, {{kEpsilon}}) == doctest::Approx(0.0));

  // one antecedent with s=0 against epsilon=0: uniform over two
  ScoreTable t2;
  t2.max_antecedents = 50;
  t2.candidates = {{0, 0}, {1, 1}};
  t2.mention_scores = {0.0, 0.0};
  t2.pair_offsets = {0, 0, 1};
  t2.antecedent_scores = {0.0};
  CHECK(coref_loss(t2, {{kEpsilon}, {0}}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(coref_loss(t2, {{kEpsilon}, {}}), Error);
}

TEST_CASE("coref_loss matches a long-double log-sum-exp oracle") {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 20; ++it) {
    const int n = 2 + static_cast<int>(rng() % 8);
    ScoreTable t = random_table(rng, n, 4);
    std::vector<std::vector<int>> gold(n);
    for (int i = 0; i < n; ++i) {
      for (int j = t.window_begin(i); j < i; ++j)
        if (rng() % 3 == 0) gold[i].push_back(j);
      if (gold[i].empty()) gold[i].push_back(kEpsilon);
    }
    long double expected = 0;
    for (int i = 0; i < n; ++i) {
      long double z = 1.0L;  // epsilon
      for (int j = t.window_begin(i); j < i; ++j) z += expl((long double)pair_score(t, i, j));
      long double gz = 0.0L;
      for (int g : gold[i]) gz += g == kEpsilon ? 1.0L : expl((long double)pair_score(t, i, g));
      expected += logl(z) - logl(gz);
    }
    CHECK(coref_loss(t, gold) == doctest::Approx((double)expected).epsilon(1e-9));
  }
}

TEST_CASE("antecedent distribution sums to one") {
  std::mt19937_64 rng(13);
  ScoreTable t = random_table(rng, 20, 6);
  for (int i = 0; i < t.size(); ++i) {
    double z = 1.0;
    for (int j = t.window_begin(i); j < i; ++j) z += std::exp(pair_score(t, i, j));
    double sum = 1.0 / z;
    for (int j = t.window_begin(i); j < i; ++j) sum += std::exp(pair_score(t, i, j)) / z;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("mention_loss values and sampling size") {
  ScoreTable t;
  t.max_antecedents = 50;
  for (int i = 0; i < 45; ++i) {
    t.candidates.push_back({i, i});
    t.mention_scores.push_back(0.0);
  }
  t.pair_offsets.assign(46, 0);

  CHECK(mention_loss(t, {0}, {}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  t.mention_scores[1] = 50.0;
  CHECK(mention_loss(t, {1}, {}) == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<int> pos = {0, 1, 2, 3, 4};
  std::vector<int> neg = sample_negatives(45, pos, 99);
  CHECK(neg.size() == 5);  // min(40, 5)
  for (int n : neg) CHECK(std::find(pos.begin(), pos.end(), n) == pos.end());
  CHECK(sample_negatives(45, pos, 99) == neg);  // seeded determinism
  CHECK(sample_negatives(3, {0, 1, 2}, 1).empty());
  CHECK(sample_negatives(4, {}, 1).empty());  // empty positives -> no negatives
}

TEST_CASE("total_loss is the exact weighted sum") {
  CHECK(total_loss(2.0, 3.0, 0.1) == doctest::Approx(2.3).epsilon(1e-15));
  CHECK(total_loss(1.7, 9.0, 0.0) == 1.7);
  CHECK(ModelConfig{}.alpha_mention == 0.1);
}

TEST_CASE("constant shift of s_m moves pair scores by 2c, argmax stable") {
  std::mt19937_64 rng(14);
  ScoreTable t = random_table(rng, 15, 6);
  ScoreTable shifted = t;
  const double c = 0.37;
  for (double& s : shifted.mention_scores) s += c;
  for (int i = 0; i < t.size(); ++i) {
    int best = -2, best_shift = -2;
    double bs = -1e18, bss = -1e18;
    for (int j = t.window_begin(i); j < i; ++j) {
      CHECK(pair_score(shifted, i, j) ==
            doctest::Approx(pair_score(t, i, j) + 2 * c).epsilon(1e-12));
      if (pair_score(t, i, j) > bs) {
        bs = pair_score(t, i, j);
        best = j;
      }
      if (pair_score(shifted, i, j) > bss) {
        bss = pair_score(shifted, i, j);
        best_shift = j;
      }
    }
    CHECK(best == best_shift);
  }
}

TEST_CASE("forward is deterministic and bit-stable through checkpoints") {
  Document doc = testing::gradcheck_doc();
  ModelConfig cfg = testing::gradcheck_config(3, "learned");
  std::vector<std::string> vocab;
  for (const Token& t : doc.tokens) vocab.push_back(t.text);
  Parameters params = Parameters::init(cfg, vocab);

  DocForward a = run_forward(params, doc, Exec::serial());
  DocForward b = run_forward(params, doc, Exec::serial());
  CHECK(a.sm_spans == b.sm_spans);
  CHECK(a.sa == b.sa);

  const std::string path = "/tmp/uacoref_test_ckpt.bin";
  save_checkpoint(path, params, "{}");
  auto [loaded, meta] = load_checkpoint(path);
  DocForward c = run_forward(loaded, doc, Exec::serial());
  CHECK(a.sm_spans == c.sm_spans);  // bit-stable recomputation
  CHECK(a.sa == c.sa);
  std::remove(path.c_str());
}

TEST_CASE("zero output layers give constant scores") {
  Document doc = testing::gradcheck_doc();
  ModelConfig cfg = testing::gradcheck_config(5, "hashed");
  Parameters params = Parameters::init(cfg);
  std::fill(params.mention_ffnn.w_out.begin(), params.mention_ffnn.w_out.end(), 0.0);
  params.mention_ffnn.b_out[0] = 0.75;
  std::fill(params.pair_ffnn.w_out.begin(), params.pair_ffnn.w_out.end(), 0.0);
  params.pair_ffnn.b_out[0] = -0.25;

  DocForward fwd = run_forward(params, doc, Exec::serial());
  for (double s : fwd.sm_spans) CHECK(s == doctest::Approx(0.75).epsilon(1e-15));
  for (double s : fwd.sa) CHECK(s == doctest::Approx(-0.25).epsilon(1e-15));
}

TEST_CASE("analytic gradient matches finite differences (both providers)") {
  for (const char* provider : {"hashed", "learned"}) {
    ModelConfig cfg = testing::gradcheck_config(11, provider);
    testing::GradCheck res = testing::finite_difference_check(cfg, 123, Exec::serial());
    CAPTURE(provider);
    CAPTURE(res.worst_tensor);
    CHECK(res.checked > 1000);
    CHECK(res.max_rel_err < 1e-4);
  }
}

TEST_CASE("hashed embeddings are deterministic per token") {
  HashedEmbedding emb(16, 42);
  Vec a(16), b(16), c(16);
  emb.lookup("hello", a.data());
  emb.lookup("hello", b.data());
  emb.lookup("world", c.data());
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("learned embeddings fall back to hashed for OOV") {
  ModelConfig cfg = testing::gradcheck_config(2, "learned");
  Parameters params = Parameters::init(cfg, {"known"});
  LearnedEmbedding emb(params);
  CHECK(emb.learned_row("known") == 0);
  CHECK(emb.learned_row("unknown") == -1);
  Vec a(cfg.embed_dim), b(cfg.embed_dim);
  emb.lookup("unknown", a.data());
  HashedEmbedding hashed(cfg.embed_dim, cfg.seed);
  hashed.lookup("unknown", b.data());
  CHECK(a == b);
}
