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

// OpenMP kernels against the serial reference: forward must be
// bit-identical, backward agrees to tight tolerance (accumulation order
// differs) and is deterministic run-to-run.

#include <doctest.h>

#include "coref/kernels.hpp"
#include "coref/model.hpp"
#include "coref/preprocess.hpp"
#include "coref/synthetic.hpp"
#include "helpers.hpp"

using namespace coref;

namespace {

struct Fixture {
  Document doc;
  Parameters params;

  Fixture() {
    SyntheticConfig syn;
    syn.num_docs = 1;
    syn.min_sentences = 10;
    syn.max_sentences = 12;
    syn.seed = 99;
    Corpus corpus = make_synthetic_dialogues(syn);
    doc = augment_speakers(corpus.documents[0]).doc;
    ModelConfig cfg;
    cfg.embed_dim = 16;
    cfg.ffnn_hidden = 24;
    cfg.width_emb_dim = 8;
    cfg.feature_emb_dim = 8;
    cfg.max_span_width = 4;
    cfg.max_antecedents = 10;
    cfg.seed = 31;
    params = Parameters::init(cfg);
  }
};

double max_abs_diff(const Vec& a, const Vec& b) {
  REQUIRE(a.size() == b.size());
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("forward kernels: openmp output is bit-identical to serial") {
  Fixture fx;
  DocForward serial = run_forward(fx.params, fx.doc, Exec::serial());
  DocForward parallel = run_forward(fx.params, fx.doc, Exec{true, 0});
  CHECK(serial.spans == parallel.spans);
  CHECK(serial.cand == parallel.cand);
  CHECK(serial.ctx == parallel.ctx);          // bit-exact
  CHECK(serial.sm_spans == parallel.sm_spans);
  CHECK(serial.reps == parallel.reps);
  CHECK(serial.sa == parallel.sa);
  CHECK(serial.att == parallel.att);
}

TEST_CASE("backward kernels: openmp gradients match serial tightly") {
  Fixture fx;
  DocForward fwd_s = run_forward(fx.params, fx.doc, Exec::serial());
  Parameters gs = Parameters::zeros_like(fx.params);
  LossBreakdown ls = doc_loss(fx.params, fx.doc, fwd_s, 7, &gs, Exec::serial());

  DocForward fwd_p = run_forward(fx.params, fx.doc, Exec{true, 0});
  Parameters gp = Parameters::zeros_like(fx.params);
  LossBreakdown lp = doc_loss(fx.params, fx.doc, fwd_p, 7, &gp, Exec{true, 0});

  CHECK(ls.total == lp.total);  // losses do not involve reductions over threads
  auto ts = gs.tensors();
  auto tp = gp.tensors();
  for (size_t i = 0; i < ts.size(); ++i) {
    CAPTURE(ts[i].name);
    CHECK(max_abs_diff(*ts[i].data, *tp[i].data) < 1e-10);
  }
}

TEST_CASE("openmp backward is deterministic across runs and thread counts") {
  Fixture fx;
  auto grads_with = [&](int threads) {
    DocForward fwd = run_forward(fx.params, fx.doc, Exec{true, threads});
    Parameters g = Parameters::zeros_like(fx.params);
    doc_loss(fx.params, fx.doc, fwd, 7, &g, Exec{true, threads});
    return g;
  };
  Parameters a = grads_with(0);
  Parameters b = grads_with(0);
  Parameters c = grads_with(1);  // different thread count, same chunking
  auto ta = a.tensors();
  auto tb = b.tensors();
  auto tc = c.tensors();
  for (size_t i = 0; i < ta.size(); ++i) {
    CHECK(*ta[i].data == *tb[i].data);  // bit-identical run-to-run
    CHECK(*ta[i].data == *tc[i].data);  // and per thread count
  }
}

TEST_CASE("ffnn primitive backward matches finite differences") {
  Ffnn f;
  f.w1 = Matrix(3, 4);
  f.b1 = {0.1, -0.2, 0.3};
  f.w2 = Matrix(3, 3);
  f.b2 = {0.0, 0.1, -0.1};
  f.w_out = {0.5, -0.4, 0.2};
  f.b_out = {0.05};
  for (int i = 0; i < 12; ++i) f.w1.a[i] = 0.1 * (i % 5) - 0.2;
  for (int i = 0; i < 9; ++i) f.w2.a[i] = 0.05 * (i % 4) - 0.1;
  Vec x = {0.3, -0.7, 0.2, 0.9};

  Vec acts(f.acts_size());
  ffnn_one(f, x.data(), acts.data());
  Ffnn g = zeros_like(f);
  Vec dx(4, 0.0);
  ffnn_backward_one(f, x.data(), acts.data(), 1.0, g, dx.data());

  const double h = 1e-6;
  for (int k = 0; k < 4; ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const double fd = (ffnn_one(f, xp.data(), nullptr) - ffnn_one(f, xm.data(), nullptr)) / (2 * h);
    CHECK(dx[k] == doctest::Approx(fd).epsilon(1e-6));
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) {
      Ffnn fp = f, fm = f;
      fp.w1.at(i, j) += h;
      fm.w1.at(i, j) -= h;
      const double fd =
          (ffnn_one(fp, x.data(), nullptr) - ffnn_one(fm, x.data(), nullptr)) / (2 * h);
      CHECK(g.w1.at(i, j) == doctest::Approx(fd).epsilon(1e-6));
    }
}
