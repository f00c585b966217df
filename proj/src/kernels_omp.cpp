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

// OpenMP kernels. Forward loops write disjoint outputs, so they are
// bit-identical to the serial reference. Backward accumulation runs over a
// fixed number of chunks merged in chunk order, which keeps results
// deterministic for any thread count.

#include "kernels_impl.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coref::kernels {

using namespace detail;

namespace {

int resolve_threads(int requested) {
#ifdef _OPENMP
  return requested > 0 ? requested : omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

}  // namespace

int max_threads() { return resolve_threads(0); }

void context_mix_omp(const double* base, int num_tokens, int dim,
                     const std::vector<Sentence>& sentences, double cur, double prev, double* ctx,
                     int threads) {
  // sentence index per token, so the loop over tokens is flat
  std::vector<int> sent_of(num_tokens);
  for (int s = 0; s < static_cast<int>(sentences.size()); ++s)
    for (int t = sentences[s].start; t < sentences[s].end; ++t) sent_of[t] = s;
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int t = 0; t < num_tokens; ++t) {
    const int s = sent_of[t];
    mix_one(base, dim, t, sentences[s].start, s > 0 ? sentences[s - 1].start : -1, cur, prev,
            ctx + static_cast<size_t>(t) * dim);
  }
}

void span_mention_scores_omp(const Parameters& params, const double* ctx,
                             const std::vector<Span>& spans, double* sm_out, int threads) {
  const int n = static_cast<int>(spans.size());
  const int nt = resolve_threads(threads);
#pragma omp parallel num_threads(nt)
  {
    Vec rep(params.cfg.span_dim());
#pragma omp for schedule(static)
    for (int s = 0; s < n; ++s) {
      build_span_rep(params, ctx, spans[s], rep.data(), nullptr);
      sm_out[s] = ffnn_one(params.mention_ffnn, rep.data(), nullptr);
    }
  }
}

void candidate_reps_omp(const Parameters& params, const double* ctx, DocForward& fwd,
                        int threads) {
  const int sd = params.cfg.span_dim();
  const int acts = params.mention_ffnn.acts_size();
  const int n = static_cast<int>(fwd.cand.size());
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int c = 0; c < n; ++c) {
    double* rep = fwd.reps.data() + static_cast<size_t>(c) * sd;
    build_span_rep(params, ctx, fwd.spans[fwd.cand[c]], rep,
                   fwd.att.data() + fwd.att_offsets[c]);
    ffnn_one(params.mention_ffnn, rep, fwd.m_acts.data() + static_cast<size_t>(c) * acts);
  }
}

void pair_scores_omp(const Parameters& params, DocForward& fwd, int threads) {
  const int pd = params.cfg.pair_dim();
  const int acts = params.pair_ffnn.acts_size();
  const int n = static_cast<int>(fwd.pair_i.size());
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int k = 0; k < n; ++k) {
    double* input = fwd.pair_inputs.data() + static_cast<size_t>(k) * pd;
    build_pair_input(params, fwd, k, input);
    fwd.sa[k] = ffnn_one(params.pair_ffnn, input, fwd.a_acts.data() + static_cast<size_t>(k) * acts);
  }
}

void pair_backward_omp(const Parameters& params, const DocForward& fwd, const Vec& dsa,
                       Parameters& grads, double* dreps, int threads) {
  const int n = static_cast<int>(fwd.pair_i.size());
  const int nt = resolve_threads(threads);
  std::vector<PairGradPartial> parts(kGradChunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (int chunk = 0; chunk < kGradChunks; ++chunk) {
    auto [lo, hi] = chunk_range(n, chunk);
    parts[chunk].init(params, static_cast<int>(fwd.cand.size()));
    pair_backward_range(params, fwd, dsa, lo, hi, parts[chunk]);
  }
  // merge in chunk order
  for (const PairGradPartial& part : parts) {
    auto add = [](const Vec& src, Vec& dst) {
      for (size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
    };
    add(part.ffnn.w1.a, grads.pair_ffnn.w1.a);
    add(part.ffnn.b1, grads.pair_ffnn.b1);
    add(part.ffnn.w2.a, grads.pair_ffnn.w2.a);
    add(part.ffnn.b2, grads.pair_ffnn.b2);
    add(part.ffnn.w_out, grads.pair_ffnn.w_out);
    add(part.ffnn.b_out, grads.pair_ffnn.b_out);
    add(part.dialogue.a, grads.dialogue_emb.a);
    add(part.speaker.a, grads.speaker_emb.a);
    add(part.dist.a, grads.dist_emb.a);
    for (size_t i = 0; i < part.dreps.size(); ++i) dreps[i] += part.dreps[i];
  }
}

void mention_backward_omp(const Parameters& params, const DocForward& fwd, const Vec& dsm,
                          Parameters& grads, double* dreps, int threads) {
  const int n = static_cast<int>(fwd.cand.size());
  const int nt = resolve_threads(threads);
  std::vector<Ffnn> parts(kGradChunks);
  // dreps rows are per-candidate, so chunks write disjoint rows of it and
  // only the FFNN grads need partials.
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (int chunk = 0; chunk < kGradChunks; ++chunk) {
    auto [lo, hi] = chunk_range(n, chunk);
    parts[chunk] = zeros_like(params.mention_ffnn);
    mention_backward_range(params, fwd, dsm, lo, hi, parts[chunk], dreps);
  }
  for (const Ffnn& part : parts) {
    auto add = [](const Vec& src, Vec& dst) {
      for (size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
    };
    add(part.w1.a, grads.mention_ffnn.w1.a);
    add(part.b1, grads.mention_ffnn.b1);
    add(part.w2.a, grads.mention_ffnn.w2.a);
    add(part.b2, grads.mention_ffnn.b2);
    add(part.w_out, grads.mention_ffnn.w_out);
    add(part.b_out, grads.mention_ffnn.b_out);
  }
}

void span_backward_omp(const Parameters& params, const DocForward& fwd, const double* dreps,
                       Parameters& grads, double* dctx, int threads) {
  const int n = static_cast<int>(fwd.cand.size());
  const int nt = resolve_threads(threads);
  std::vector<SpanGradPartial> parts(kGradChunks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (int chunk = 0; chunk < kGradChunks; ++chunk) {
    auto [lo, hi] = chunk_range(n, chunk);
    parts[chunk].init(params, fwd.num_tokens);
    span_backward_range(params, fwd, dreps, lo, hi, parts[chunk]);
  }
  for (const SpanGradPartial& part : parts) {
    for (size_t i = 0; i < part.att_w.size(); ++i) grads.att_w[i] += part.att_w[i];
    for (size_t i = 0; i < part.width_emb.a.size(); ++i) grads.width_emb.a[i] += part.width_emb.a[i];
    for (size_t i = 0; i < part.dctx.size(); ++i) dctx[i] += part.dctx[i];
  }
}

}  // namespace coref::kernels
