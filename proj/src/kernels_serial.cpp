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

// Serial reference implementations. Kept deliberately simple; the OpenMP
// kernels are tested against these.

#include "kernels_impl.hpp"

namespace coref::kernels {

using namespace detail;

void context_mix_serial(const double* base, int num_tokens, int dim,
                        const std::vector<Sentence>& sentences, double cur, double prev,
                        double* ctx) {
  for (int s = 0; s < static_cast<int>(sentences.size()); ++s) {
    const int first_cur = sentences[s].start;
    const int first_prev = s > 0 ? sentences[s - 1].start : -1;
    for (int t = sentences[s].start; t < sentences[s].end; ++t)
      mix_one(base, dim, t, first_cur, first_prev, cur, prev,
              ctx + static_cast<size_t>(t) * dim);
  }
  (void)num_tokens;
}

void span_mention_scores_serial(const Parameters& params, const double* ctx,
                                const std::vector<Span>& spans, double* sm_out) {
  Vec rep(params.cfg.span_dim());
  for (size_t s = 0; s < spans.size(); ++s) {
    build_span_rep(params, ctx, spans[s], rep.data(), nullptr);
    sm_out[s] = ffnn_one(params.mention_ffnn, rep.data(), nullptr);
  }
}

void candidate_reps_serial(const Parameters& params, const double* ctx, DocForward& fwd) {
  const int sd = params.cfg.span_dim();
  const int acts = params.mention_ffnn.acts_size();
  for (size_t c = 0; c < fwd.cand.size(); ++c) {
    double* rep = fwd.reps.data() + c * sd;
    build_span_rep(params, ctx, fwd.spans[fwd.cand[c]], rep,
                   fwd.att.data() + fwd.att_offsets[c]);
    ffnn_one(params.mention_ffnn, rep, fwd.m_acts.data() + c * acts);
  }
}

void pair_scores_serial(const Parameters& params, DocForward& fwd) {
  const int pd = params.cfg.pair_dim();
  const int acts = params.pair_ffnn.acts_size();
  for (size_t k = 0; k < fwd.pair_i.size(); ++k) {
    double* input = fwd.pair_inputs.data() + k * pd;
    build_pair_input(params, fwd, static_cast<int>(k), input);
    fwd.sa[k] = ffnn_one(params.pair_ffnn, input, fwd.a_acts.data() + k * acts);
  }
}

void pair_backward_serial(const Parameters& params, const DocForward& fwd, const Vec& dsa,
                          Parameters& grads, double* dreps) {
  PairGradPartial part;
  part.ffnn = std::move(grads.pair_ffnn);
  part.dialogue = std::move(grads.dialogue_emb);
  part.speaker = std::move(grads.speaker_emb);
  part.dist = std::move(grads.dist_emb);
  part.dreps.assign(fwd.cand.size() * params.cfg.span_dim(), 0.0);
  pair_backward_range(params, fwd, dsa, 0, static_cast<int>(fwd.pair_i.size()), part);
  grads.pair_ffnn = std::move(part.ffnn);
  grads.dialogue_emb = std::move(part.dialogue);
  grads.speaker_emb = std::move(part.speaker);
  grads.dist_emb = std::move(part.dist);
  for (size_t i = 0; i < part.dreps.size(); ++i) dreps[i] += part.dreps[i];
}

void mention_backward_serial(const Parameters& params, const DocForward& fwd, const Vec& dsm,
                             Parameters& grads, double* dreps) {
  mention_backward_range(params, fwd, dsm, 0, static_cast<int>(fwd.cand.size()),
                         grads.mention_ffnn, dreps);
}

void span_backward_serial(const Parameters& params, const DocForward& fwd, const double* dreps,
                          Parameters& grads, double* dctx) {
  SpanGradPartial part;
  part.att_w = std::move(grads.att_w);
  part.width_emb = std::move(grads.width_emb);
  part.dctx.assign(static_cast<size_t>(fwd.num_tokens) * params.cfg.embed_dim, 0.0);
  span_backward_range(params, fwd, dreps, 0, static_cast<int>(fwd.cand.size()), part);
  grads.att_w = std::move(part.att_w);
  grads.width_emb = std::move(part.width_emb);
  for (size_t i = 0; i < part.dctx.size(); ++i) dctx[i] += part.dctx[i];
}

}  // namespace coref::kernels
