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

// Shared per-item workers used by both the serial reference kernels and the
// OpenMP kernels. Everything here is single-item or single-range; the
// backends differ only in how they drive these workers.

#ifndef UACOREF_KERNELS_IMPL_HPP_
#define UACOREF_KERNELS_IMPL_HPP_

#include <algorithm>
#include <cmath>

#include "coref/model.hpp"

namespace coref::kernels::detail {

// ctx row for one token.
inline void mix_one(const double* base, int dim, int t, int first_cur, int first_prev, double cur,
                    double prev, double* out) {
  const double* x = base + static_cast<size_t>(t) * dim;
  const double* fc = base + static_cast<size_t>(first_cur) * dim;
  for (int k = 0; k < dim; ++k) out[k] = x[k] + cur * fc[k];
  if (first_prev >= 0) {
    const double* fp = base + static_cast<size_t>(first_prev) * dim;
    for (int k = 0; k < dim; ++k) out[k] += prev * fp[k];
  }
}

// Builds [ctx[a] | ctx[b] | soft head | width bucket] for span (a,b).
// att_out (length = width) receives the attention weights when non-null.
inline void build_span_rep(const Parameters& p, const double* ctx, Span sp, double* rep,
                           double* att_out) {
  const int d = p.cfg.embed_dim;
  const int w = width(sp);
  const double* ea = ctx + static_cast<size_t>(sp.start) * d;
  const double* eb = ctx + static_cast<size_t>(sp.end) * d;
  std::copy(ea, ea + d, rep);
  std::copy(eb, eb + d, rep + d);

  // soft head: softmax over att_w . ctx[t] within the span
  double* head = rep + 2 * d;
  std::fill(head, head + d, 0.0);
  double logits[64];
  Vec big;
  double* l = w <= 64 ? logits : (big.resize(w), big.data());
  double maxl = -1e300;
  for (int t = 0; t < w; ++t) {
    const double* e = ctx + static_cast<size_t>(sp.start + t) * d;
    double s = 0;
    for (int k = 0; k < d; ++k) s += p.att_w[k] * e[k];
    l[t] = s;
    maxl = std::max(maxl, s);
  }
  double z = 0;
  for (int t = 0; t < w; ++t) {
    l[t] = std::exp(l[t] - maxl);
    z += l[t];
  }
  for (int t = 0; t < w; ++t) {
    const double a = l[t] / z;
    if (att_out) att_out[t] = a;
    const double* e = ctx + static_cast<size_t>(sp.start + t) * d;
    for (int k = 0; k < d; ++k) head[k] += a * e[k];
  }

  const double* wrow = p.width_emb.row(width_bucket(w));
  std::copy(wrow, wrow + p.cfg.width_emb_dim, rep + 3 * d);
}

// Assembles the pair input for pair index k into `input` (pair_dim).
inline void build_pair_input(const Parameters& p, const DocForward& fwd, int k, double* input) {
  const int sd = p.cfg.span_dim();
  const int fd = p.cfg.feature_emb_dim;
  const double* gi = fwd.reps.data() + static_cast<size_t>(fwd.pair_i[k]) * sd;
  const double* gj = fwd.reps.data() + static_cast<size_t>(fwd.pair_j[k]) * sd;
  std::copy(gi, gi + sd, input);
  std::copy(gj, gj + sd, input + sd);
  for (int k2 = 0; k2 < sd; ++k2) input[2 * sd + k2] = gi[k2] * gj[k2];
  const double* fr = p.dialogue_emb.row(fwd.feat_dialogue[k]);
  std::copy(fr, fr + fd, input + 3 * sd);
  fr = p.speaker_emb.row(fwd.feat_speaker[k]);
  std::copy(fr, fr + fd, input + 3 * sd + fd);
  fr = p.dist_emb.row(fwd.feat_distance[k]);
  std::copy(fr, fr + fd, input + 3 * sd + 2 * fd);
}

// Partial gradients for one chunk of the pair backward.
struct PairGradPartial {
  Ffnn ffnn;
  Matrix dialogue, speaker, dist;
  Vec dreps;  // |cand| x span_dim

  void init(const Parameters& p, int num_cand) {
    ffnn = zeros_like(p.pair_ffnn);
    dialogue = Matrix(p.dialogue_emb.rows, p.dialogue_emb.cols);
    speaker = Matrix(p.speaker_emb.rows, p.speaker_emb.cols);
    dist = Matrix(p.dist_emb.rows, p.dist_emb.cols);
    dreps.assign(static_cast<size_t>(num_cand) * p.cfg.span_dim(), 0.0);
  }
};

void pair_backward_range(const Parameters& p, const DocForward& fwd, const Vec& dsa, int lo,
                         int hi, PairGradPartial& out);

struct SpanGradPartial {
  Vec att_w;
  Matrix width_emb;
  Vec dctx;  // T x d

  void init(const Parameters& p, int num_tokens) {
    att_w.assign(p.att_w.size(), 0.0);
    width_emb = Matrix(p.width_emb.rows, p.width_emb.cols);
    dctx.assign(static_cast<size_t>(num_tokens) * p.cfg.embed_dim, 0.0);
  }
};

void span_backward_range(const Parameters& p, const DocForward& fwd, const double* dreps, int lo,
                         int hi, SpanGradPartial& out);

void mention_backward_range(const Parameters& p, const DocForward& fwd, const Vec& dsm, int lo,
                            int hi, Ffnn& ffnn_grad, double* dreps);

// Fixed chunk count for deterministic parallel accumulation.
constexpr int kGradChunks = 8;

inline std::pair<int, int> chunk_range(int n, int chunk) {
  const int per = (n + kGradChunks - 1) / kGradChunks;
  const int lo = chunk * per;
  return {std::min(lo, n), std::min(lo + per, n)};
}

}  // namespace coref::kernels::detail

#endif  // UACOREF_KERNELS_IMPL_HPP_
