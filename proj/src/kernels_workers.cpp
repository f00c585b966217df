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

#include "kernels_impl.hpp"

namespace coref::kernels::detail {

void pair_backward_range(const Parameters& p, const DocForward& fwd, const Vec& dsa, int lo,
                         int hi, PairGradPartial& out) {
  const int sd = p.cfg.span_dim();
  const int fd = p.cfg.feature_emb_dim;
  const int pd = p.cfg.pair_dim();
  const int acts = p.pair_ffnn.acts_size();
  Vec dx(pd);
  for (int k = lo; k < hi; ++k) {
    if (dsa[k] == 0.0) continue;
    std::fill(dx.begin(), dx.end(), 0.0);
    const double* input = fwd.pair_inputs.data() + static_cast<size_t>(k) * pd;
    ffnn_backward_one(p.pair_ffnn, input, fwd.a_acts.data() + static_cast<size_t>(k) * acts,
                      dsa[k], out.ffnn, dx.data());
    const double* gi = fwd.reps.data() + static_cast<size_t>(fwd.pair_i[k]) * sd;
    const double* gj = fwd.reps.data() + static_cast<size_t>(fwd.pair_j[k]) * sd;
    double* di = out.dreps.data() + static_cast<size_t>(fwd.pair_i[k]) * sd;
    double* dj = out.dreps.data() + static_cast<size_t>(fwd.pair_j[k]) * sd;
    for (int c = 0; c < sd; ++c) {
      di[c] += dx[c] + dx[2 * sd + c] * gj[c];
      dj[c] += dx[sd + c] + dx[2 * sd + c] * gi[c];
    }
    double* rowd = out.dialogue.row(fwd.feat_dialogue[k]);
    double* rows = out.speaker.row(fwd.feat_speaker[k]);
    double* rowt = out.dist.row(fwd.feat_distance[k]);
    for (int c = 0; c < fd; ++c) {
      rowd[c] += dx[3 * sd + c];
      rows[c] += dx[3 * sd + fd + c];
      rowt[c] += dx[3 * sd + 2 * fd + c];
    }
  }
}

void mention_backward_range(const Parameters& p, const DocForward& fwd, const Vec& dsm, int lo,
                            int hi, Ffnn& ffnn_grad, double* dreps) {
  const int sd = p.cfg.span_dim();
  const int acts = p.mention_ffnn.acts_size();
  for (int c = lo; c < hi; ++c) {
    if (dsm[c] == 0.0) continue;
    ffnn_backward_one(p.mention_ffnn, fwd.reps.data() + static_cast<size_t>(c) * sd,
                      fwd.m_acts.data() + static_cast<size_t>(c) * acts, dsm[c], ffnn_grad,
                      dreps + static_cast<size_t>(c) * sd);
  }
}

void span_backward_range(const Parameters& p, const DocForward& fwd, const double* dreps, int lo,
                         int hi, SpanGradPartial& out) {
  const int d = p.cfg.embed_dim;
  const int sd = p.cfg.span_dim();
  Vec c_buf;
  for (int c = lo; c < hi; ++c) {
    const Span sp = fwd.spans[fwd.cand[c]];
    const int w = width(sp);
    const double* dg = dreps + static_cast<size_t>(c) * sd;
    const double* dhead = dg + 2 * d;
    const double* alpha = fwd.att.data() + fwd.att_offsets[c];

    double* dctx_a = out.dctx.data() + static_cast<size_t>(sp.start) * d;
    double* dctx_b = out.dctx.data() + static_cast<size_t>(sp.end) * d;
    for (int k = 0; k < d; ++k) {
      dctx_a[k] += dg[k];
      dctx_b[k] += dg[d + k];
    }

    // attention: head = sum_t alpha_t e_t, alpha = softmax(att_w . e_t)
    c_buf.assign(w, 0.0);
    double mean_c = 0.0;
    for (int t = 0; t < w; ++t) {
      const double* e = fwd.ctx.data() + static_cast<size_t>(sp.start + t) * d;
      double s = 0;
      for (int k = 0; k < d; ++k) s += dhead[k] * e[k];
      c_buf[t] = s;
      mean_c += alpha[t] * s;
    }
    for (int t = 0; t < w; ++t) {
      const double dl = alpha[t] * (c_buf[t] - mean_c);
      const double* e = fwd.ctx.data() + static_cast<size_t>(sp.start + t) * d;
      double* dctx_t = out.dctx.data() + static_cast<size_t>(sp.start + t) * d;
      for (int k = 0; k < d; ++k) {
        dctx_t[k] += alpha[t] * dhead[k] + dl * p.att_w[k];
        out.att_w[k] += dl * e[k];
      }
    }

    double* wg = out.width_emb.row(width_bucket(w));
    for (int k = 0; k < p.cfg.width_emb_dim; ++k) wg[k] += dg[3 * d + k];
  }
}

}  // namespace coref::kernels::detail
