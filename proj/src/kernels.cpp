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

#include "coref/kernels.hpp"

namespace coref::kernels {

// backends (kernels_serial.cpp / kernels_omp.cpp)
void context_mix_serial(const double*, int, int, const std::vector<Sentence>&, double, double,
                        double*);
void context_mix_omp(const double*, int, int, const std::vector<Sentence>&, double, double,
                     double*, int);
void span_mention_scores_serial(const Parameters&, const double*, const std::vector<Span>&,
                                double*);
void span_mention_scores_omp(const Parameters&, const double*, const std::vector<Span>&, double*,
                             int);
void candidate_reps_serial(const Parameters&, const double*, DocForward&);
void candidate_reps_omp(const Parameters&, const double*, DocForward&, int);
void pair_scores_serial(const Parameters&, DocForward&);
void pair_scores_omp(const Parameters&, DocForward&, int);
void pair_backward_serial(const Parameters&, const DocForward&, const Vec&, Parameters&, double*);
void pair_backward_omp(const Parameters&, const DocForward&, const Vec&, Parameters&, double*,
                       int);
void mention_backward_serial(const Parameters&, const DocForward&, const Vec&, Parameters&,
                             double*);
void mention_backward_omp(const Parameters&, const DocForward&, const Vec&, Parameters&, double*,
                          int);
void span_backward_serial(const Parameters&, const DocForward&, const double*, Parameters&,
                          double*);
void span_backward_omp(const Parameters&, const DocForward&, const double*, Parameters&, double*,
                       int);

void context_mix(const double* base, int num_tokens, int dim,
                 const std::vector<Sentence>& sentences, double cur, double prev, double* ctx,
                 const Exec& exec) {
  if (exec.parallel)
    context_mix_omp(base, num_tokens, dim, sentences, cur, prev, ctx, exec.threads);
  else
    context_mix_serial(base, num_tokens, dim, sentences, cur, prev, ctx);
}

void span_mention_scores(const Parameters& params, const double* ctx, int /*num_tokens*/,
                         const std::vector<Span>& spans, double* sm_out, const Exec& exec) {
  if (exec.parallel)
    span_mention_scores_omp(params, ctx, spans, sm_out, exec.threads);
  else
    span_mention_scores_serial(params, ctx, spans, sm_out);
}

void candidate_reps(const Parameters& params, const double* ctx, DocForward& fwd,
                    const Exec& exec) {
  if (exec.parallel)
    candidate_reps_omp(params, ctx, fwd, exec.threads);
  else
    candidate_reps_serial(params, ctx, fwd);
}

void pair_scores(const Parameters& params, DocForward& fwd, const Exec& exec) {
  if (exec.parallel)
    pair_scores_omp(params, fwd, exec.threads);
  else
    pair_scores_serial(params, fwd);
}

void pair_backward(const Parameters& params, const DocForward& fwd, const Vec& dsa,
                   Parameters& grads, double* dreps, const Exec& exec) {
  if (exec.parallel)
    pair_backward_omp(params, fwd, dsa, grads, dreps, exec.threads);
  else
    pair_backward_serial(params, fwd, dsa, grads, dreps);
}

void mention_backward(const Parameters& params, const DocForward& fwd, const Vec& dsm,
                      Parameters& grads, double* dreps, const Exec& exec) {
  if (exec.parallel)
    mention_backward_omp(params, fwd, dsm, grads, dreps, exec.threads);
  else
    mention_backward_serial(params, fwd, dsm, grads, dreps);
}

void span_backward(const Parameters& params, const DocForward& fwd, const double* dreps,
                   Parameters& grads, double* dctx, const Exec& exec) {
  if (exec.parallel)
    span_backward_omp(params, fwd, dreps, grads, dctx, exec.threads);
  else
    span_backward_serial(params, fwd, dreps, grads, dctx);
}

void context_backward(const DocForward& fwd, const std::vector<Sentence>& sentences, double cur,
                      double prev, const double* dctx, Parameters& grads) {
  if (grads.token_table.rows == 0) return;  // frozen provider: nothing to update
  const int d = grads.token_table.cols;
  Vec dbase(fwd.base.size(), 0.0);
  for (int s = 0; s < static_cast<int>(sentences.size()); ++s) {
    Vec sent_sum(d, 0.0);
    for (int t = sentences[s].start; t < sentences[s].end; ++t) {
      const double* row = dctx + static_cast<size_t>(t) * d;
      double* out = dbase.data() + static_cast<size_t>(t) * d;
      for (int k = 0; k < d; ++k) {
        out[k] += row[k];
        sent_sum[k] += row[k];
      }
    }
    double* fc = dbase.data() + static_cast<size_t>(sentences[s].start) * d;
    for (int k = 0; k < d; ++k) fc[k] += cur * sent_sum[k];
    if (s > 0) {
      double* fp = dbase.data() + static_cast<size_t>(sentences[s - 1].start) * d;
      for (int k = 0; k < d; ++k) fp[k] += prev * sent_sum[k];
    }
  }
  for (int t = 0; t < fwd.num_tokens; ++t) {
    const int row = fwd.token_rows[t];
    if (row < 0) continue;
    double* dst = grads.token_table.row(row);
    const double* src = dbase.data() + static_cast<size_t>(t) * d;
    for (int k = 0; k < d; ++k) dst[k] += src[k];
  }
}

}  // namespace coref::kernels
