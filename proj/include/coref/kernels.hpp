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

#ifndef UACOREF_KERNELS_HPP_
#define UACOREF_KERNELS_HPP_

#include "coref/model.hpp"

namespace coref::kernels {

// Data-parallel hot loops of the scorer. Every kernel has a serial
// reference implementation and an OpenMP one, selected by Exec::parallel;
// forward kernels produce bit-identical outputs on both paths, backward
// kernels agree up to floating-point accumulation order (fixed chunking
// makes the parallel path deterministic run-to-run for any thread count).

// ctx[t] = base[t] + cur*base[first(sent)] + prev*base[first(prev sent)]
void context_mix(const double* base, int num_tokens, int dim,
                 const std::vector<Sentence>& sentences, double cur, double prev, double* ctx,
                 const Exec& exec);

// Mention score for every span; representations are built in scratch space
// and discarded. acts/att outputs are not produced here.
void span_mention_scores(const Parameters& params, const double* ctx, int num_tokens,
                         const std::vector<Span>& spans, double* sm_out, const Exec& exec);

// Full representations + attention weights + mention activations for the
// candidate subset. att_offsets must be prefilled (ragged layout).
void candidate_reps(const Parameters& params, const double* ctx, DocForward& fwd,
                    const Exec& exec);

// Pair inputs, activations and antecedent scores for all pairs listed in
// fwd.pair_i / pair_j / feat_*.
void pair_scores(const Parameters& params, DocForward& fwd, const Exec& exec);

// Backward of pair_scores: dsa is d(loss)/d(s_a) per pair; accumulates into
// the pair FFNN + feature embedding grads and into dreps (|cand| x span_dim).
void pair_backward(const Parameters& params, const DocForward& fwd, const Vec& dsa,
                   Parameters& grads, double* dreps, const Exec& exec);

// Backward of the candidate mention scores: dsm per candidate.
void mention_backward(const Parameters& params, const DocForward& fwd, const Vec& dsm,
                      Parameters& grads, double* dreps, const Exec& exec);

// Backward from candidate representations to context vectors, attention
// projection and width embeddings. dctx is T x d, accumulated.
void span_backward(const Parameters& params, const DocForward& fwd, const double* dreps,
                   Parameters& grads, double* dctx, const Exec& exec);

// Serial tail of the backward pass: context mixing and token table rows.
void context_backward(const DocForward& fwd, const std::vector<Sentence>& sentences, double cur,
                      double prev, const double* dctx, Parameters& grads);

int max_threads();

}  // namespace coref::kernels

#endif  // UACOREF_KERNELS_HPP_
