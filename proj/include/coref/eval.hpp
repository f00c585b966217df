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

#ifndef UACOREF_EVAL_HPP_
#define UACOREF_EVAL_HPP_

#include <string>
#include <vector>

#include "coref/types.hpp"

namespace coref {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool degenerate = false;  // some component was 0/0 and reported as 0
};

// Numerators/denominators of one metric on one document; micro aggregation
// across documents sums these before taking the final ratios.
struct MetricCounts {
  double r_num = 0.0, r_den = 0.0;
  double p_num = 0.0, p_den = 0.0;

  MetricCounts& operator+=(const MetricCounts& o);
  Prf to_prf() const;
};

struct EvalReport {
  Prf muc;
  Prf b_cubed;
  Prf ceaf_phi4;
  double avg_f1 = 0.0;
  Prf mentions;
  Prf singletons;
};

// Removes excluded mentions from both sides and drops emptied clusters.
std::pair<ClusterSet, ClusterSet> align_and_filter(const ClusterSet& key,
                                                   const ClusterSet& response,
                                                   const std::vector<Span>& exclude);

// Per-document counts; the *_prf wrappers below are the single-pair ops.
MetricCounts muc_counts(const ClusterSet& key, const ClusterSet& response);
MetricCounts b_cubed_counts(const ClusterSet& key, const ClusterSet& response);
MetricCounts ceaf_phi4_counts(const ClusterSet& key, const ClusterSet& response);
MetricCounts mention_counts(const ClusterSet& key, const ClusterSet& response);
MetricCounts singleton_counts(const ClusterSet& key, const ClusterSet& response);

Prf muc(const ClusterSet& key, const ClusterSet& response);
// Throws Error when key has no mentions.
Prf b_cubed(const ClusterSet& key, const ClusterSet& response);
Prf ceaf_phi4(const ClusterSet& key, const ClusterSet& response);
Prf mention_prf(const ClusterSet& key, const ClusterSet& response);
Prf singleton_prf(const ClusterSet& key, const ClusterSet& response);

double avg_f1(const EvalReport& report);

enum class Aggregate { micro, macro };

// Scores matched key/response document pairs. `exclude_non_referring`
// removes each key document's non-referring spans from both sides before
// scoring. Document order must be aligned (same doc per index).
EvalReport evaluate_corpus(const std::vector<const Document*>& key_docs,
                           const std::vector<const ClusterSet*>& responses,
                           bool exclude_non_referring = true,
                           Aggregate aggregate = Aggregate::micro, int threads = 0);

// Key/response corpora matched by doc_id; missing or extra ids -> Error.
EvalReport evaluate(const Corpus& key, const Corpus& response,
                    bool exclude_non_referring = true,
                    Aggregate aggregate = Aggregate::micro, int threads = 0);

std::string render_report_table(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

}  // namespace coref

#endif  // UACOREF_EVAL_HPP_
