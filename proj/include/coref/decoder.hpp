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

#ifndef UACOREF_DECODER_HPP_
#define UACOREF_DECODER_HPP_

#include <vector>

#include "coref/model.hpp"
#include "coref/types.hpp"

namespace coref {

// Per candidate: chosen antecedent index, kEpsilon for none.
struct AntecedentSelection {
  std::vector<int> chosen;
};

// argmax over {epsilon} + window. A non-dummy antecedent wins only when its
// pair score strictly exceeds 0 (the epsilon score); ties at 0 go to
// epsilon, ties between non-dummy maxima go to the nearest antecedent.
// The slack rule applies: negative mention scores do not veto a selection.
AntecedentSelection select_antecedents(const ScoreTable& table);

// Clusters from the selection: connected components of the antecedent link
// graph, plus (when allow_singletons) a singleton cluster for every
// link-free candidate with s_m > 0. Link-free candidates with s_m <= 0 are
// discarded. allow_singletons=false gives plain mention-ranking decoding
// (multi-mention clusters only).
ClusterSet build_clusters(const ScoreTable& table, const AntecedentSelection& selection,
                          bool allow_singletons = true);

ClusterSet decode(const ScoreTable& table, bool allow_singletons = true);

}  // namespace coref

#endif  // UACOREF_DECODER_HPP_
