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

#include "coref/decoder.hpp"

#include <numeric>

namespace coref {

AntecedentSelection select_antecedents(const ScoreTable& table) {
  AntecedentSelection sel;
  const int n = table.size();
  sel.chosen.assign(n, kEpsilon);
  for (int i = 0; i < n; ++i) {
    double best = 0.0;  // epsilon score
    int best_j = kEpsilon;
    for (int j = table.window_begin(i); j < i; ++j) {
      const double s = pair_score(table, i, j);
      // >= keeps the nearest antecedent among ties; epsilon wins ties at 0
      // because a candidate only replaces it with a strictly positive score.
      if (s > 0.0 && (best_j == kEpsilon ? s > best : s >= best)) {
        best = s;
        best_j = j;
      }
    }
    sel.chosen[i] = best_j;
  }
  return sel;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ClusterSet build_clusters(const ScoreTable& table, const AntecedentSelection& selection,
                          bool allow_singletons) {
  const int n = table.size();
  if (static_cast<int>(selection.chosen.size()) != n)
    throw Error("build_clusters: selection size mismatch");

  UnionFind uf(n);
  std::vector<char> linked(n, 0);
  for (int i = 0; i < n; ++i) {
    const int j = selection.chosen[i];
    if (j == kEpsilon) continue;
    if (j >= i) throw Error("build_clusters: selection references a later candidate");
    uf.unite(i, j);
    linked[i] = linked[j] = 1;
  }

  std::vector<std::vector<int>> members(n);
  for (int i = 0; i < n; ++i) members[uf.find(i)].push_back(i);

  ClusterSet out;
  for (int r = 0; r < n; ++r) {
    if (members[r].empty()) continue;
    const bool multi = members[r].size() > 1;
    if (!multi) {
      const int i = members[r][0];
      // Link-free candidate: singleton iff s_m strictly positive.
      if (!allow_singletons || linked[i] || table.mention_scores[i] <= 0.0) continue;
    }
    Cluster c;
    for (int i : members[r]) c.push_back(table.candidates[i]);
    out.clusters.push_back(std::move(c));
  }
  out.normalize();
  return out;
}

ClusterSet decode(const ScoreTable& table, bool allow_singletons) {
  return build_clusters(table, select_antecedents(table), allow_singletons);
}

}  // namespace coref
