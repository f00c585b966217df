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

#include <doctest.h>

#include <queue>
#include <random>

#include "coref/decoder.hpp"
#include "helpers.hpp"

using namespace coref;

namespace {

// table builder: n width-1 candidates, all pair scores preset to `fill`
ScoreTable table_of(int n, double fill = -5.0, int window = 50) {
  ScoreTable t;
  t.max_antecedents = window;
  t.pair_offsets.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    t.candidates.push_back({i, i});
    t.mention_scores.push_back(0.0);
    t.pair_offsets[i + 1] = t.pair_offsets[i] + (i - t.window_begin(i));
  }
  t.antecedent_scores.assign(t.pair_offsets[n], fill);
  return t;
}

// s(i,j) = sm_i + sm_j + sa -> set sa so that s(i,j) == target
void set_pair(ScoreTable& t, int i, int j, double target) {
  t.antecedent_scores[t.pair_offsets[i] + (j - t.window_begin(i))] =
      target - t.mention_scores[i] - t.mention_scores[j];
}

// independent oracle: exhaustive argmax selection, then BFS components,
// then the positive-score singleton rule
ClusterSet oracle_decode(const ScoreTable& t, bool allow_singletons) {
  const int n = t.size();
  std::vector<int> link(n, kEpsilon);
  for (int i = 0; i < n; ++i) {
    double best = 0.0;
    for (int j = t.window_begin(i); j < i; ++j) {
      const double s = pair_score(t, i, j);
      if (s > best || (s == best && best > 0.0)) {  // nearest wins ties > 0
        best = s;
        link[i] = j;
      }
    }
    if (best <= 0.0) link[i] = kEpsilon;
  }
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    if (link[i] != kEpsilon) {
      adj[i].push_back(link[i]);
      adj[link[i]].push_back(i);
    }
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[s] = ncomp;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u])
        if (comp[v] < 0) {
          comp[v] = ncomp;
          q.push(v);
        }
    }
    ++ncomp;
  }
  std::vector<Cluster> groups(ncomp);
  std::vector<int> size(ncomp, 0);
  for (int i = 0; i < n; ++i) ++size[comp[i]];
  for (int i = 0; i < n; ++i) {
    if (size[comp[i]] == 1) {
      if (allow_singletons && t.mention_scores[i] > 0.0) groups[comp[i]].push_back(t.candidates[i]);
    } else {
      groups[comp[i]].push_back(t.candidates[i]);
    }
  }
  ClusterSet out;
  for (auto& g : groups)
    if (!g.empty()) out.clusters.push_back(std::move(g));
  out.normalize();
  return out;
}

}  // namespace

TEST_CASE("all-negative pair scores select epsilon") {
  ScoreTable t = table_of(4);
  AntecedentSelection sel = select_antecedents(t);
  for (int c : sel.chosen) CHECK(c == kEpsilon);
}

TEST_CASE("slack rule: negative mention scores do not veto a link") {
  ScoreTable t = table_of(2);
  t.mention_scores = {0.4, -0.3};  // "the gym", "that building"
  set_pair(t, 1, 0, 0.6);          // s(1,0) > 0 despite s_m(1) < 0
  AntecedentSelection sel = select_antecedents(t);
  CHECK(sel.chosen[1] == 0);
  ClusterSet cs = build_clusters(t, sel);
  CHECK(cs.clusters == std::vector<Cluster>{{{0, 0}, {1, 1}}});
}

TEST_CASE("tied non-dummy maxima resolve to the nearest antecedent") {
  ScoreTable t = table_of(3);
  set_pair(t, 2, 0, 0.4);
  set_pair(t, 2, 1, 0.4);
  AntecedentSelection sel = select_antecedents(t);
  CHECK(sel.chosen[2] == 1);

  // exhaustive argmax oracle agrees
  double best = 0;
  int arg = kEpsilon;
  for (int j = 0; j < 2; ++j)
    if (pair_score(t, 2, j) >= best && pair_score(t, 2, j) > 0) {
      best = pair_score(t, 2, j);
      arg = j;
    }
  CHECK(sel.chosen[2] == arg);
}

TEST_CASE("tie with epsilon at exactly zero goes to epsilon") {
  ScoreTable t = table_of(2);
  set_pair(t, 1, 0, 0.0);
  CHECK(select_antecedents(t).chosen[1] == kEpsilon);
}

TEST_CASE("linkless candidates: positive s_m becomes a singleton, rest dropped") {
  ScoreTable t = table_of(3);
  t.mention_scores = {0.6, -0.8, 0.0};  // "food truck", "slightly", boundary
  ClusterSet cs = decode(t);
  CHECK(cs.clusters == std::vector<Cluster>{{{0, 0}}});  // strict > 0
}

TEST_CASE("chain a<-b<-c collapses into one cluster") {
  ScoreTable t = table_of(3);
  t.mention_scores = {-0.1, -0.2, -0.3};
  set_pair(t, 1, 0, 0.5);
  set_pair(t, 2, 1, 0.5);
  ClusterSet cs = decode(t);
  CHECK(cs.clusters == std::vector<Cluster>{{{0, 0}, {1, 1}, {2, 2}}});
}

TEST_CASE("epsilon-selected candidate joins a cluster via an inbound link") {
  ScoreTable t = table_of(2);
  t.mention_scores = {-0.5, 0.2};  // 0 selects epsilon and has s_m < 0
  set_pair(t, 1, 0, 0.3);          // but 1 links to it
  ClusterSet cs = decode(t);
  CHECK(cs.clusters == std::vector<Cluster>{{{0, 0}, {1, 1}}});
}

TEST_CASE("mention-ranking mode never creates singletons") {
  ScoreTable t = table_of(3);
  t.mention_scores = {0.9, 0.9, -0.1};
  set_pair(t, 2, 1, 0.7);
  ClusterSet cs = decode(t, /*allow_singletons=*/false);
  CHECK(cs.clusters == std::vector<Cluster>{{{1, 1}, {2, 2}}});
}

TEST_CASE("raising s_m across zero adds exactly one singleton") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  ScoreTable t = table_of(6);
  for (double& s : t.antecedent_scores) s = -2.0 + u(rng);  // keep links off for cand 3
  t.mention_scores = {0.5, -0.2, 0.4, -0.01, 0.3, -0.6};
  // freeze pair scores, then edit s_m of the epsilon-selected, link-free 3
  std::vector<double> frozen;
  for (int i = 0; i < t.size(); ++i)
    for (int j = t.window_begin(i); j < i; ++j) frozen.push_back(pair_score(t, i, j));
  ClusterSet before = decode(t);

  ScoreTable edited = t;
  edited.mention_scores[3] = 0.01;
  // restore all pair scores by adjusting s_a
  int k = 0;
  for (int i = 0; i < edited.size(); ++i)
    for (int j = edited.window_begin(i); j < i; ++j) set_pair(edited, i, j, frozen[k++]);
  ClusterSet after = decode(edited);

  CHECK(after.clusters.size() == before.clusters.size() + 1);
  // everything else unchanged
  int found = 0;
  for (const Cluster& c : after.clusters)
    if (c == Cluster{{3, 3}})
      ++found;
    else
      CHECK(std::find(before.clusters.begin(), before.clusters.end(), c) !=
            before.clusters.end());
  CHECK(found == 1);
}

TEST_CASE("random tables match the graph-components oracle") {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int it = 0; it < 300; ++it) {
    const int n = 1 + static_cast<int>(rng() % 12);
    ScoreTable t = table_of(n, 0.0, 1 + static_cast<int>(rng() % 6));
    for (double& s : t.mention_scores) s = u(rng);
    for (double& s : t.antecedent_scores) s = u(rng);
    for (bool allow : {true, false}) {
      ClusterSet got = decode(t, allow);
      ClusterSet want = oracle_decode(t, allow);
      CHECK(got == want);
    }
  }
}

TEST_CASE("decoding is a pure function of the table") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1, 1);
  ScoreTable t = table_of(10, 0.0, 5);
  for (double& s : t.mention_scores) s = u(rng);
  for (double& s : t.antecedent_scores) s = u(rng);
  CHECK(decode(t) == decode(t));
}

TEST_CASE("build_clusters rejects malformed selections") {
  ScoreTable t = table_of(3);
  AntecedentSelection sel;
  sel.chosen = {kEpsilon, 2, kEpsilon};  // 1 -> 2 references a later candidate
  CHECK_THROWS_AS(build_clusters(t, sel), Error);
}
