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

#include "coref/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "coref/assignment.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coref {
namespace {

std::set<Span> mention_set(const ClusterSet& cs) {
  std::set<Span> out;
  for (const Cluster& c : cs.clusters) out.insert(c.begin(), c.end());
  return out;
}

std::set<Span> singleton_set(const ClusterSet& cs) {
  std::set<Span> out;
  for (const Cluster& c : cs.clusters)
    if (c.size() == 1) out.insert(c[0]);
  return out;
}

// Cluster index per mention; -1 when unmatched.
std::map<Span, int> mention_to_cluster(const ClusterSet& cs) {
  std::map<Span, int> out;
  for (int i = 0; i < static_cast<int>(cs.clusters.size()); ++i)
    for (Span sp : cs.clusters[i]) out[sp] = i;
  return out;
}

double safe_div(double num, double den, bool* degenerate) {
  if (den == 0.0) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  return num / den;
}

// One direction of the MUC link metric: sum over `from` clusters of
// (|K| - partitions of K w.r.t. `to`) / (|K| - 1).
void muc_direction(const ClusterSet& from, const ClusterSet& to, double& num, double& den) {
  std::map<Span, int> to_cluster = mention_to_cluster(to);
  for (const Cluster& k : from.clusters) {
    std::set<int> parts;
    int unmatched = 0;
    for (Span sp : k) {
      auto it = to_cluster.find(sp);
      if (it == to_cluster.end())
        ++unmatched;
      else
        parts.insert(it->second);
    }
    num += static_cast<double>(k.size()) - (parts.size() + unmatched);
    den += static_cast<double>(k.size()) - 1;
  }
}

void b_cubed_direction(const ClusterSet& from, const ClusterSet& to, double& num, double& den) {
  std::map<Span, int> to_cluster = mention_to_cluster(to);
  for (const Cluster& k : from.clusters) {
    // intersection size with each `to` cluster touched by k
    std::map<int, int> overlap;
    for (Span sp : k) {
      auto it = to_cluster.find(sp);
      if (it != to_cluster.end()) ++overlap[it->second];
    }
    for (Span sp : k) {
      auto it = to_cluster.find(sp);
      if (it != to_cluster.end())
        num += static_cast<double>(overlap[it->second]) / static_cast<double>(k.size());
      ++den;
    }
  }
}

}  // namespace

MetricCounts& MetricCounts::operator+=(const MetricCounts& o) {
  r_num += o.r_num;
  r_den += o.r_den;
  p_num += o.p_num;
  p_den += o.p_den;
  return *this;
}

Prf MetricCounts::to_prf() const {
  Prf out;
  bool degenerate = false;
  out.recall = safe_div(r_num, r_den, &degenerate);
  out.precision = safe_div(p_num, p_den, &degenerate);
  out.f1 = (out.precision + out.recall) > 0
               ? 2 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  out.degenerate = degenerate;
  return out;
}

std::pair<ClusterSet, ClusterSet> align_and_filter(const ClusterSet& key,
                                                   const ClusterSet& response,
                                                   const std::vector<Span>& exclude) {
  std::set<Span> drop(exclude.begin(), exclude.end());
  auto filter = [&](const ClusterSet& cs) {
    ClusterSet out;
    for (const Cluster& c : cs.clusters) {
      Cluster kept;
      for (Span sp : c)
        if (!drop.count(sp)) kept.push_back(sp);
      if (!kept.empty()) out.clusters.push_back(std::move(kept));
    }
    out.normalize();
    return out;
  };
  return {filter(key), filter(response)};
}

MetricCounts muc_counts(const ClusterSet& key, const ClusterSet& response) {
  MetricCounts c;
  muc_direction(key, response, c.r_num, c.r_den);
  muc_direction(response, key, c.p_num, c.p_den);
  return c;
}

MetricCounts b_cubed_counts(const ClusterSet& key, const ClusterSet& response) {
  MetricCounts c;
  b_cubed_direction(key, response, c.r_num, c.r_den);
  b_cubed_direction(response, key, c.p_num, c.p_den);
  return c;
}

MetricCounts ceaf_phi4_counts(const ClusterSet& key, const ClusterSet& response) {
  MetricCounts c;
  const int nk = static_cast<int>(key.clusters.size());
  const int nr = static_cast<int>(response.clusters.size());
  c.r_den = nk;
  c.p_den = nr;
  if (nk == 0 || nr == 0) return c;
  std::vector<double> phi(static_cast<size_t>(nk) * nr, 0.0);
  for (int i = 0; i < nk; ++i) {
    const std::set<Span> k(key.clusters[i].begin(), key.clusters[i].end());
    for (int j = 0; j < nr; ++j) {
      int inter = 0;
      for (Span sp : response.clusters[j]) inter += k.count(sp);
      phi[static_cast<size_t>(i) * nr + j] =
          2.0 * inter / static_cast<double>(key.clusters[i].size() + response.clusters[j].size());
    }
  }
  double total = max_assignment(phi, nk, nr);
  c.r_num = total;
  c.p_num = total;
  return c;
}

MetricCounts mention_counts(const ClusterSet& key, const ClusterSet& response) {
  std::set<Span> k = mention_set(key), r = mention_set(response);
  MetricCounts c;
  int inter = 0;
  for (Span sp : r) inter += k.count(sp);
  c.r_num = inter;
  c.r_den = static_cast<double>(k.size());
  c.p_num = inter;
  c.p_den = static_cast<double>(r.size());
  return c;
}

MetricCounts singleton_counts(const ClusterSet& key, const ClusterSet& response) {
  std::set<Span> k = singleton_set(key), r = singleton_set(response);
  MetricCounts c;
  int inter = 0;
  for (Span sp : r) inter += k.count(sp);
  c.r_num = inter;
  c.r_den = static_cast<double>(k.size());
  c.p_num = inter;
  c.p_den = static_cast<double>(r.size());
  return c;
}

Prf muc(const ClusterSet& key, const ClusterSet& response) {
  return muc_counts(key, response).to_prf();
}

Prf b_cubed(const ClusterSet& key, const ClusterSet& response) {
  if (mention_set(key).empty()) throw Error("b_cubed: key has no mentions");
  return b_cubed_counts(key, response).to_prf();
}

Prf ceaf_phi4(const ClusterSet& key, const ClusterSet& response) {
  return ceaf_phi4_counts(key, response).to_prf();
}

Prf mention_prf(const ClusterSet& key, const ClusterSet& response) {
  return mention_counts(key, response).to_prf();
}

Prf singleton_prf(const ClusterSet& key, const ClusterSet& response) {
  return singleton_counts(key, response).to_prf();
}

double avg_f1(const EvalReport& report) {
  return (report.muc.f1 + report.b_cubed.f1 + report.ceaf_phi4.f1) / 3.0;
}

namespace {

struct DocCounts {
  MetricCounts muc, b3, ceaf, mentions, singletons;
};

DocCounts score_one(const ClusterSet& key, const ClusterSet& response) {
  DocCounts d;
  d.muc = muc_counts(key, response);
  d.b3 = b_cubed_counts(key, response);
  d.ceaf = ceaf_phi4_counts(key, response);
  d.mentions = mention_counts(key, response);
  d.singletons = singleton_counts(key, response);
  return d;
}

}  // namespace

EvalReport evaluate_corpus(const std::vector<const Document*>& key_docs,
                           const std::vector<const ClusterSet*>& responses,
                           bool exclude_non_referring, Aggregate aggregate, int threads) {
  if (key_docs.size() != responses.size())
    throw Error("evaluate_corpus: key/response size mismatch");
  const int n = static_cast<int>(key_docs.size());
  std::vector<DocCounts> per_doc(n);

#ifdef _OPENMP
  int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
  for (int i = 0; i < n; ++i) {
    const Document& doc = *key_docs[i];
    ClusterSet key = doc.gold_clusters.value_or(ClusterSet{});
    auto [k, r] = align_and_filter(key, *responses[i],
                                   exclude_non_referring ? doc.non_referring : std::vector<Span>{});
    per_doc[i] = score_one(k, r);
  }

  EvalReport report;
  if (aggregate == Aggregate::micro) {
    DocCounts total;
    for (const DocCounts& d : per_doc) {
      total.muc += d.muc;
      total.b3 += d.b3;
      total.ceaf += d.ceaf;
      total.mentions += d.mentions;
      total.singletons += d.singletons;
    }
    report.muc = total.muc.to_prf();
    report.b_cubed = total.b3.to_prf();
    report.ceaf_phi4 = total.ceaf.to_prf();
    report.mentions = total.mentions.to_prf();
    report.singletons = total.singletons.to_prf();
  } else {
    auto mean = [n](auto pick, const std::vector<DocCounts>& docs) {
      Prf acc;
      for (const DocCounts& d : docs) {
        Prf p = pick(d).to_prf();
        acc.precision += p.precision;
        acc.recall += p.recall;
        acc.degenerate = acc.degenerate || p.degenerate;
      }
      if (n > 0) {
        acc.precision /= n;
        acc.recall /= n;
      }
      acc.f1 = (acc.precision + acc.recall) > 0
                   ? 2 * acc.precision * acc.recall / (acc.precision + acc.recall)
                   : 0.0;
      return acc;
    };
    report.muc = mean([](const DocCounts& d) { return d.muc; }, per_doc);
    report.b_cubed = mean([](const DocCounts& d) { return d.b3; }, per_doc);
    report.ceaf_phi4 = mean([](const DocCounts& d) { return d.ceaf; }, per_doc);
    report.mentions = mean([](const DocCounts& d) { return d.mentions; }, per_doc);
    report.singletons = mean([](const DocCounts& d) { return d.singletons; }, per_doc);
  }
  report.avg_f1 = avg_f1(report);
  return report;
}

EvalReport evaluate(const Corpus& key, const Corpus& response, bool exclude_non_referring,
                    Aggregate aggregate, int threads) {
  std::map<std::string, const Document*> by_id;
  for (const Document& d : response.documents) by_id[d.doc_id] = &d;

  std::vector<const Document*> key_docs;
  std::vector<const ClusterSet*> responses;
  std::vector<std::string> missing;
  static const ClusterSet kEmpty{};
  for (const Document& d : key.documents) {
    auto it = by_id.find(d.doc_id);
    if (it == by_id.end()) {
      missing.push_back(d.doc_id);
      continue;
    }
    key_docs.push_back(&d);
    responses.push_back(it->second->gold_clusters ? &*it->second->gold_clusters : &kEmpty);
    by_id.erase(it);
  }
  if (!missing.empty() || !by_id.empty()) {
    std::string msg = "doc_id mismatch between key and response;";
    if (!missing.empty()) {
      msg += " missing from response:";
      for (const auto& id : missing) msg += " " + id;
    }
    if (!by_id.empty()) {
      msg += " extra in response:";
      for (const auto& [id, _] : by_id) msg += " " + id;
    }
    throw Error(msg);
  }
  return evaluate_corpus(key_docs, responses, exclude_non_referring, aggregate, threads);
}

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%6.2f", 100.0 * v);
  return buf;
}

nlohmann::json prf_json(const Prf& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1},
          {"degenerate", p.degenerate}};
}

}  // namespace

std::string render_report_table(const EvalReport& r) {
  std::ostringstream out;
  out << "metric          P       R      F1\n";
  auto row = [&](const char* name, const Prf& p) {
    out << name << pct(p.precision) << "  " << pct(p.recall) << "  " << pct(p.f1)
        << (p.degenerate ? "  (degenerate)" : "") << "\n";
  };
  row("MUC        ", r.muc);
  row("B3         ", r.b_cubed);
  row("CEAF_phi4  ", r.ceaf_phi4);
  out << "Avg F1     " << pct(r.avg_f1) << "\n";
  row("mentions   ", r.mentions);
  row("singletons ", r.singletons);
  return out.str();
}

std::string report_to_json(const EvalReport& r) {
  nlohmann::json j;
  j["muc"] = prf_json(r.muc);
  j["b_cubed"] = prf_json(r.b_cubed);
  j["ceaf_phi4"] = prf_json(r.ceaf_phi4);
  j["avg_f1"] = r.avg_f1;
  j["mentions"] = prf_json(r.mentions);
  j["singletons"] = prf_json(r.singletons);
  return j.dump(2) + "\n";
}

}  // namespace coref
