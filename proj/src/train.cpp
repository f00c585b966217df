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

#include "coref/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "coref/rng.hpp"

namespace coref {

double clip_global_norm(Parameters& grads, double max_norm) {
  double sq = 0.0;
  for (const TensorRef& t : grads.tensors())
    for (double g : *t.data) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (const TensorRef& t : grads.tensors())
      for (double& g : *t.data) g *= scale;
  }
  return norm;
}

AdamW::AdamW(const Parameters& params, const TrainOptions& opts)
    : opts_(opts), m_(Parameters::zeros_like(params)), v_(Parameters::zeros_like(params)) {}

void AdamW::reset() {
  m_ = Parameters::zeros_like(m_);
  v_ = Parameters::zeros_like(v_);
  step_count_ = 0;
}

void AdamW::step(Parameters& params, Parameters& grads) {
  clip_global_norm(grads, opts_.clip_norm);
  ++step_count_;
  const double bc1 = 1.0 - std::pow(opts_.adam_beta1, step_count_);
  const double bc2 = 1.0 - std::pow(opts_.adam_beta2, step_count_);

  auto pt = params.tensors();
  auto gt = grads.tensors();
  auto mt = m_.tensors();
  auto vt = v_.tensors();
  for (size_t i = 0; i < pt.size(); ++i) {
    const double lr = pt[i].group == ParamGroup::encoder ? opts_.lr_encoder : opts_.lr_task;
    Vec& p = *pt[i].data;
    Vec& g = *gt[i].data;
    Vec& m = *mt[i].data;
    Vec& v = *vt[i].data;
    for (size_t k = 0; k < p.size(); ++k) {
      m[k] = opts_.adam_beta1 * m[k] + (1.0 - opts_.adam_beta1) * g[k];
      v[k] = opts_.adam_beta2 * v[k] + (1.0 - opts_.adam_beta2) * g[k] * g[k];
      const double mh = m[k] / bc1;
      const double vh = v[k] / bc2;
      p[k] -= lr * (mh / (std::sqrt(vh) + opts_.adam_eps) + opts_.weight_decay * p[k]);
    }
  }
}

std::vector<std::string> collect_vocabulary(const TrainingSchedule& schedule) {
  std::vector<std::string> vocab;
  std::unordered_set<std::string> seen;
  for (const auto& phase : schedule.phases)
    for (const Document& doc : phase.documents)
      for (const Token& tok : doc.tokens)
        if (seen.insert(tok.text).second) vocab.push_back(tok.text);
  return vocab;
}

FitResult fit(const TrainingSchedule& schedule, const ModelConfig& cfg, const TrainOptions& opts,
              const CheckpointSink& sink) {
  if (schedule.phases.empty()) throw Error("fit: empty schedule");

  FitResult res;
  res.params = Parameters::init(cfg, cfg.provider == "learned" ? collect_vocabulary(schedule)
                                                               : std::vector<std::string>{});
  AdamW optimizer(res.params, opts);
  Parameters last_good = res.params;

  for (size_t phase_idx = 0; phase_idx < schedule.phases.size(); ++phase_idx) {
    const auto& phase = schedule.phases[phase_idx];
    optimizer.reset();
    std::vector<int> order(phase.documents.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= phase.epochs; ++epoch) {
      std::mt19937_64 rng =
          make_rng(cfg.seed, "epoch-shuffle", (phase_idx << 32) | static_cast<uint64_t>(epoch));
      std::shuffle(order.begin(), order.end(), rng);

      double sum_total = 0, sum_coref = 0, sum_mention = 0;
      int steps = 0;
      for (size_t pos = 0; pos < order.size(); ++pos) {
        const Document& doc = phase.documents[order[pos]];
        if (doc.num_tokens() == 0) continue;
        const uint64_t sample_seed =
            derive_seed(cfg.seed, "step", (phase_idx << 48) |
                                              (static_cast<uint64_t>(epoch) << 32) | pos);
        try {
          DocForward fwd = run_forward(res.params, doc, opts.exec);
          Parameters grads = Parameters::zeros_like(res.params);
          LossBreakdown loss = doc_loss(res.params, doc, fwd, sample_seed, &grads, opts.exec);
          if (!std::isfinite(loss.total)) throw Error("non-finite loss");
          optimizer.step(res.params, grads);
          sum_total += loss.total;
          sum_coref += loss.coref;
          sum_mention += loss.mention;
          ++steps;
        } catch (const Error& e) {
          res.params = last_good;
          res.diverged = true;
          res.divergence_info = "phase " + phase.name + " epoch " + std::to_string(epoch) +
                                " doc " + doc.doc_id + ": " + e.what();
          return res;
        }
      }
      EpochLog log{phase.name, epoch, steps ? sum_total / steps : 0.0,
                   steps ? sum_coref / steps : 0.0, steps ? sum_mention / steps : 0.0};
      res.log.push_back(log);
      if (opts.verbose)
        std::fprintf(stderr, "[%s] epoch %d/%d  loss %.4f (coref %.4f, mention %.4f)\n",
                     phase.name.c_str(), epoch, phase.epochs, log.mean_total, log.mean_coref,
                     log.mean_mention);
      last_good = res.params;
      if (sink) sink(phase.name, epoch, res.params);
    }
  }
  return res;
}

// ---- checkpoints ----

namespace {

constexpr char kMagic[8] = {'U', 'A', 'C', 'K', 'P', 'T', '1', '\n'};

void write_u64(std::ostream& out, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_string(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
  const uint64_t n = read_u64(in);
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  return s;
}

}  // namespace

std::string model_config_to_json(const ModelConfig& cfg) {
  nlohmann::json j;
  j["embed_dim"] = cfg.embed_dim;
  j["ffnn_hidden"] = cfg.ffnn_hidden;
  j["width_emb_dim"] = cfg.width_emb_dim;
  j["feature_emb_dim"] = cfg.feature_emb_dim;
  j["max_span_width"] = cfg.max_span_width;
  j["lambda_keep"] = cfg.lambda_keep;
  j["max_antecedents"] = cfg.max_antecedents;
  j["alpha_mention"] = cfg.alpha_mention;
  j["context_current"] = cfg.context_current;
  j["context_previous"] = cfg.context_previous;
  j["provider"] = cfg.provider;
  j["seed"] = cfg.seed;
  return j.dump();
}

ModelConfig model_config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ModelConfig cfg;
  cfg.embed_dim = j.at("embed_dim").get<int>();
  cfg.ffnn_hidden = j.at("ffnn_hidden").get<int>();
  cfg.width_emb_dim = j.at("width_emb_dim").get<int>();
  cfg.feature_emb_dim = j.at("feature_emb_dim").get<int>();
  cfg.max_span_width = j.at("max_span_width").get<int>();
  cfg.lambda_keep = j.at("lambda_keep").get<double>();
  cfg.max_antecedents = j.at("max_antecedents").get<int>();
  cfg.alpha_mention = j.at("alpha_mention").get<double>();
  cfg.context_current = j.at("context_current").get<double>();
  cfg.context_previous = j.at("context_previous").get<double>();
  cfg.provider = j.at("provider").get<std::string>();
  cfg.seed = j.at("seed").get<uint64_t>();
  return cfg;
}

void save_checkpoint(const std::string& path, const Parameters& params,
                     const std::string& meta_json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path);
  out.write(kMagic, sizeof(kMagic));
  write_string(out, model_config_to_json(params.cfg));
  write_string(out, meta_json);
  write_u64(out, params.vocab.size());
  for (const std::string& tok : params.vocab) write_string(out, tok);

  const auto tensors = params.tensors();
  write_u64(out, tensors.size());
  for (const TensorRef& t : tensors) {
    write_string(out, t.name);
    write_u64(out, t.data->size());
    out.write(reinterpret_cast<const char*>(t.data->data()),
              static_cast<std::streamsize>(t.data->size() * sizeof(double)));
  }
  if (!out) throw Error("checkpoint write failure: " + path);
}

std::pair<Parameters, std::string> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path);
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error("not a uacoref checkpoint (bad magic): " + path);

  const ModelConfig cfg = model_config_from_json(read_string(in));
  std::string meta = read_string(in);
  const uint64_t vocab_size = read_u64(in);
  std::vector<std::string> vocab(vocab_size);
  for (auto& tok : vocab) tok = read_string(in);

  Parameters params = Parameters::init(cfg, vocab);
  auto tensors = params.tensors();
  const uint64_t count = read_u64(in);
  if (count != tensors.size()) throw Error("checkpoint tensor count mismatch: " + path);
  for (TensorRef& t : tensors) {
    const std::string name = read_string(in);
    if (name != t.name) throw Error("checkpoint tensor order mismatch at " + name);
    const uint64_t n = read_u64(in);
    if (n != t.data->size()) throw Error("checkpoint tensor size mismatch at " + name);
    in.read(reinterpret_cast<char*>(t.data->data()),
            static_cast<std::streamsize>(n * sizeof(double)));
  }
  if (!in) throw Error("checkpoint truncated: " + path);
  return {std::move(params), std::move(meta)};
}

}  // namespace coref
