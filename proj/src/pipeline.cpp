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

#include "coref/pipeline.hpp"

#include <cstdio>

#include <json.hpp>

#include "coref/decoder.hpp"

namespace coref {

using json = nlohmann::json;

std::string pipeline_config_to_json(const PipelineConfig& cfg) {
  json j;
  j["uad_train"] = cfg.uad_train;
  j["od_train"] = cfg.od_train;
  j["dev"] = cfg.dev;
  j["transfer_mode"] = cfg.transfer_mode;
  j["speaker_augment"] = cfg.speaker_augment;
  j["singleton_decoding"] = cfg.singleton_decoding;
  j["include_dev_in_train"] = cfg.include_dev_in_train;
  j["epochs"] = cfg.epochs;
  j["max_segment_tokens"] = cfg.max_segment_tokens;
  j["max_segments"] = cfg.max_segments;
  j["threads"] = cfg.threads;
  j["serial"] = cfg.serial;
  j["lr_task"] = cfg.train.lr_task;
  j["lr_encoder"] = cfg.train.lr_encoder;
  j["weight_decay"] = cfg.train.weight_decay;
  j["clip_norm"] = cfg.train.clip_norm;
  j["model"] = json::parse(model_config_to_json(cfg.model));
  return j.dump(2);
}

PipelineConfig pipeline_config_from_json(const std::string& text) {
  json j = json::parse(text);
  PipelineConfig cfg;
  cfg.uad_train = j.value("uad_train", std::vector<std::string>{});
  cfg.od_train = j.value("od_train", std::vector<std::string>{});
  cfg.dev = j.value("dev", std::vector<std::string>{});
  cfg.transfer_mode = j.value("transfer_mode", "uad");
  cfg.speaker_augment = j.value("speaker_augment", true);
  cfg.singleton_decoding = j.value("singleton_decoding", true);
  cfg.include_dev_in_train = j.value("include_dev_in_train", false);
  cfg.epochs = j.value("epochs", 20);
  cfg.max_segment_tokens = j.value("max_segment_tokens", 512);
  cfg.max_segments = j.value("max_segments", 3);
  cfg.threads = j.value("threads", 0);
  cfg.serial = j.value("serial", false);
  cfg.train.lr_task = j.value("lr_task", 3e-4);
  cfg.train.lr_encoder = j.value("lr_encoder", 1e-5);
  cfg.train.weight_decay = j.value("weight_decay", 1e-2);
  cfg.train.clip_norm = j.value("clip_norm", 1.0);
  if (j.contains("model")) cfg.model = model_config_from_json(j["model"].dump());
  return cfg;
}

std::vector<Document> prepare_training_docs(const std::vector<Document>& docs,
                                            const PipelineConfig& cfg, int* dropped_links) {
  std::vector<Document> out;
  int dropped = 0;
  for (const Document& raw : docs) {
    Document doc = strip_non_referring(raw);
    if (cfg.speaker_augment && doc.is_dialogue) doc = augment_speakers(doc).doc;
    SplitResult split = split_document(doc, cfg.max_segment_tokens, cfg.max_segments);
    dropped += split.split_clusters;
    for (Document& child : split.children) out.push_back(std::move(child));
  }
  if (dropped_links) *dropped_links = dropped;
  return out;
}

TrainedModel train_pipeline(const std::vector<Corpus>& uad, const std::vector<Corpus>& od,
                            PipelineConfig cfg, const CheckpointSink& sink) {
  // Preprocess corpora, then hand flattened documents to the schedule.
  auto prep = [&](const std::vector<Corpus>& sets) {
    std::vector<Corpus> out;
    for (const Corpus& c : sets) {
      Corpus p = c;
      int dropped = 0;
      p.documents = prepare_training_docs(c.documents, cfg, &dropped);
      if (dropped > 0)
        std::fprintf(stderr, "note: %s: %d gold cluster(s) lost cross-segment links\n",
                     c.name.c_str(), dropped);
      out.push_back(std::move(p));
    }
    return out;
  };
  TrainingSchedule schedule = build_schedule(
      prep(uad), prep(od), transfer_mode_from_string(cfg.transfer_mode), cfg.epochs);

  TrainOptions opts = cfg.train;
  opts.exec = cfg.exec();
  FitResult fit_res = fit(schedule, cfg.model, opts, sink);

  TrainedModel model;
  model.params = std::move(fit_res.params);
  model.config = std::move(cfg);
  model.log = std::move(fit_res.log);
  model.diverged = fit_res.diverged;
  model.divergence_info = std::move(fit_res.divergence_info);
  return model;
}

namespace {

void warn_unknown_speaker_tokens(const Parameters& params, const AugmentResult& aug) {
  if (params.cfg.provider != "learned") return;
  static bool warned = false;
  if (warned) return;
  LearnedEmbedding emb(params);
  for (const auto& [label, tok] : aug.vocab.items) {
    if (emb.learned_row(tok) < 0) {
      std::fprintf(stderr,
                   "warning: speaker token %s not in model vocabulary; "
                   "falling back to frozen vectors\n",
                   tok.c_str());
      warned = true;
      return;
    }
  }
}

}  // namespace

ClusterSet predict_document(const Parameters& params, const Document& doc,
                            const PipelineConfig& cfg) {
  Document input = doc;
  input.gold_clusters.reset();
  input.non_referring.clear();
  std::vector<int> inserted;
  if (cfg.speaker_augment && input.is_dialogue) {
    AugmentResult aug = augment_speakers(input);
    warn_unknown_speaker_tokens(params, aug);
    inserted = std::move(aug.inserted_positions);
    input = std::move(aug.doc);
  }
  DocForward fwd = run_forward(params, input, cfg.exec());
  ClusterSet predicted = decode(to_score_table(fwd), cfg.singleton_decoding);
  if (inserted.empty()) return predicted;
  ClusterSet out;
  for (const Cluster& c : predicted.clusters) {
    std::vector<Span> spans = unshift_spans(c, inserted);
    out.clusters.emplace_back(spans.begin(), spans.end());
  }
  out.normalize();
  return out;
}

Corpus predict_corpus(const Parameters& params, const Corpus& input, const PipelineConfig& cfg) {
  Corpus out = input;
  for (Document& doc : out.documents) {
    doc.gold_clusters = predict_document(params, doc, cfg);
    doc.non_referring.clear();
  }
  return out;
}

std::vector<std::pair<std::string, ScoreTable>> export_score_tables(const Parameters& params,
                                                                    const Corpus& input,
                                                                    const PipelineConfig& cfg) {
  std::vector<std::pair<std::string, ScoreTable>> out;
  for (const Document& raw : input.documents) {
    Document doc = raw;
    doc.gold_clusters.reset();
    doc.non_referring.clear();
    std::vector<int> inserted;
    if (cfg.speaker_augment && doc.is_dialogue) {
      AugmentResult aug = augment_speakers(doc);
      inserted = std::move(aug.inserted_positions);
      doc = std::move(aug.doc);
    }
    DocForward fwd = run_forward(params, doc, cfg.exec());
    ScoreTable table = to_score_table(fwd);
    if (!inserted.empty()) {
      std::vector<Span> unshifted = unshift_spans(table.candidates, inserted);
      table.candidates.assign(unshifted.begin(), unshifted.end());
    }
    out.emplace_back(raw.doc_id, std::move(table));
  }
  return out;
}

void save_trained_model(const std::string& path, const TrainedModel& model) {
  json meta;
  meta["pipeline"] = json::parse(pipeline_config_to_json(model.config));
  json log = json::array();
  for (const EpochLog& e : model.log)
    log.push_back({{"phase", e.phase},
                   {"epoch", e.epoch},
                   {"mean_total", e.mean_total},
                   {"mean_coref", e.mean_coref},
                   {"mean_mention", e.mean_mention}});
  meta["log"] = std::move(log);
  meta["diverged"] = model.diverged;
  save_checkpoint(path, model.params, meta.dump());
}

TrainedModel load_trained_model(const std::string& path) {
  auto [params, meta_text] = load_checkpoint(path);
  TrainedModel model;
  model.params = std::move(params);
  json meta = json::parse(meta_text);
  if (meta.contains("pipeline"))
    model.config = pipeline_config_from_json(meta["pipeline"].dump());
  model.config.model = model.params.cfg;
  if (meta.contains("log"))
    for (const json& e : meta["log"])
      model.log.push_back({e.value("phase", ""), e.value("epoch", 0), e.value("mean_total", 0.0),
                           e.value("mean_coref", 0.0), e.value("mean_mention", 0.0)});
  model.diverged = meta.value("diverged", false);
  return model;
}

}  // namespace coref
