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

#ifndef UACOREF_PIPELINE_HPP_
#define UACOREF_PIPELINE_HPP_

#include <string>
#include <vector>

#include "coref/model.hpp"
#include "coref/preprocess.hpp"
#include "coref/train.hpp"

namespace coref {

// Everything one experiment needs; serialized next to every checkpoint and
// report so results are reproducible from the snapshot alone.
struct PipelineConfig {
  std::vector<std::string> uad_train;
  std::vector<std::string> od_train;
  std::vector<std::string> dev;
  std::string transfer_mode = "uad";  // uad | mix | pretrain
  bool speaker_augment = true;        // SE family when true, SR otherwise
  bool singleton_decoding = true;     // false = plain mention ranking
  bool include_dev_in_train = false;
  int epochs = 20;
  int max_segment_tokens = 512;
  int max_segments = 3;
  int threads = 0;
  bool serial = false;  // serial reference kernels
  TrainOptions train;
  ModelConfig model;

  Exec exec() const { return Exec{!serial, threads}; }
};

std::string pipeline_config_to_json(const PipelineConfig& cfg);
PipelineConfig pipeline_config_from_json(const std::string& text);

// Training-time document preparation: strip the non-referring layer,
// optionally inject speaker tokens, split long documents.
std::vector<Document> prepare_training_docs(const std::vector<Document>& docs,
                                            const PipelineConfig& cfg, int* dropped_links = nullptr);

struct TrainedModel {
  Parameters params;
  PipelineConfig config;
  std::vector<EpochLog> log;
  bool diverged = false;
  std::string divergence_info;
};

TrainedModel train_pipeline(const std::vector<Corpus>& uad, const std::vector<Corpus>& od,
                            PipelineConfig cfg, const CheckpointSink& sink = nullptr);

// Prediction on one raw document (gold ignored); clusters come back in the
// document's own token space.
ClusterSet predict_document(const Parameters& params, const Document& doc,
                            const PipelineConfig& cfg);

// Response corpus for a whole input corpus.
Corpus predict_corpus(const Parameters& params, const Corpus& input, const PipelineConfig& cfg);

// Score table per document, spans mapped back to the raw token space.
std::vector<std::pair<std::string, ScoreTable>> export_score_tables(const Parameters& params,
                                                                    const Corpus& input,
                                                                    const PipelineConfig& cfg);

void save_trained_model(const std::string& path, const TrainedModel& model);
TrainedModel load_trained_model(const std::string& path);

}  // namespace coref

#endif  // UACOREF_PIPELINE_HPP_
