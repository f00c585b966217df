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

#ifndef UACOREF_TRAIN_HPP_
#define UACOREF_TRAIN_HPP_

#include <functional>
#include <string>

#include "coref/model.hpp"
#include "coref/preprocess.hpp"

namespace coref {

struct TrainOptions {
  double lr_task = 3e-4;
  double lr_encoder = 1e-5;  // learned token table (encoder stand-in)
  double weight_decay = 1e-2;
  double clip_norm = 1.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  Exec exec;
  bool verbose = false;
};

// Decoupled-weight-decay Adam over the parameter tensors, with global
// gradient-norm clipping. Learning rate per group.
class AdamW {
 public:
  AdamW(const Parameters& params, const TrainOptions& opts);
  void step(Parameters& params, Parameters& grads);
  void reset();

 private:
  TrainOptions opts_;
  Parameters m_, v_;
  long step_count_ = 0;
};

// Scales all gradients so their global L2 norm is at most `max_norm`;
// returns the pre-clip norm.
double clip_global_norm(Parameters& grads, double max_norm);

struct EpochLog {
  std::string phase;
  int epoch = 0;  // 1-based within phase
  double mean_total = 0.0;
  double mean_coref = 0.0;
  double mean_mention = 0.0;
};

struct FitResult {
  Parameters params;
  std::vector<EpochLog> log;
  bool diverged = false;
  std::string divergence_info;
};

using CheckpointSink =
    std::function<void(const std::string& phase, int epoch, const Parameters&)>;

// Runs the schedule phases in order with per-document updates. Optimizer
// state restarts at each phase boundary; parameters carry over. On a
// non-finite loss the last epoch-end parameters are returned with
// `diverged` set.
FitResult fit(const TrainingSchedule& schedule, const ModelConfig& cfg,
              const TrainOptions& opts, const CheckpointSink& sink = nullptr);

// Vocabulary for the learned provider: tokens of every document in the
// schedule, in first-seen order.
std::vector<std::string> collect_vocabulary(const TrainingSchedule& schedule);

// ---- checkpoint files (versioned binary, exact round-trip) ----

void save_checkpoint(const std::string& path, const Parameters& params,
                     const std::string& meta_json = "{}");
std::pair<Parameters, std::string> load_checkpoint(const std::string& path);

std::string model_config_to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const std::string& text);

}  // namespace coref

#endif  // UACOREF_TRAIN_HPP_
