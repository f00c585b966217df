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

// Times the forward and backward passes on synthetic dialogues, serial
// reference vs OpenMP kernels.

#include <chrono>
#include <cstdio>

#include "coref/kernels.hpp"
#include "coref/model.hpp"
#include "coref/preprocess.hpp"
#include "coref/synthetic.hpp"

using namespace coref;

namespace {

double time_pass(const Parameters& params, const std::vector<Document>& docs, const Exec& exec,
                 bool backward, int repeats) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  for (int r = 0; r < repeats; ++r) {
    for (const Document& doc : docs) {
      DocForward fwd = run_forward(params, doc, exec);
      if (backward) {
        Parameters grads = Parameters::zeros_like(params);
        doc_loss(params, doc, fwd, 17, &grads, exec);
      }
    }
  }
  return std::chrono::duration<double>(clock::now() - t0).count() / repeats;
}

}  // namespace

int main(int argc, char** argv) {
  int docs = argc > 1 ? std::atoi(argv[1]) : 8;
  int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

  SyntheticConfig syn;
  syn.num_docs = docs;
  syn.min_sentences = 16;
  syn.max_sentences = 24;
  Corpus corpus = make_synthetic_dialogues(syn);
  std::vector<Document> prepared;
  for (const Document& d : corpus.documents) prepared.push_back(augment_speakers(d).doc);

  ModelConfig cfg;
  cfg.ffnn_hidden = 150;
  Parameters params = Parameters::init(cfg);

  std::printf("uacoref kernel benchmark: %d docs, %d repeat(s), %d thread(s) available\n", docs,
              repeats, kernels::max_threads());
  std::printf("%-22s %12s %12s %9s\n", "pass", "serial (s)", "openmp (s)", "speedup");
  for (bool backward : {false, true}) {
    const double serial = time_pass(params, prepared, Exec::serial(), backward, repeats);
    const double parallel = time_pass(params, prepared, Exec{true, 0}, backward, repeats);
    std::printf("%-22s %12.4f %12.4f %8.2fx\n", backward ? "forward+backward" : "forward", serial,
                parallel, serial / parallel);
  }
  return 0;
}
