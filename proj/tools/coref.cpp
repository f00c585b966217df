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

// Command-line pipeline: convert, stats, train, predict, score,
// export-scores. Relative corpus paths are resolved against $UACOREF_DATA
// when it is set; flags can also be loaded from a key=value config file via
// --config.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coref/decoder.hpp"
#include "coref/eval.hpp"
#include "coref/format.hpp"
#include "coref/pipeline.hpp"
#include "coref/synthetic.hpp"

namespace {

using namespace coref;

std::string resolve_path(const std::string& path) {
  if (path.empty() || path[0] == '/' || path[0] == '.') return path;
  const char* root = std::getenv("UACOREF_DATA");
  if (!root || !*root) return path;
  return std::string(root) + "/" + path;
}

std::vector<Corpus> load_corpora(const std::vector<std::string>& paths,
                                 const std::string& format) {
  std::vector<Corpus> out;
  for (const std::string& p : paths) out.push_back(load_corpus(resolve_path(p), format));
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

void add_config_flags(CLI::App* cmd, PipelineConfig& cfg) {
  cmd->add_option("--transfer-mode", cfg.transfer_mode, "uad|mix|pretrain");
  cmd->add_flag("--speaker-augment,!--no-speaker-augment", cfg.speaker_augment,
                "prepend speaker tokens (SE family)");
  cmd->add_flag("--singletons,!--no-singletons", cfg.singleton_decoding,
                "singleton-aware decoding");
  cmd->add_flag("--include-dev", cfg.include_dev_in_train, "add dev sets to the training data");
  cmd->add_option("--epochs", cfg.epochs);
  cmd->add_option("--max-segment-tokens", cfg.max_segment_tokens);
  cmd->add_option("--max-segments", cfg.max_segments);
  cmd->add_option("--threads", cfg.threads, "0 = all cores");
  cmd->add_flag("--serial", cfg.serial, "use the serial reference kernels");
  cmd->add_option("--lr-task", cfg.train.lr_task);
  cmd->add_option("--lr-encoder", cfg.train.lr_encoder);
  cmd->add_option("--weight-decay", cfg.train.weight_decay);
  cmd->add_option("--clip-norm", cfg.train.clip_norm);
  cmd->add_option("--seed", cfg.model.seed);
  cmd->add_option("--embed-dim", cfg.model.embed_dim);
  cmd->add_option("--ffnn-hidden", cfg.model.ffnn_hidden);
  cmd->add_option("--max-span-width", cfg.model.max_span_width);
  cmd->add_option("--lambda", cfg.model.lambda_keep);
  cmd->add_option("--max-antecedents", cfg.model.max_antecedents);
  cmd->add_option("--alpha-mention", cfg.model.alpha_mention);
  cmd->add_option("--provider", cfg.model.provider, "hashed|learned");
}

int run(int argc, char** argv) {
  CLI::App app{"uacoref: singleton-aware coreference pipeline for dialogue corpora"};
  app.require_subcommand(1);
  // key=value config file; subcommand settings live under a [train] etc.
  // section; command-line flags override file values
  app.set_config("--config");
  app.fallthrough();

  PipelineConfig cfg;

  // convert
  auto* convert = app.add_subcommand("convert", "convert between corpus formats");
  std::string in_path, out_path, in_format = "auto", out_format = "auto";
  convert->add_option("input", in_path)->required();
  convert->add_option("output", out_path)->required();
  convert->add_option("--from", in_format, "ua|conll|interchange|auto");
  convert->add_option("--to", out_format, "ua|conll|interchange|auto");

  // stats
  auto* stats = app.add_subcommand("stats", "gold-annotation statistics per corpus");
  std::vector<std::string> stats_paths;
  std::string stats_format = "auto";
  stats->add_option("corpora", stats_paths)->required();
  stats->add_option("--format", stats_format);

  // train
  auto* train = app.add_subcommand("train", "train a model");
  std::string checkpoint_out = "model.ckpt", corpus_format = "auto";
  train->add_option("--uad", cfg.uad_train, "UA-format training corpora")->required();
  train->add_option("--od", cfg.od_train, "other-domain corpora for transfer");
  train->add_option("--dev-corpora", cfg.dev, "dev corpora (trained on with --include-dev)");
  train->add_option("--format", corpus_format);
  train->add_option("-o,--out", checkpoint_out, "checkpoint path");
  bool verbose = false, epoch_checkpoints = false;
  train->add_flag("-v,--verbose", verbose);
  train->add_flag("--epoch-checkpoints", epoch_checkpoints,
                  "also write <out>.<phase>.<epoch> after every epoch");
  add_config_flags(train, cfg);

  // predict
  auto* predict = app.add_subcommand("predict", "predict clusters for a corpus");
  std::string ckpt_path, predict_in, predict_out, predict_format = "auto";
  std::string tables_out;
  predict->add_option("checkpoint", ckpt_path)->required();
  predict->add_option("input", predict_in)->required();
  predict->add_option("output", predict_out)->required();
  predict->add_option("--format", predict_format, "input format");
  predict->add_option("--export-tables", tables_out, "also write score tables (JSON lines)");
  predict->add_option("--threads", cfg.threads);
  predict->add_flag("--serial", cfg.serial);

  // score
  auto* score = app.add_subcommand("score", "evaluate a response against a key");
  std::string key_path, response_path, report_path, score_format = "auto";
  bool exclude_nonref = true;
  std::string aggregate = "micro";
  score->add_option("key", key_path)->required();
  score->add_option("response", response_path)->required();
  score->add_option("--format", score_format);
  score->add_flag("--exclude-non-referring,!--include-non-referring", exclude_nonref,
                  "drop key non-referring spans from both sides (default on)");
  score->add_option("--aggregate", aggregate, "micro|macro");
  score->add_option("--report", report_path, "write the JSON report here");
  score->add_option("--threads", cfg.threads);

  // export-scores
  auto* export_scores = app.add_subcommand("export-scores", "write score tables for a corpus");
  std::string exp_ckpt, exp_in, exp_out, exp_format = "auto";
  export_scores->add_option("checkpoint", exp_ckpt)->required();
  export_scores->add_option("input", exp_in)->required();
  export_scores->add_option("output", exp_out)->required();
  export_scores->add_option("--format", exp_format);
  export_scores->add_option("--threads", cfg.threads);
  export_scores->add_flag("--serial", cfg.serial);

  // gen-synthetic (test fixture helper)
  auto* gen = app.add_subcommand("gen-synthetic", "generate a synthetic dialogue corpus");
  SyntheticConfig syn;
  std::string gen_out;
  gen->add_option("output", gen_out)->required();
  gen->add_option("--docs", syn.num_docs);
  gen->add_option("--seed", syn.seed);
  gen->add_option("--prefix", syn.doc_prefix);

  CLI11_PARSE(app, argc, argv);

  if (convert->parsed()) {
    Corpus corpus = load_corpus(resolve_path(in_path), in_format);
    SerializeStats st = save_corpus(corpus, resolve_path(out_path), out_format);
    if (st.dropped_non_referring > 0)
      std::fprintf(stderr, "warning: target format dropped %d non-referring span(s)\n",
                   st.dropped_non_referring);
    return 0;
  }

  if (stats->parsed()) {
    std::printf("%-16s %6s %8s %8s %8s %9s %8s %6s\n", "corpus", "docs", "mentions", "clusters",
                "single", "single%", "pronoun", "spk");
    for (const std::string& p : stats_paths) {
      Corpus corpus = load_corpus(resolve_path(p), stats_format);
      CorpusStats st = corpus_stats(corpus);
      std::printf("%-16s %6d %8d %8d %8d %8.1f%% %8d %6.1f\n", corpus.name.c_str(), st.documents,
                  st.mentions, st.clusters, st.singletons, st.singleton_pct, st.pronoun_mentions,
                  st.avg_speakers);
    }
    return 0;
  }

  if (train->parsed()) {
    cfg.train.verbose = verbose;
    std::vector<Corpus> uad = load_corpora(cfg.uad_train, corpus_format);
    std::vector<Corpus> od = load_corpora(cfg.od_train, corpus_format);
    if (cfg.include_dev_in_train)
      for (Corpus& c : load_corpora(cfg.dev, corpus_format)) uad.push_back(std::move(c));
    CheckpointSink sink;
    if (epoch_checkpoints)
      sink = [&](const std::string& phase, int epoch, const Parameters& params) {
        save_checkpoint(checkpoint_out + "." + phase + "." + std::to_string(epoch), params,
                        "{}");
      };
    TrainedModel model = train_pipeline(uad, od, cfg, sink);
    save_trained_model(checkpoint_out, model);
    write_file(checkpoint_out + ".config.json", pipeline_config_to_json(model.config));
    for (const EpochLog& e : model.log)
      std::printf("[%s] epoch %d loss %.6f (coref %.6f mention %.6f)\n", e.phase.c_str(), e.epoch,
                  e.mean_total, e.mean_coref, e.mean_mention);
    if (model.diverged) {
      std::fprintf(stderr, "error: training diverged (%s); last good checkpoint written to %s\n",
                   model.divergence_info.c_str(), checkpoint_out.c_str());
      return 3;
    }
    std::printf("checkpoint: %s\n", checkpoint_out.c_str());
    return 0;
  }

  if (predict->parsed()) {
    TrainedModel model = load_trained_model(resolve_path(ckpt_path));
    model.config.threads = cfg.threads;
    model.config.serial = cfg.serial;
    Corpus input = load_corpus(resolve_path(predict_in), predict_format);
    Corpus response = predict_corpus(model.params, input, model.config);
    save_corpus(response, resolve_path(predict_out));
    if (!tables_out.empty()) {
      std::ostringstream lines;
      for (const auto& [doc_id, table] : export_score_tables(model.params, input, model.config))
        lines << score_table_to_json(table, doc_id) << "\n";
      write_file(resolve_path(tables_out), lines.str());
    }
    return 0;
  }

  if (score->parsed()) {
    Corpus key = load_corpus(resolve_path(key_path), score_format);
    Corpus response = load_corpus(resolve_path(response_path), score_format);
    EvalReport report =
        evaluate(key, response, exclude_nonref,
                 aggregate == "macro" ? Aggregate::macro : Aggregate::micro, cfg.threads);
    std::printf("%s", render_report_table(report).c_str());
    if (!report_path.empty()) {
      // the report carries its own scoring settings for reproducibility
      nlohmann::json j = nlohmann::json::parse(report_to_json(report));
      j["settings"] = {{"exclude_non_referring", exclude_nonref}, {"aggregate", aggregate}};
      write_file(resolve_path(report_path), j.dump(2) + "\n");
    }
    return 0;
  }

  if (export_scores->parsed()) {
    TrainedModel model = load_trained_model(resolve_path(exp_ckpt));
    model.config.threads = cfg.threads;
    model.config.serial = cfg.serial;
    Corpus input = load_corpus(resolve_path(exp_in), exp_format);
    std::ostringstream lines;
    for (const auto& [doc_id, table] : export_score_tables(model.params, input, model.config))
      lines << score_table_to_json(table, doc_id) << "\n";
    write_file(resolve_path(exp_out), lines.str());
    return 0;
  }

  if (gen->parsed()) {
    save_corpus(make_synthetic_dialogues(syn), resolve_path(gen_out));
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const coref::Error& e) {
    nlohmann::json err{{"error", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  }
}
