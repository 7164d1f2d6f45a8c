// Copyright 2026 The Authors.
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

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "subfair/checkpoint.h"
#include "subfair/error.h"
#include "subfair/fairness.h"
#include "subfair/kernel.h"
#include "subfair/mine.h"
#include "subfair/pool.h"
#include "subfair/synth.h"
#include "subfair/train.h"
#include "subfair/verify.h"

namespace subfair::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string Hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

uint64_t FreshSeed() {
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

// Output directory plus the manifest that describes one run.
class Run {
 public:
  Run(std::string command, const std::string& out_dir, bool force)
      : command_(std::move(command)), dir_(out_dir), start_(Clock::now()) {
    if (fs::exists(dir_)) {
      if (!fs::is_directory(dir_)) {
        throw Error(ErrorCode::kIo, dir_.string() + " is not a directory");
      }
      if (!fs::is_empty(dir_) && !force) {
        throw Error(ErrorCode::kIo, "output directory " + dir_.string() +
                                        " is not empty (use --force)");
      }
    }
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
      throw Error(ErrorCode::kIo,
                  "cannot create " + dir_.string() + ": " + ec.message());
    }
  }

  std::string Input(const std::string& path) {
    std::string text = ReadTextFile(path);
    inputs_.push_back({{"path", path}, {"fnv1a", Hex(Fnv1a(text))}});
    return text;
  }

  void Write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    WriteTextFile(p.string(), text);
    outputs_.push_back(p.string());
  }

  void Finish(const json& config, std::optional<uint64_t> seed) {
    const std::string config_text = config.dump();
    json m = {{"command", command_},
              {"config", config},
              {"config_hash", Hex(ConfigHash(config_text))},
              {"seed", seed ? json(*seed) : json(nullptr)},
              {"version", kVersion},
              {"inputs", inputs_},
              {"outputs", outputs_},
              {"wall_seconds",
               std::chrono::duration<double>(Clock::now() - start_).count()}};
    WriteTextFile((dir_ / "manifest.json").string(), m.dump(2) + "\n");
  }

 private:
  std::string command_;
  fs::path dir_;
  Clock::time_point start_;
  json inputs_ = json::array();
  json outputs_ = json::array();
};

uint64_t ResolveSeed(const std::optional<uint64_t>& flag, std::ostream& err) {
  if (flag) return *flag;
  const uint64_t seed = FreshSeed();
  err << "seed: " << seed << "\n";
  return seed;
}

LabeledPool PoolFromText(const std::string& text) {
  LabeledPool pool = ParsePoolCsv(text);
  pool.Validate();
  return pool;
}

json Summary(const std::vector<double>& v) {
  const double mean =
      std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  return {{"values", v},
          {"mean", mean},
          {"min", *std::min_element(v.begin(), v.end())},
          {"max", *std::max_element(v.begin(), v.end())}};
}

// ---- gen ----

struct GenArgs {
  std::string scenario;
  std::optional<uint64_t> seed;
  std::optional<int> alpha;
  std::optional<double> rho;
  std::optional<int> n;
  std::optional<int> test_per_cell;
  std::string out;
  bool force = false;
};

void CmdGen(const GenArgs& a, std::ostream& out, std::ostream& err) {
  SynthSpec spec = DefaultSpec(ParseScenario(a.scenario));
  if (a.alpha) spec.alpha = *a.alpha;
  if (a.rho) spec.rho = *a.rho;
  if (a.n) spec.n = *a.n;
  if (a.test_per_cell) spec.test_per_cell = *a.test_per_cell;
  spec.seed = ResolveSeed(a.seed, err);
  Run run("gen", a.out, a.force);
  const SynthData data = Generate(spec);
  run.Write("pool.csv", FormatPoolCsv(data.train));
  if (data.test) run.Write("test.csv", FormatPoolCsv(*data.test));
  const std::string sidecar = SynthSidecarJson(spec);
  run.Write("pool.json", sidecar);
  run.Finish(json::parse(sidecar), spec.seed);
  out << "wrote " << data.train.size() << " items to " << a.out << "\n";
}

// ---- mine-demo ----

struct MineArgs {
  std::string pool;
  int k = 10;
  std::string miner = "shasam";
  std::optional<uint64_t> seed;
  std::optional<int> target;
  std::optional<int> sensitive;
  double epsilon = kDefaultLogDetEpsilon;
  double bandwidth = 1.0;
  int draws = 20;
  std::string out;
  bool force = false;
};

void CmdMineDemo(const MineArgs& a, std::ostream& out, std::ostream& err) {
  if (a.target.has_value() != a.sensitive.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "--target and --sensitive go together");
  }
  if (a.draws < 1) {
    throw Error(ErrorCode::kInvalidArgument, "--draws must be at least 1");
  }
  if (a.bandwidth < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "--bandwidth must be >= 0");
  }
  const MinerKind miner = ParseMinerKind(a.miner);
  const uint64_t seed = ResolveSeed(a.seed, err);
  Run run("mine-demo", a.out, a.force);
  const LabeledPool pool = PoolFromText(run.Input(a.pool));
  Rng rng(seed);
  const EmbeddingMatrix embeddings =
      a.bandwidth > 0.0 ? GaussianKernelEmbedding(pool.features, a.bandwidth)
                        : EmbeddingMatrix(pool.features);
  const Cell pair = a.target ? Cell{*a.target, *a.sensitive}
                             : SamplePair(AttributeIndex(pool), rng);
  const MiningComparison c = CompareWithRandom(pool, embeddings, pair, a.k,
                                               a.epsilon, a.draws, rng, miner);
  run.Write("selection.csv", FormatMinedBatchCsv(c.batch, pool));

  const json random = {{"anchor_logdet", Summary(c.random_anchor_logdet)},
                       {"positive_max_sim", Summary(c.random_positive_max_sim)},
                       {"negative_max_sim", Summary(c.random_negative_max_sim)}};
  const json stats = {
      {"pair", {{"t", pair.first}, {"s", pair.second}}},
      {"miner", a.miner},
      {"k", a.k},
      {"budget", c.batch.anchors.size()},
      {"short_batch", c.batch.short_batch},
      {"degenerate_anchors", c.batch.degenerate_anchors},
      {"selection",
       {{"anchor_logdet", c.anchor_logdet},
        {"positive_max_sim", c.positive_max_sim},
        {"negative_max_sim", c.negative_max_sim}}},
      {"random", random},
      {"checks",
       {{"anchor_logdet_above_every_random",
         c.anchor_logdet > random["anchor_logdet"]["max"].get<double>()},
        {"positive_max_sim_below_random_mean",
         c.positive_max_sim < random["positive_max_sim"]["mean"].get<double>()},
        {"negative_max_sim_above_random_mean",
         c.negative_max_sim >
             random["negative_max_sim"]["mean"].get<double>()}}}};
  run.Write("stats.json", stats.dump(2) + "\n");
  run.Finish({{"pool", a.pool},
              {"k", a.k},
              {"miner", a.miner},
              {"t", pair.first},
              {"s", pair.second},
              {"epsilon", a.epsilon},
              {"bandwidth", a.bandwidth},
              {"draws", a.draws}},
             seed);
  out << stats["checks"].dump() << "\n";
}

// ---- train ----

struct TrainArgs {
  std::string pool;
  std::string mode = "shasam";
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<int> k, epochs1, epochs2;
  std::optional<double> lr1, lr2, temperature, epsilon, fraction;
  std::optional<std::string> loss, miner;
  std::string out;
  bool force = false;
};

void CmdTrain(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  if (a.mode != "shasam" && a.mode != "ce") {
    throw Error(ErrorCode::kInvalidArgument, "--mode is shasam or ce");
  }
  Run run("train", a.out, a.force);
  TrainConfig config;
  bool config_has_seed = false;
  if (!a.config.empty()) {
    const std::string text = run.Input(a.config);
    config = ParseTrainConfigJson(text, config);
    config_has_seed = json::parse(text).contains("seed");
  }
  if (a.k) config.k = *a.k;
  if (a.epochs1) config.epochs1 = *a.epochs1;
  if (a.epochs2) config.epochs2 = *a.epochs2;
  if (a.lr1) config.lr1 = *a.lr1;
  if (a.lr2) config.lr2 = *a.lr2;
  if (a.temperature) config.temperature = *a.temperature;
  if (a.epsilon) config.epsilon = *a.epsilon;
  if (a.fraction) config.fraction = *a.fraction;
  if (a.loss) config.loss = ParseLossKind(*a.loss);
  if (a.miner) config.miner = ParseMinerKind(*a.miner);
  if (a.seed || !config_has_seed) config.seed = ResolveSeed(a.seed, err);
  config.Validate();

  const LabeledPool pool = PoolFromText(run.Input(a.pool));
  const TrainedModel model = a.mode == "ce"
                                 ? TrainCrossEntropyBaseline(pool, config)
                                 : TrainTwoStage(pool, config);
  const std::string config_text = TrainConfigJson(config);
  const CheckpointMeta meta{config.seed, ConfigHash(config_text)};
  run.Write("config.json", config_text);
  run.Write("encoder.json", EncoderCheckpointJson(model.encoder, meta));
  run.Write("classifier.json", ClassifierCheckpointJson(model.classifier, meta));
  run.Write("trace.csv", FormatTraceCsv(model.trace));
  std::ostringstream stage2;
  stage2 << "epoch,loss\n";
  char buf[64];
  for (size_t e = 0; e < model.stage2_loss.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", e, model.stage2_loss[e]);
    stage2 << buf;
  }
  run.Write("stage2_loss.csv", stage2.str());
  json resolved = json::parse(config_text);
  resolved["mode"] = a.mode;
  resolved["pool"] = a.pool;
  run.Finish(resolved, config.seed);
  out << "trained (" << a.mode << ", " << model.trace.size()
      << " stage-1 steps) into " << a.out << "\n";
}

// ---- eval ----

struct EvalArgs {
  std::string model;
  std::string test;
  std::string predictions;
  std::string out;
  bool force = false;
};

struct Labels {
  std::vector<int> y_true, y_pred, s;
};

// Header must name y_true, y_pred and s; other columns are ignored.
Labels ParsePredictionsCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kParse, "predictions: missing header");
  }
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      cells.push_back(cell);
    }
    return cells;
  };
  const std::vector<std::string> header = split(line);
  auto column = [&header](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::kParse, "predictions: no '" + name + "' column");
    }
    return static_cast<size_t>(it - header.begin());
  };
  const size_t ct = column("y_true"), cp = column("y_pred"), cs = column("s");
  Labels labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kParse, "predictions line " +
                                         std::to_string(line_no) +
                                         ": wrong number of fields");
    }
    try {
      size_t used = 0;
      auto to_int = [&](const std::string& c) {
        const int v = std::stoi(c, &used);
        if (used != c.size()) throw std::invalid_argument(c);
        return v;
      };
      labels.y_true.push_back(to_int(cells[ct]));
      labels.y_pred.push_back(to_int(cells[cp]));
      labels.s.push_back(to_int(cells[cs]));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParse, "predictions line " +
                                         std::to_string(line_no) +
                                         ": labels must be integers");
    }
  }
  if (labels.y_true.empty()) {
    throw Error(ErrorCode::kEmptyPool, "predictions: no rows");
  }
  return labels;
}

void CmdEval(const EvalArgs& a, std::ostream& out, std::ostream&) {
  if (a.predictions.empty() == (a.model.empty() || a.test.empty())) {
    throw Error(ErrorCode::kInvalidArgument,
                "give either --model and --test, or --predictions");
  }
  Run run("eval", a.out, a.force);
  Labels labels;
  json config;
  if (!a.predictions.empty()) {
    labels = ParsePredictionsCsv(run.Input(a.predictions));
    config = {{"predictions", a.predictions}};
  } else {
    const fs::path dir(a.model);
    CheckpointMeta enc_meta, cls_meta;
    const Encoder encoder = ParseEncoderCheckpoint(
        run.Input((dir / "encoder.json").string()), &enc_meta);
    const Classifier classifier = ParseClassifierCheckpoint(
        run.Input((dir / "classifier.json").string()), &cls_meta);
    if (enc_meta.config_hash != cls_meta.config_hash) {
      throw Error(ErrorCode::kInvalidArgument,
                  "encoder and classifier come from different runs");
    }
    const LabeledPool test = PoolFromText(run.Input(a.test));
    labels.y_true = test.targets;
    labels.s = test.sensitives;
    labels.y_pred = Predict(encoder, classifier, test.features);
    config = {{"model", a.model},
              {"test", a.test},
              {"model_config_hash", Hex(enc_meta.config_hash)}};
  }
  const EvalReport report = Evaluate(labels.y_true, labels.y_pred, labels.s);
  const std::string text = EvalReportJson(report);
  run.Write("report.json", text);
  run.Finish(config, std::nullopt);
  out << text;
}

// ---- verify ----

struct VerifyArgs {
  std::optional<uint64_t> seed;
  double epsilon = 1e-4;
  std::string out;
  bool force = false;
};

bool CmdVerify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.epsilon >= 0.0) || !std::isfinite(a.epsilon)) {
    throw Error(ErrorCode::kInvalidArgument,
                "--epsilon must be a finite non-negative number");
  }
  const uint64_t seed = ResolveSeed(a.seed, err);
  Run run("verify", a.out, a.force);
  const VerifyReport report = RunVerify(seed, a.epsilon);
  for (const SuiteResult& s : report.suites) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-14s %s %7.2fs  ", s.name.c_str(),
                  s.passed ? "PASS" : "FAIL", s.seconds);
    out << buf << s.detail << "\n";
  }
  out << "LogDetCMI form matching the definitional value: "
      << report.logdet_variant << "\n";
  run.Write("verify.json", VerifyReportJson(report));
  run.Finish({{"epsilon", a.epsilon}}, seed);
  return report.passed;
}

void AddOut(CLI::App* cmd, std::string* out, bool* force) {
  cmd->add_option("--out", *out, "Output directory")->required();
  cmd->add_flag("--force", *force, "Write into a non-empty output directory");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Fair representation learning with submodular hard-sample mining"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic pool");
  gen_cmd->add_option("--scenario", gen.scenario,
                      "balanced, imbalanced, overlap or fairbias")
      ->required();
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--alpha", gen.alpha, "fairbias imbalance ratio");
  gen_cmd->add_option("--rho", gen.rho, "fairbias sensitive leakage");
  gen_cmd->add_option("--n", gen.n, "fairbias training size");
  gen_cmd->add_option("--test-per-cell", gen.test_per_cell,
                      "fairbias test items per (t, s) cell");
  AddOut(gen_cmd, &gen.out, &gen.force);

  MineArgs mine;
  CLI::App* mine_cmd = app.add_subcommand(
      "mine-demo", "Mine one batch and compare it with random draws");
  mine_cmd->add_option("--pool", mine.pool, "Pool CSV")->required();
  mine_cmd->add_option("--k", mine.k, "Budget per role")->capture_default_str();
  mine_cmd->add_option("--miner", mine.miner, "shasam or random")
      ->capture_default_str();
  mine_cmd->add_option("--seed", mine.seed);
  mine_cmd->add_option("--target", mine.target, "Target of the pair");
  mine_cmd->add_option("--sensitive", mine.sensitive, "Sensitive value of the pair");
  mine_cmd->add_option("--epsilon", mine.epsilon)->capture_default_str();
  mine_cmd->add_option("--bandwidth", mine.bandwidth,
                       "Gaussian kernel bandwidth for the feature embedding; "
                       "0 uses raw features")
      ->capture_default_str();
  mine_cmd->add_option("--draws", mine.draws, "Random draws to compare with")
      ->capture_default_str();
  AddOut(mine_cmd, &mine.out, &mine.force);

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train encoder and head");
  train_cmd->add_option("--pool", train.pool, "Training pool CSV")->required();
  train_cmd->add_option("--mode", train.mode,
                        "shasam (two stages) or ce (head on raw features)")
      ->capture_default_str();
  train_cmd->add_option("--config", train.config, "JSON config file");
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--k", train.k);
  train_cmd->add_option("--loss", train.loss, "flcmi or logdetcmi");
  train_cmd->add_option("--miner", train.miner, "shasam or random");
  train_cmd->add_option("--epochs1", train.epochs1);
  train_cmd->add_option("--epochs2", train.epochs2);
  train_cmd->add_option("--lr1", train.lr1);
  train_cmd->add_option("--lr2", train.lr2);
  train_cmd->add_option("--temperature", train.temperature);
  train_cmd->add_option("--epsilon", train.epsilon);
  train_cmd->add_option("--fraction", train.fraction);
  AddOut(train_cmd, &train.out, &train.force);

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Accuracy and fairness report");
  eval_cmd->add_option("--model", eval.model, "Directory written by train");
  eval_cmd->add_option("--test", eval.test, "Test pool CSV");
  eval_cmd->add_option("--predictions", eval.predictions,
                       "CSV with y_true, y_pred and s columns");
  AddOut(eval_cmd, &eval.out, &eval.force);

  VerifyArgs verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Run the oracle self-checks");
  verify_cmd->add_option("--seed", verify.seed);
  verify_cmd->add_option("--epsilon", verify.epsilon)->capture_default_str();
  AddOut(verify_cmd, &verify.out, &verify.force);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) CmdGen(gen, out, err);
    if (*mine_cmd) CmdMineDemo(mine, out, err);
    if (*train_cmd) CmdTrain(train, out, err);
    if (*eval_cmd) CmdEval(eval, out, err);
    if (*verify_cmd && !CmdVerify(verify, out, err)) return kExitVerifyFail;
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}

}  // namespace subfair::cli
