// Copyright 2026 The PRoBit Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "probit/config.h"
#include "probit/errors.h"
#include "probit/fl_engine.h"
#include "probit/verify.h"

namespace probit::cli {
namespace {

namespace fs = std::filesystem;

struct RunArgs {
  std::string config_path;
  std::string manifest_path;
  std::optional<uint64_t> seed;
  std::string out_dir;
};

struct VerifyArgs {
  std::vector<std::string> suites;
  std::size_t trials = 0;
  uint64_t seed = SuiteOptions{}.seed;
  bool no_dp_margin = false;
  std::string out_file;
};

struct SweepArgs {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir;
  std::string axis;
  std::vector<std::string> values;
};

std::string ResolveOutDir(const std::string& flag, const ExperimentConfig& config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
    return env;
  }
  return config.output;
}

ExperimentConfig LoadFromManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest '" + path + "'");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest '" + path + "' is not valid JSON: " + e.what());
  }
  if (!manifest.contains("config") || !manifest["config"].is_string()) {
    throw ConfigError("manifest '" + path + "' has no config text");
  }
  return ParseConfigString(manifest["config"].get<std::string>());
}

int CmdRun(const RunArgs& args, std::ostream& out) {
  ExperimentConfig config = args.manifest_path.empty() ? LoadConfigFile(args.config_path)
                                                       : LoadFromManifest(args.manifest_path);
  if (args.seed) config.seed = *args.seed;
  config.Validate();
  const std::string dir = ResolveOutDir(args.out_dir, config);
  const MetricsLog log = RunTrainingToDir(config, dir);
  const RoundMetrics& last = log.rows.back();
  out << fmt::format("{} rounds={} test_acc={:.4f} train_loss={:.6f} out={}\n",
                     SchemeName(config.scheme), last.round, last.test_acc, last.train_loss,
                     dir);
  return kExitOk;
}

int CmdVerify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> suites;
  for (const std::string& s : args.suites) {
    if (!s.empty()) suites.push_back(s);
  }
  if (suites.empty()) {
    err << "verify: at least one suite is required\n";
    return kExitUsage;
  }
  for (const std::string& s : suites) {
    if (!IsKnownSuite(s)) {
      err << "verify: unknown suite '" << s << "'\n";
      return kExitUsage;
    }
  }
  SuiteOptions options;
  options.trials = args.trials;
  options.seed = args.seed;
  options.remove_dp_margin = args.no_dp_margin;

  std::ofstream file;
  if (!args.out_file.empty()) {
    file.open(args.out_file);
    if (!file) throw std::runtime_error("cannot write " + args.out_file);
    WriteReportHeader(file);
  }
  WriteReportHeader(out);
  bool all_pass = true;
  for (const std::string& s : suites) {
    for (const OracleReport& r : RunSuite(s, options)) {
      WriteReportRow(out, r);
      if (file.is_open()) WriteReportRow(file, r);
      all_pass = all_pass && r.pass;
    }
    out.flush();
  }
  return all_pass ? kExitOk : kExitRuntime;
}

int CmdSweep(const SweepArgs& args, std::ostream& out) {
  ExperimentConfig base = LoadConfigFile(args.config_path);
  if (args.seed) base.seed = *args.seed;
  if (args.values.empty()) throw ConfigError("sweep: --values must not be empty");

  std::vector<ExperimentConfig> runs;
  for (const std::string& text : args.values) {
    ExperimentConfig config = base;
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size()) throw ConfigError("sweep: bad value '" + text + "'");
    if (args.axis == "M") {
      if (value < 1 || value != static_cast<double>(static_cast<std::size_t>(value))) {
        throw ConfigError("sweep: client count must be a positive integer, got " + text);
      }
      config.clients = static_cast<std::size_t>(value);
    } else if (args.axis == "beta") {
      config.attack.beta = value;
    } else {
      config.privacy.epsilon = value;
      config.privacy.enabled = true;
    }
    config.Validate();
    runs.push_back(config);
  }

  const std::string dir = ResolveOutDir(args.out_dir, base);
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "axis,value,scheme,seed,final_test_acc,final_train_loss\n";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const std::string run_dir =
        (fs::path(dir) / fmt::format("{}_{}", args.axis, args.values[k])).string();
    const MetricsLog log = RunTrainingToDir(runs[k], run_dir);
    const RoundMetrics& last = log.rows.back();
    const std::string row =
        fmt::format("{},{},{},{},{},{}\n", args.axis, args.values[k],
                    SchemeName(runs[k].scheme), runs[k].seed, last.test_acc, last.train_loss);
    csv << row;
    out << row;
  }
  std::ofstream file(fs::path(dir) / "sweep.csv", std::ios::binary);
  if (!file) throw std::runtime_error("cannot write sweep.csv in " + dir);
  file << csv.str();
  return kExitOk;
}

}  // namespace

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Federated learning with one-bit stochastic updates"};
  app.set_version_flag("--version", std::string(BuildVersion()));
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Train one configuration");
  auto* config_opt = run_cmd->add_option("--config", run.config_path, "Config file");
  auto* manifest_opt =
      run_cmd->add_option("--manifest", run.manifest_path, "Replay a run manifest");
  config_opt->excludes(manifest_opt);
  run_cmd->add_option("--seed", run.seed, "Override the config seed");
  run_cmd->add_option("--out", run.out_dir,
                      fmt::format("Output directory (default: ${}, then config)", kOutDirEnv));

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run statistical oracle suites");
  verify_cmd->add_option("--suite", verify.suites, "unbiasedness|variance|byzantine|dp|decay|all")
      ->required()
      ->delimiter(',');
  verify_cmd->add_option("--trials", verify.trials, "Monte Carlo trials (0 = suite default)");
  verify_cmd->add_option("--seed", verify.seed, "Oracle seed");
  verify_cmd->add_flag("--no-dp-margin", verify.no_dp_margin,
                       "Calibrate b without the privacy margin (must fail)");
  verify_cmd->add_option("--out", verify.out_file, "Also write the report CSV here");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Train once per value of one axis");
  sweep_cmd->add_option("--config", sweep.config_path, "Base config file")->required();
  sweep_cmd->add_option("--seed", sweep.seed, "Override the config seed");
  sweep_cmd->add_option("--out", sweep.out_dir, "Output directory");
  sweep_cmd->add_option("--axis", sweep.axis, "M|beta|epsilon")
      ->required()
      ->check(CLI::IsMember({"M", "beta", "epsilon"}));
  sweep_cmd->add_option("--values", sweep.values, "Comma-separated values")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << BuildVersion() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*run_cmd) {
      if (run.config_path.empty() && run.manifest_path.empty()) {
        err << "run: --config or --manifest is required\n";
        return kExitUsage;
      }
      return CmdRun(run, out);
    }
    if (*verify_cmd) return CmdVerify(verify, out, err);
    return CmdSweep(sweep, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace probit::cli
