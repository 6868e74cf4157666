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

#ifndef PROBIT_CONFIG_H_
#define PROBIT_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "probit/byzantine.h"
#include "probit/learner.h"
#include "probit/privacy.h"

namespace probit {

enum class Scheme { kProbitPlus, kFedAvg, kFedGm, kSignSgdMv, kRsa };

std::string_view SchemeName(Scheme scheme);
std::optional<Scheme> ParseScheme(std::string_view name);
// Schemes whose clients send one bit per coordinate.
bool IsBitScheme(Scheme scheme);

enum class DynamicBMode { kAuto, kOn, kOff };

struct TrainSchedule {
  int rounds = 100;
  int local_epochs = 5;
  std::size_t batch_size = 10;
  double lr = 0.01;
  double momentum = 0.5;
  // Weight of the proximal term (lambda / 2) ||w_m - w||^2.
  double lambda = 0.2;
  // Inexactness level that the local solver is compared against (logged only).
  double gamma = 0.5;
};

struct QuantSpec {
  // Initial clamp level |delta_i| <= b_init. With privacy enabled the
  // transmitted range is b_init + (1 + 1/epsilon) * delta1.
  double b_init = 0.01;
  // kAuto enables the loss-vote schedule only when no attack is configured.
  DynamicBMode dynamic_b = DynamicBMode::kAuto;
};

struct ServerSpec {
  // w_{t+1} = w_t + server_lr * theta_hat.
  double server_lr = 1.0;
  // Step of signSGD majority vote and coefficient of RSA sign accumulation.
  double sign_step = 0.01;
  // Weight of the l1 penalty in the RSA client objective.
  double rsa_lambda = 0.01;
  double gm_tol = 1e-6;
  int gm_max_iter = 100;
};

struct DataSpec {
  // "synthetic" or "csv".
  std::string source = "synthetic";
  int classes = 4;
  std::size_t features = 16;
  std::size_t per_class = 250;
  std::size_t test_per_class = 250;
  double spread = 3.0;
  int classes_per_client = 2;
  std::string train_csv;
  std::string test_csv;
};

struct LearnerSpec {
  LearnerKind kind = LearnerKind::kLogistic;
  std::size_t hidden = 16;
};

struct ExperimentConfig {
  Scheme scheme = Scheme::kProbitPlus;
  uint64_t seed = 1;
  std::size_t clients = 50;
  // Worker threads for client-side computation; results do not depend on it.
  int workers = 1;
  std::string output = "runs/default";
  AttackSpec attack;
  PrivacySpec privacy;
  TrainSchedule schedule;
  QuantSpec quant;
  ServerSpec server;
  DataSpec data;
  LearnerSpec learner;

  bool DynamicBEnabled() const;
  // Throws ConfigError naming the offending field.
  void Validate() const;
};

// Parses the sectioned key = value format written by SerializeConfig.
// "#" and ";" start comments. Every key is optional except
// [experiment] scheme; unknown sections or keys are rejected. Errors are
// reported as ConfigError with the line number and field name.
ExperimentConfig ParseConfig(std::istream& in);
ExperimentConfig ParseConfigString(std::string_view text);
ExperimentConfig LoadConfigFile(const std::string& path);

// Canonical text form listing every field; parsing it yields an equal config.
std::string SerializeConfig(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace probit

#endif  // PROBIT_CONFIG_H_
