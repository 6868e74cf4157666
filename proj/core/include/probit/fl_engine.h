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

#ifndef PROBIT_FL_ENGINE_H_
#define PROBIT_FL_ENGINE_H_

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "probit/aggregator.h"
#include "probit/config.h"
#include "probit/dataset.h"
#include "probit/learner.h"
#include "probit/model_vector.h"
#include "probit/quantizer.h"
#include "probit/rng_stream.h"

namespace probit {

// A participant's persistent state. The local model w_m survives across
// rounds; only its proximal anchor changes with each broadcast.
struct ClientState {
  int id = 0;
  ModelVector local_params;
  Dataset data;
  ModelVector momentum;
  // Loss of the previous broadcast model on local data; NaN before round 1.
  double last_global_loss = std::numeric_limits<double>::quiet_NaN();
};

// Penalty tying the local model to the broadcast model during local training.
enum class LocalPenalty {
  // (lambda / 2) ||w_m - w||^2
  kProximal,
  // rsa_lambda * ||w_m - w||_1, used by RSA
  kL1Sign,
};

// Runs local_epochs of shuffled minibatch SGD with momentum on
// f_m(w_m) + penalty(w_m, w_global), starting from the client's persisted
// model. Returns delta_m = w_m_new - w_global and stores w_m_new.
ModelVector LocalSolve(ClientState& client, const ModelVector& w_global,
                       const TrainSchedule& schedule, const LearnerShape& shape,
                       RngStream& rng, LocalPenalty penalty = LocalPenalty::kProximal,
                       double l1_weight = 0.0);

// Gradient of h_m(w; anchor) = f_m(w) + (lambda / 2) ||w - anchor||^2 on the
// client's full data.
ModelVector ProximalGradient(const ClientState& client, const ModelVector& w,
                             const ModelVector& anchor, double lambda,
                             const LearnerShape& shape);

// ||grad h_m(w_m; w_global)|| / ||grad h_m(w_global; w_global)||, the
// achieved inexactness of the local solve. +infinity if the denominator is
// below 1e-12.
double Inexactness(const ClientState& client, const ModelVector& w_global,
                   const TrainSchedule& schedule, const LearnerShape& shape);

// True iff strictly more than half of the signals report a decrease.
bool LossSignalVote(const std::vector<bool>& loss_decreased);

struct RoundMetrics {
  int round = 0;
  double train_loss = 0.0;
  double test_acc = 0.0;
  double theta_hat_norm = 0.0;
  // Mean quantization range used in the round; NaN for schemes without one.
  double b_mean = 0.0;
  double b_dissimilarity = 0.0;
  // NaN for the initial row.
  double inexactness_mean = 0.0;
};

struct MetricsLog {
  Scheme scheme = Scheme::kProbitPlus;
  double beta = 0.0;
  AttackKind attack = AttackKind::kNone;
  // Per-round epsilon; +infinity when privacy is off.
  double epsilon = 0.0;
  std::vector<RoundMetrics> rows;
  std::vector<RoundReceipt> receipts;
  ModelVector final_model;

  // Columns: round, scheme, beta, attack, epsilon, train_loss, test_acc,
  // theta_hat_norm, b_mean, B_dissimilarity, inexactness_mean.
  void WriteCsv(std::ostream& out) const;
  // Columns: round, theta_hat_norm, messages, min_plus_fraction,
  // max_plus_fraction.
  void WriteReceiptsCsv(std::ostream& out) const;
};

// One federated training run: the server model, M clients, and the transport
// chosen by config.scheme.
class Simulation {
 public:
  // Throws ConfigError if the config is invalid or the data cannot be loaded.
  explicit Simulation(ExperimentConfig config);

  // Executes one round: broadcast, local training, attack, transport,
  // aggregation, global update, and the loss-vote step on b.
  RoundReceipt RunRound();
  RoundMetrics CurrentMetrics() const;

  int round() const { return round_; }
  const ModelVector& global_model() const { return global_; }
  const QuantParams& quant() const { return quant_; }
  const std::vector<ClientState>& clients() const { return clients_; }
  const LearnerShape& shape() const { return shape_; }
  const ExperimentConfig& config() const { return config_; }
  const Dataset& test_set() const { return test_; }
  std::size_t num_regular() const { return num_regular_; }

 private:
  ExperimentConfig config_;
  LearnerShape shape_;
  Dataset test_;
  std::vector<ClientState> clients_;
  std::size_t num_regular_ = 0;
  ModelVector global_;
  QuantParams quant_;
  int round_ = 0;
  double last_theta_norm_ = 0.0;
  double last_dissimilarity_ = 0.0;
  double last_inexactness_ = 0.0;
  double last_b_mean_ = 0.0;
};

// config.schedule.rounds rounds; the log holds rounds + 1 rows.
MetricsLog RunTraining(const ExperimentConfig& config);

// Runs training and writes metrics.csv, receipts.csv, final_model.csv and
// manifest.json into out_dir (created if needed). Returns the log.
MetricsLog RunTrainingToDir(const ExperimentConfig& config, const std::string& out_dir);

// JSON manifest: config echo, seed, build version, privacy accounting.
std::string RunManifestJson(const ExperimentConfig& config);

// Version string of the build (git describe at configure time).
std::string_view BuildVersion();

}  // namespace probit

#endif  // PROBIT_FL_ENGINE_H_
