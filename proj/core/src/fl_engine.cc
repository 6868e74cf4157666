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

#include "probit/fl_engine.h"

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>
#include <utility>

#include <fmt/format.h>
#include <json.hpp>

#include "probit/byzantine.h"
#include "probit/errors.h"

#ifndef PROBIT_BUILD_VERSION
#define PROBIT_BUILD_VERSION "unknown"
#endif

namespace probit {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(i) for i in [0, count). Work is split by index, so results written
// to per-index slots do not depend on the worker count.
template <typename Fn>
void ParallelFor(std::size_t count, int workers, Fn fn) {
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void Shuffle(std::vector<std::size_t>& items, RngStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.UniformInt(i)]);
  }
}

double Mean(std::span<const double> values) {
  if (values.empty()) return kNaN;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::string Num(double v) { return fmt::format("{}", v); }

}  // namespace

ModelVector LocalSolve(ClientState& client, const ModelVector& w_global,
                       const TrainSchedule& schedule, const LearnerShape& shape,
                       RngStream& rng, LocalPenalty penalty, double l1_weight) {
  CheckSameDim(client.local_params, w_global, "LocalSolve");
  if (client.momentum.dim() != w_global.dim()) client.momentum = ModelVector(w_global.dim());
  auto w = client.local_params.mutable_values();
  auto velocity = client.momentum.mutable_values();
  const std::size_t n = client.data.size();
  std::vector<std::size_t> order(n);
  for (int epoch = 0; epoch < schedule.local_epochs && n > 0; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Shuffle(order, rng);
    for (std::size_t start = 0; start < n; start += schedule.batch_size) {
      const std::size_t end = std::min(n, start + schedule.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      const LossGrad lg = LossAndGrad(shape, client.local_params, client.data, batch);
      for (std::size_t i = 0; i < w.size(); ++i) {
        double g = lg.grad[i];
        const double gap = w[i] - w_global[i];
        if (penalty == LocalPenalty::kProximal) {
          g += schedule.lambda * gap;
        } else {
          g += l1_weight * static_cast<double>((gap > 0.0) - (gap < 0.0));
        }
        velocity[i] = schedule.momentum * velocity[i] + g;
        w[i] -= schedule.lr * velocity[i];
      }
    }
  }
  client.local_params.CheckFinite();
  return Axpy(-1.0, w_global, client.local_params);
}

ModelVector ProximalGradient(const ClientState& client, const ModelVector& w,
                             const ModelVector& anchor, double lambda,
                             const LearnerShape& shape) {
  CheckSameDim(w, anchor, "ProximalGradient");
  ModelVector grad = FullLossAndGrad(shape, w, client.data).grad;
  auto g = grad.mutable_values();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += lambda * (w[i] - anchor[i]);
  return grad;
}

double Inexactness(const ClientState& client, const ModelVector& w_global,
                   const TrainSchedule& schedule, const LearnerShape& shape) {
  const double start =
      L2Norm(ProximalGradient(client, w_global, w_global, schedule.lambda, shape));
  if (start < 1e-12) return std::numeric_limits<double>::infinity();
  const double end = L2Norm(
      ProximalGradient(client, client.local_params, w_global, schedule.lambda, shape));
  return end / start;
}

bool LossSignalVote(const std::vector<bool>& loss_decreased) {
  if (loss_decreased.empty()) throw PreconditionError("LossSignalVote: no signals");
  std::size_t yes = 0;
  for (bool s : loss_decreased) yes += s ? 1 : 0;
  return 2 * yes > loss_decreased.size();
}

void MetricsLog::WriteCsv(std::ostream& out) const {
  out << "round,scheme,beta,attack,epsilon,train_loss,test_acc,theta_hat_norm,"
         "b_mean,B_dissimilarity,inexactness_mean\n";
  for (const RoundMetrics& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.round, SchemeName(scheme),
                       Num(beta), AttackKindName(attack), Num(epsilon), Num(r.train_loss),
                       Num(r.test_acc), Num(r.theta_hat_norm), Num(r.b_mean),
                       Num(r.b_dissimilarity), Num(r.inexactness_mean));
  }
}

void MetricsLog::WriteReceiptsCsv(std::ostream& out) const {
  out << "round,theta_hat_norm,messages,min_plus_fraction,max_plus_fraction\n";
  for (const RoundReceipt& r : receipts) {
    double lo = kNaN, hi = kNaN;
    if (r.tally.m > 0 && r.tally.dim() > 0) {
      lo = 1.0;
      hi = 0.0;
      for (std::size_t i = 0; i < r.tally.dim(); ++i) {
        lo = std::min(lo, r.tally.PlusFraction(i));
        hi = std::max(hi, r.tally.PlusFraction(i));
      }
    }
    out << fmt::format("{},{},{},{},{}\n", r.round, Num(L2Norm(r.theta_hat)), r.tally.m,
                       Num(lo), Num(hi));
  }
}

Simulation::Simulation(ExperimentConfig config) : config_(std::move(config)) {
  config_.Validate();
  const uint64_t data_seed = DeriveSeed(config_.seed, "data");
  Dataset train;
  if (config_.data.source == "synthetic") {
    RngStream task_rng(data_seed, 0, 0);
    const SyntheticTask task = MakeSyntheticTask(config_.data.classes, config_.data.features,
                                                 config_.data.spread, task_rng);
    train = SampleSynthetic(task, config_.data.per_class, task_rng);
    RngStream test_rng(data_seed, 1, 0);
    test_ = SampleSynthetic(task, config_.data.test_per_class, test_rng);
  } else {
    train = LoadDatasetCsvFile(config_.data.train_csv);
    test_ = LoadDatasetCsvFile(config_.data.test_csv);
    const int classes = std::max(train.num_classes, test_.num_classes);
    train.num_classes = classes;
    test_.num_classes = classes;
    if (train.num_features != test_.num_features) {
      throw ConfigError("[data] train_csv and test_csv have different feature counts");
    }
    if (config_.data.classes_per_client > classes) {
      throw ConfigError("[data] classes_per_client exceeds the number of classes");
    }
    if (train.size() < config_.clients) {
      throw ConfigError("[data] train_csv has fewer samples than clients");
    }
  }

  shape_ = LearnerShape{config_.learner.kind, train.num_features, config_.learner.hidden,
                        train.num_classes};
  RngStream init_rng(DeriveSeed(config_.seed, "init"), 0, 0);
  global_ = InitParams(shape_, init_rng);

  RngStream partition_rng(data_seed, 2, 0);
  std::vector<Dataset> shards = PartitionLabelSkew(train, config_.clients,
                                                   config_.data.classes_per_client,
                                                   partition_rng);
  clients_.reserve(shards.size());
  for (std::size_t m = 0; m < shards.size(); ++m) {
    if (shards[m].size() == 0) {
      throw ConfigError("[data] partition left client " + std::to_string(m) +
                        " without samples; increase per_class");
    }
    ClientState client;
    client.id = static_cast<int>(m);
    client.local_params = global_;
    client.momentum = ModelVector(global_.dim());
    client.data = std::move(shards[m]);
    clients_.push_back(std::move(client));
  }
  num_regular_ = config_.clients - ByzantineCount(config_.attack.beta, config_.clients);

  const double margin = config_.scheme == Scheme::kProbitPlus ? config_.privacy.Margin() : 0.0;
  // b_init is the clamp level; the privacy margin is added on top.
  quant_ = QuantParams::Uniform(global_.dim(), config_.quant.b_init + margin, margin);
  last_b_mean_ = config_.scheme == Scheme::kProbitPlus ? quant_.MeanB() : kNaN;
  last_inexactness_ = kNaN;

  std::vector<ModelVector> grads(num_regular_);
  ParallelFor(num_regular_, config_.workers, [&](std::size_t m) {
    grads[m] = FullLossAndGrad(shape_, global_, clients_[m].data).grad;
  });
  last_dissimilarity_ = MeasureDissimilarity(grads);
}

RoundReceipt Simulation::RunRound() {
  const std::size_t num_clients = clients_.size();
  const auto t = static_cast<uint32_t>(round_);
  const ModelVector w_t = global_;

  std::vector<ModelVector> deltas(num_clients);
  std::vector<ModelVector> grads(num_clients);
  std::vector<double> inexact(num_clients);
  std::vector<int> signals(num_clients, -1);  // -1: no signal yet
  const uint64_t local_seed = DeriveSeed(config_.seed, "local");
  const LocalPenalty penalty =
      config_.scheme == Scheme::kRsa ? LocalPenalty::kL1Sign : LocalPenalty::kProximal;

  ParallelFor(num_clients, config_.workers, [&](std::size_t m) {
    ClientState& client = clients_[m];
    const LossGrad at_global = FullLossAndGrad(shape_, w_t, client.data);
    if (!std::isnan(client.last_global_loss)) {
      signals[m] = at_global.loss < client.last_global_loss ? 1 : 0;
    }
    client.last_global_loss = at_global.loss;
    RngStream rng(local_seed, static_cast<uint32_t>(m), t);
    deltas[m] = LocalSolve(client, w_t, config_.schedule, shape_, rng, penalty,
                           config_.server.rsa_lambda);
    const double start = L2Norm(at_global.grad);
    const double end = L2Norm(ProximalGradient(client, client.local_params, w_t,
                                               config_.schedule.lambda, shape_));
    inexact[m] = start < 1e-12 ? std::numeric_limits<double>::infinity() : end / start;
    grads[m] = at_global.grad;
  });

  RngStream attack_rng(DeriveSeed(config_.seed, "attack"), 0, t);
  const std::vector<ModelVector> sent = CorruptUpdates(deltas, config_.attack, attack_rng);

  RoundReceipt receipt;
  receipt.round = round_ + 1;
  std::vector<BitVector> bits;
  switch (config_.scheme) {
    case Scheme::kProbitPlus: {
      bits.resize(num_clients);
      const uint64_t compress_seed = DeriveSeed(config_.seed, "compress");
      ParallelFor(num_clients, config_.workers, [&](std::size_t m) {
        RngStream rng(compress_seed, static_cast<uint32_t>(m), t);
        bits[m] = Compress(ClampUpdate(sent[m], quant_), quant_, rng);
      });
      break;
    }
    case Scheme::kSignSgdMv:
    case Scheme::kRsa:
      bits.reserve(num_clients);
      for (const ModelVector& d : sent) bits.push_back(SignBits(d));
      break;
    case Scheme::kFedAvg:
    case Scheme::kFedGm:
      break;
  }
  if (config_.attack.kind == AttackKind::kWorstCaseBits) {
    bits = CorruptBits(bits, config_.attack);
  }

  switch (config_.scheme) {
    case Scheme::kProbitPlus:
      receipt.tally = TallyBits(bits);
      receipt.theta_hat = ProbitAggregate(receipt.tally, quant_.b());
      receipt.b_used = quant_.b();
      break;
    case Scheme::kSignSgdMv:
      receipt.tally = TallyBits(bits);
      receipt.theta_hat = MajorityVote(bits, config_.server.sign_step);
      receipt.b_used.assign(w_t.dim(), config_.server.sign_step);
      break;
    case Scheme::kRsa:
      receipt.tally = TallyBits(bits);
      receipt.theta_hat = SignAccumulate(bits, config_.server.sign_step);
      receipt.b_used.assign(w_t.dim(), config_.server.sign_step);
      break;
    case Scheme::kFedAvg:
      receipt.theta_hat = FedAvgMean(sent);
      break;
    case Scheme::kFedGm:
      receipt.theta_hat = GeometricMedian(
          sent, WeiszfeldOptions{config_.server.gm_tol, config_.server.gm_max_iter});
      break;
  }

  global_ = Axpy(config_.server.server_lr, receipt.theta_hat, w_t);

  last_b_mean_ = config_.scheme == Scheme::kProbitPlus ? quant_.MeanB() : kNaN;
  if (config_.DynamicBEnabled()) {
    std::vector<bool> votes;
    for (std::size_t m = 0; m < num_clients; ++m) {
      if (signals[m] < 0) continue;
      bool decreased = signals[m] == 1;
      if (m >= num_regular_ && config_.attack.lie_in_loss_vote) decreased = !decreased;
      votes.push_back(decreased);
    }
    if (!votes.empty()) {
      const bool decreased = LossSignalVote(votes);
      // A shrink that would eat into the privacy margin is skipped.
      const double factor = decreased ? kBGrowth : kBShrink;
      bool admissible = true;
      for (double b : quant_.b()) admissible = admissible && b * factor > quant_.dp_margin();
      if (admissible) quant_ = DynamicBUpdate(quant_, decreased);
    }
  }

  const std::span<const ModelVector> regular_grads(grads.data(), num_regular_);
  last_dissimilarity_ = MeasureDissimilarity(regular_grads);
  last_inexactness_ = Mean(std::span<const double>(inexact.data(), num_regular_));
  last_theta_norm_ = L2Norm(receipt.theta_hat);
  ++round_;
  return receipt;
}

RoundMetrics Simulation::CurrentMetrics() const {
  RoundMetrics metrics;
  metrics.round = round_;
  std::vector<double> losses(num_regular_);
  ParallelFor(num_regular_, config_.workers, [&](std::size_t m) {
    losses[m] = Loss(shape_, global_, clients_[m].data);
  });
  metrics.train_loss = Mean(losses);
  metrics.test_acc = Accuracy(shape_, global_, test_);
  metrics.theta_hat_norm = round_ == 0 ? 0.0 : last_theta_norm_;
  metrics.b_mean = last_b_mean_;
  metrics.b_dissimilarity = last_dissimilarity_;
  metrics.inexactness_mean = round_ == 0 ? kNaN : last_inexactness_;
  return metrics;
}

MetricsLog RunTraining(const ExperimentConfig& config) {
  Simulation sim(config);
  MetricsLog log;
  log.scheme = config.scheme;
  log.beta = config.attack.beta;
  log.attack = config.attack.kind;
  log.epsilon = config.privacy.enabled ? config.privacy.epsilon
                                       : std::numeric_limits<double>::infinity();
  log.rows.push_back(sim.CurrentMetrics());
  for (int t = 0; t < config.schedule.rounds; ++t) {
    log.receipts.push_back(sim.RunRound());
    log.rows.push_back(sim.CurrentMetrics());
  }
  log.final_model = sim.global_model();
  return log;
}

std::string_view BuildVersion() { return PROBIT_BUILD_VERSION; }

std::string RunManifestJson(const ExperimentConfig& config) {
  nlohmann::ordered_json manifest;
  manifest["tool"] = "probit";
  manifest["version"] = std::string(BuildVersion());
  manifest["seed"] = config.seed;
  manifest["scheme"] = std::string(SchemeName(config.scheme));
  manifest["config"] = SerializeConfig(config);
  nlohmann::ordered_json privacy;
  privacy["enabled"] = config.privacy.enabled;
  if (config.privacy.enabled) {
    privacy["per_round_epsilon"] = config.privacy.epsilon;
    privacy["delta1"] = config.privacy.delta1;
    privacy["rounds"] = config.schedule.rounds;
    // Basic sequential composition; only the per-round guarantee is certified.
    privacy["composed_epsilon_upper_bound"] =
        config.privacy.epsilon * config.schedule.rounds;
    privacy["note"] =
        "per-round (epsilon, 0)-DP is certified; the composed value is the naive "
        "T * epsilon sum and is not a tight multi-round guarantee";
  }
  manifest["privacy"] = privacy;
  return manifest.dump(2) + "\n";
}

MetricsLog RunTrainingToDir(const ExperimentConfig& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const MetricsLog log = RunTraining(config);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("metrics.csv");
    log.WriteCsv(out);
  }
  {
    auto out = open("receipts.csv");
    log.WriteReceiptsCsv(out);
  }
  {
    auto out = open("final_model.csv");
    out << "index,value\n";
    for (std::size_t i = 0; i < log.final_model.dim(); ++i) {
      out << fmt::format("{},{}\n", i, Num(log.final_model[i]));
    }
  }
  {
    auto out = open("manifest.json");
    out << RunManifestJson(config);
  }
  return log;
}

}  // namespace probit
