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

#include "probit/verify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "probit/aggregator.h"
#include "probit/errors.h"
#include "probit/quantizer.h"
#include "probit/rng_stream.h"

namespace probit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-coordinate running mean and variance (Welford).
class CoordinateStats {
 public:
  explicit CoordinateStats(std::size_t d) : mean_(d, 0.0), m2_(d, 0.0) {}

  void Add(const ModelVector& x) {
    ++count_;
    for (std::size_t i = 0; i < mean_.size(); ++i) {
      const double delta = x[i] - mean_[i];
      mean_[i] += delta / static_cast<double>(count_);
      m2_[i] += delta * (x[i] - mean_[i]);
    }
  }

  double mean(std::size_t i) const { return mean_[i]; }
  double StandardError(std::size_t i) const {
    if (count_ < 2) return 0.0;
    const double var = m2_[i] / static_cast<double>(count_ - 1);
    return std::sqrt(var / static_cast<double>(count_));
  }

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

void CheckTheta(const ModelVector& theta, std::span<const double> b, const char* context) {
  if (theta.dim() != b.size()) {
    throw PreconditionError(std::string(context) + ": theta and b differ in dimension");
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i] > 0.0) || std::abs(theta[i]) > b[i]) {
      throw PreconditionError(std::string(context) + ": need |theta_i| <= b_i, b_i > 0");
    }
  }
}

QuantParams RangeOf(std::span<const double> b) {
  return QuantParams(std::vector<double>(b.begin(), b.end()));
}

// Mean squared aggregation error when every client sends exactly theta.
struct MseEstimate {
  double mse = 0.0;
  double se = 0.0;
};

MseEstimate EstimateMse(const ModelVector& theta, const QuantParams& q,
                        std::size_t num_clients, std::size_t trials, uint64_t seed) {
  std::vector<BitVector> messages(num_clients);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    for (std::size_t m = 0; m < num_clients; ++m) {
      RngStream rng(seed, static_cast<uint32_t>(m), static_cast<uint32_t>(trial));
      messages[m] = Compress(theta, q, rng);
    }
    const ModelVector estimate = ProbitAggregate(TallyBits(messages), q.b());
    const double err = SquaredL2Distance(estimate, theta);
    const double delta = err - mean;
    mean += delta / static_cast<double>(trial + 1);
    m2 += delta * (err - mean);
  }
  const double se = trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1) /
                                           static_cast<double>(trials))
                               : 0.0;
  return {mean, se};
}

struct DeviationEstimate {
  double deviation = 0.0;
  double se = 0.0;
};

// E[theta_hat attacked] - E[theta_hat honest] with common random numbers:
// each client, honest or not, compresses with the same stream in both runs.
DeviationEstimate EstimateDeviation(const AttackSpec& spec,
                                    const std::vector<ModelVector>& honest,
                                    const QuantParams& q, std::size_t trials,
                                    uint64_t seed) {
  const std::size_t num_clients = honest.size();
  const std::size_t num_regular = num_clients - ByzantineCount(spec.beta, num_clients);
  const uint64_t compress_seed = DeriveSeed(seed, "compress");
  const uint64_t attack_seed = DeriveSeed(seed, "attack");
  CoordinateStats stats(q.dim());
  std::vector<BitVector> honest_bits(num_clients);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto t = static_cast<uint32_t>(trial);
    for (std::size_t m = 0; m < num_clients; ++m) {
      RngStream rng(compress_seed, static_cast<uint32_t>(m), t);
      honest_bits[m] = Compress(honest[m], q, rng);
    }
    std::vector<BitVector> attacked_bits;
    if (spec.kind == AttackKind::kWorstCaseBits) {
      attacked_bits = CorruptBits(honest_bits, spec);
    } else {
      RngStream attack_rng(attack_seed, 0, t);
      const std::vector<ModelVector> sent = CorruptUpdates(honest, spec, attack_rng);
      attacked_bits = honest_bits;
      for (std::size_t m = num_regular; m < num_clients; ++m) {
        RngStream rng(compress_seed, static_cast<uint32_t>(m), t);
        attacked_bits[m] = Compress(ClampUpdate(sent[m], q), q, rng);
      }
    }
    const ModelVector clean = ProbitAggregate(TallyBits(honest_bits), q.b());
    const ModelVector attacked = ProbitAggregate(TallyBits(attacked_bits), q.b());
    stats.Add(Axpy(-1.0, clean, attacked));
  }
  double dev_sq = 0.0, se_sq = 0.0;
  for (std::size_t i = 0; i < q.dim(); ++i) {
    dev_sq += stats.mean(i) * stats.mean(i);
    se_sq += stats.StandardError(i) * stats.StandardError(i);
  }
  return {std::sqrt(dev_sq), std::sqrt(se_sq)};
}

double NormOf(std::span<const double> b) {
  double sum = 0.0;
  for (double v : b) sum += v * v;
  return std::sqrt(sum);
}

std::size_t Trials(const SuiteOptions& options, std::size_t fallback) {
  return options.trials > 0 ? options.trials : fallback;
}

}  // namespace

ModelVector SampleHonestUpdate(const ModelVector& theta, std::span<const double> b,
                               const UpdateModel& model, RngStream& rng) {
  ModelVector delta(theta.dim());
  auto out = delta.mutable_values();
  for (std::size_t i = 0; i < theta.dim(); ++i) {
    const double sigma =
        std::min(model.sigma_fraction * b[i], (b[i] - std::abs(theta[i])) / 4.0);
    if (sigma <= 0.0) {
      out[i] = theta[i];
      continue;
    }
    double x;
    do {
      x = theta[i] + sigma * rng.Normal();
    } while (std::abs(x) > b[i]);
    out[i] = x;
  }
  return delta;
}

OracleReport CheckUnbiasedness(const ModelVector& theta, std::span<const double> b,
                               std::size_t num_clients, std::size_t trials,
                               uint64_t seed, const UpdateModel& model) {
  CheckTheta(theta, b, "CheckUnbiasedness");
  const QuantParams q = RangeOf(b);
  // One fixed update matrix; the target is its column mean.
  const uint64_t update_seed = DeriveSeed(seed, "updates");
  std::vector<ModelVector> updates;
  ModelVector target(theta.dim());
  for (std::size_t m = 0; m < num_clients; ++m) {
    RngStream rng(update_seed, static_cast<uint32_t>(m), 0);
    updates.push_back(SampleHonestUpdate(theta, b, model, rng));
    target = Axpy(1.0 / static_cast<double>(num_clients), updates.back(), target);
  }
  const uint64_t compress_seed = DeriveSeed(seed, "compress");
  CoordinateStats stats(theta.dim());
  std::vector<BitVector> messages(num_clients);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    for (std::size_t m = 0; m < num_clients; ++m) {
      RngStream rng(compress_seed, static_cast<uint32_t>(m), static_cast<uint32_t>(trial));
      messages[m] = Compress(updates[m], q, rng);
    }
    stats.Add(ProbitAggregate(TallyBits(messages), q.b()));
  }
  double worst_z = 0.0, worst_abs = 0.0;
  for (std::size_t i = 0; i < theta.dim(); ++i) {
    const double gap = std::abs(stats.mean(i) - target[i]);
    const double se = stats.StandardError(i);
    worst_abs = std::max(worst_abs, gap);
    if (se > 0.0) {
      worst_z = std::max(worst_z, gap / se);
    } else if (gap > 1e-12 * b[i]) {
      worst_z = kInf;
    }
  }
  OracleReport report;
  report.check = fmt::format("unbiasedness_M{}", num_clients);
  report.measured = worst_z;
  report.theoretical = 0.0;
  report.tolerance = 4.0;
  report.pass = worst_z <= 4.0;
  report.trials = trials;
  report.note = fmt::format("max |z| over coordinates; max |mean - theta| = {:.3e}", worst_abs);
  return report;
}

OracleReport CheckVariance(const ModelVector& theta, std::span<const double> b,
                           std::size_t num_clients, std::size_t trials, uint64_t seed) {
  CheckTheta(theta, b, "CheckVariance");
  const QuantParams q = RangeOf(b);
  double expected = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) expected += b[i] * b[i] - theta[i] * theta[i];
  expected /= static_cast<double>(num_clients);
  const MseEstimate est =
      EstimateMse(theta, q, num_clients, trials, DeriveSeed(seed, "variance"));
  OracleReport report;
  report.check = fmt::format("variance_M{}", num_clients);
  report.measured = est.mse;
  report.theoretical = expected;
  report.tolerance = 0.05 * expected;
  report.pass = expected > 0.0 ? std::abs(est.mse - expected) <= report.tolerance
                               : est.mse == 0.0;
  report.trials = trials;
  report.note = fmt::format("relative error {:.4f}; Monte Carlo SE {:.3e}",
                            expected > 0.0 ? std::abs(est.mse - expected) / expected : 0.0,
                            est.se);
  return report;
}

OracleReport CheckByzantineBound(const AttackSpec& spec, const ModelVector& theta,
                                 std::span<const double> b, std::size_t num_clients,
                                 std::size_t trials, uint64_t seed,
                                 const UpdateModel& model) {
  CheckTheta(theta, b, "CheckByzantineBound");
  const QuantParams q = RangeOf(b);
  const uint64_t honest_seed = DeriveSeed(seed, "honest");
  std::vector<ModelVector> honest;
  honest.reserve(num_clients);
  for (std::size_t m = 0; m < num_clients; ++m) {
    RngStream rng(honest_seed, static_cast<uint32_t>(m), 0);
    honest.push_back(SampleHonestUpdate(theta, b, model, rng));
  }
  const DeviationEstimate est = EstimateDeviation(spec, honest, q, trials, seed);
  OracleReport report;
  report.check = fmt::format("byzantine_{}_beta{}", AttackKindName(spec.kind), spec.beta);
  report.measured = est.deviation;
  report.theoretical = 2.0 * spec.beta * NormOf(b);
  report.tolerance = 3.0 * est.se;
  report.pass = est.deviation <= report.theoretical + report.tolerance;
  report.trials = trials;
  report.note = fmt::format("one-sided bound 2*beta*||b||; {} of {} clients Byzantine",
                            ByzantineCount(spec.beta, num_clients), num_clients);
  return report;
}

OracleReport CheckByzantineTightness(double beta, double b, std::size_t num_clients,
                                     std::size_t trials, uint64_t seed) {
  AttackSpec spec;
  spec.kind = AttackKind::kWorstCaseBits;
  spec.worst_case_mode = WorstCaseMode::kAllPlus;
  spec.beta = beta;
  const std::vector<ModelVector> honest(num_clients, ModelVector::Filled(1, -b));
  const DeviationEstimate est =
      EstimateDeviation(spec, honest, QuantParams::Uniform(1, b), trials, seed);
  OracleReport report;
  report.check = fmt::format("byzantine_tightness_beta{}", beta);
  report.measured = est.deviation;
  report.theoretical = 2.0 * beta * b;
  report.tolerance = 0.1 * beta * b;
  report.pass = est.deviation >= 1.9 * beta * b;
  report.trials = trials;
  report.note = "lower bound: all-plus adversary against honest delta = -b, d = 1";
  return report;
}

OracleReport CheckDp(MarginPolicy policy, const PrivacySpec& spec, double max_abs_delta,
                     std::size_t dim, std::size_t trials, uint64_t seed) {
  PrivacySpec enabled = spec;
  enabled.enabled = true;
  enabled.Validate();
  if (dim == 0) throw PreconditionError("CheckDp: dim must be positive");
  const double b_value = policy == MarginPolicy::kCalibrated
                             ? RequiredB(max_abs_delta, enabled)
                             : max_abs_delta;
  const std::vector<double> b(dim, b_value);
  RngStream rng(DeriveSeed(seed, "dp"), 0, 0);
  double worst = 0.0;
  std::size_t worst_trial = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    // Sensitivity budget actually used: full in most trials.
    const double budget = enabled.delta1 * (trial % 5 == 4 ? rng.Uniform() : 1.0);
    ModelVector v(dim);
    auto vs = v.mutable_values();
    switch (trial % 4) {
      case 0: {  // all mass on one coordinate
        vs[rng.UniformInt(dim)] = rng.Bernoulli(0.5) ? budget : -budget;
        break;
      }
      case 1: {  // evenly spread
        for (double& x : vs) x = (rng.Bernoulli(0.5) ? 1.0 : -1.0) * budget / dim;
        break;
      }
      default: {  // random split
        double total = 0.0;
        for (double& x : vs) {
          x = -std::log(1.0 - rng.Uniform());
          total += x;
        }
        for (double& x : vs) x *= (rng.Bernoulli(0.5) ? 1.0 : -1.0) * budget / total;
        break;
      }
    }
    ModelVector delta(dim);
    auto ds = delta.mutable_values();
    for (std::size_t i = 0; i < dim; ++i) {
      const double u = rng.Uniform();
      // Edges of the update range are where the channel is most revealing.
      double x = u < 0.25 ? -max_abs_delta
                 : u < 0.5 ? max_abs_delta
                           : max_abs_delta * (2.0 * rng.Uniform() - 1.0);
      const double lo = std::max(-b_value, -b_value - vs[i]);
      const double hi = std::min(b_value, b_value - vs[i]);
      double d = std::clamp(x, lo, hi);
      while (d + vs[i] > b_value) d = std::nextafter(d, -kInf);
      while (d + vs[i] < -b_value) d = std::nextafter(d, kInf);
      ds[i] = d;
    }
    const double loss = AuditVector(b, delta, v, enabled.delta1);
    if (loss > worst) {
      worst = loss;
      worst_trial = trial;
    }
  }
  OracleReport report;
  report.check = policy == MarginPolicy::kCalibrated ? "dp_calibration" : "dp_no_margin";
  report.measured = worst;
  report.theoretical = enabled.epsilon;
  report.tolerance = 0.0;
  report.pass = worst <= enabled.epsilon + 1e-12;
  report.trials = trials;
  report.note = fmt::format("b = {}; worst pair at trial {}", b_value, worst_trial);
  return report;
}

OracleReport CheckErrorDecay(const ModelVector& theta, std::span<const double> b,
                             std::span<const std::size_t> client_counts,
                             std::size_t trials, uint64_t seed) {
  CheckTheta(theta, b, "CheckErrorDecay");
  if (client_counts.size() < 3) {
    throw PreconditionError("CheckErrorDecay: need at least three client counts");
  }
  if (!std::is_sorted(client_counts.begin(), client_counts.end()) ||
      client_counts.front() == 0) {
    throw PreconditionError("CheckErrorDecay: client counts must be ascending and positive");
  }
  const QuantParams q = RangeOf(b);
  std::vector<double> xs, ys;
  bool all_zero = true, any_zero = false;
  for (std::size_t m : client_counts) {
    const MseEstimate est =
        EstimateMse(theta, q, m, trials, DeriveSeed(seed, fmt::format("decay{}", m)));
    all_zero = all_zero && est.mse == 0.0;
    any_zero = any_zero || est.mse == 0.0;
    xs.push_back(std::log(static_cast<double>(m)));
    ys.push_back(est.mse > 0.0 ? std::log(est.mse) : 0.0);
  }
  OracleReport report;
  report.check = "error_decay";
  report.theoretical = -1.0;
  report.tolerance = 0.15;
  report.trials = trials;
  if (all_zero) {
    report.measured = 0.0;
    report.pass = true;
    report.note = "degenerate: theta = b gives zero error at every M";
    return report;
  }
  if (any_zero) {
    report.measured = std::numeric_limits<double>::quiet_NaN();
    report.pass = false;
    report.note = "zero MSE at some but not all M; increase trials";
    return report;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k] / n;
    my += ys[k] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  report.measured = sxy / sxx;
  report.pass = report.measured >= -1.15 && report.measured <= -0.85;
  report.note = "least-squares slope of log MSE vs log M";
  return report;
}

const std::vector<std::string>& SuiteNames() {
  static const std::vector<std::string> names = {"unbiasedness", "variance", "byzantine",
                                                 "dp", "decay", "all"};
  return names;
}

bool IsKnownSuite(const std::string& name) {
  const auto& names = SuiteNames();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<OracleReport> RunSuite(const std::string& name, const SuiteOptions& options) {
  if (!IsKnownSuite(name)) throw PreconditionError("unknown suite '" + name + "'");
  if (name == "all") {
    std::vector<OracleReport> all;
    for (const std::string& suite : SuiteNames()) {
      if (suite == "all") continue;
      auto part = RunSuite(suite, options);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  constexpr std::size_t kDim = 10;
  constexpr double kRange = 0.01;
  const std::vector<double> b(kDim, kRange);
  // theta spread over [-0.9 b, 0.9 b].
  ModelVector theta(kDim);
  for (std::size_t i = 0; i < kDim; ++i) {
    theta.Set(i, kRange * (-0.9 + 0.2 * static_cast<double>(i)));
  }
  const uint64_t seed = DeriveSeed(options.seed, name);
  std::vector<OracleReport> reports;
  if (name == "unbiasedness") {
    reports.push_back(CheckUnbiasedness(theta, b, 50, Trials(options, 100000), seed));
  } else if (name == "variance") {
    for (std::size_t m : {10, 100}) {
      reports.push_back(CheckVariance(theta, b, m, Trials(options, 100000), seed));
    }
  } else if (name == "byzantine") {
    const std::size_t trials = Trials(options, 10000);
    for (AttackKind kind : {AttackKind::kGaussian, AttackKind::kSignFlip,
                            AttackKind::kZeroGradient, AttackKind::kSampleDuplicate,
                            AttackKind::kWorstCaseBits}) {
      for (double beta : {0.1, 0.2, 0.3, 0.4}) {
        AttackSpec spec;
        spec.kind = kind;
        spec.beta = beta;
        reports.push_back(CheckByzantineBound(spec, theta, b, 50, trials, seed));
      }
    }
    for (double beta : {0.1, 0.2, 0.3, 0.4}) {
      reports.push_back(CheckByzantineTightness(beta, kRange, 50, trials, seed));
    }
  } else if (name == "dp") {
    PrivacySpec spec{0.1, 0.0002, true};
    const std::size_t trials = Trials(options, 10000);
    reports.push_back(CheckDp(options.remove_dp_margin ? MarginPolicy::kNone
                                                       : MarginPolicy::kCalibrated,
                              spec, 0.005, kDim, trials, seed));
    // The margin must be necessary: without it the search has to find a
    // violation.
    OracleReport necessity = CheckDp(MarginPolicy::kNone, spec, 0.005, kDim, trials, seed);
    necessity.check = "dp_margin_necessity";
    necessity.pass = necessity.measured > spec.epsilon;
    necessity.note += "; passes when a violation is found";
    reports.push_back(necessity);
  } else if (name == "decay") {
    const std::vector<double> unit(kDim, 1.0);
    const std::vector<std::size_t> counts = {10, 20, 40, 80};
    reports.push_back(
        CheckErrorDecay(ModelVector(kDim), unit, counts, Trials(options, 20000), seed));
  }
  return reports;
}

void WriteReportHeader(std::ostream& out) {
  out << "check,measured,theoretical,tolerance,pass,trials,note\n";
}

void WriteReportRow(std::ostream& out, const OracleReport& r) {
  out << fmt::format("{},{},{},{},{},{},\"{}\"\n", r.check, r.measured, r.theoretical,
                     r.tolerance, r.pass ? 1 : 0, r.trials, r.note);
}

}  // namespace probit
