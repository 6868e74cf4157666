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

#ifndef PROBIT_VERIFY_H_
#define PROBIT_VERIFY_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "probit/byzantine.h"
#include "probit/model_vector.h"
#include "probit/privacy.h"

namespace probit {

// Outcome of one statistical check. Two-sided checks pass when
// |measured - theoretical| <= tolerance; one-sided checks pass when
// measured <= theoretical + tolerance (or >= for lower bounds).
struct OracleReport {
  std::string check;
  double measured = 0.0;
  double theoretical = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t trials = 0;
  std::string note;
};

// Model for honest client updates around a common mean theta: each
// coordinate is theta_i + sigma_i * N(0, 1), resampled until it lies in
// [-b_i, b_i], with sigma_i = min(sigma_fraction * b_i, (b_i - |theta_i|) / 4)
// so truncation stays negligible.
struct UpdateModel {
  double sigma_fraction = 0.1;
};

ModelVector SampleHonestUpdate(const ModelVector& theta, std::span<const double> b,
                               const UpdateModel& model, RngStream& rng);

// M clients hold a fixed update matrix drawn around theta. The mean of the
// aggregate over trials is compared with the matrix column means coordinate by
// coordinate; measured is the largest |z| score, the tolerance 4 standard errors.
OracleReport CheckUnbiasedness(const ModelVector& theta, std::span<const double> b,
                               std::size_t num_clients, std::size_t trials,
                               uint64_t seed, const UpdateModel& model = {});

// Clients send delta = theta exactly; compares the Monte Carlo mean of
// ||theta - theta_hat||^2 with sum_i (b_i^2 - theta_i^2) / M at 5% relative.
OracleReport CheckVariance(const ModelVector& theta, std::span<const double> b,
                           std::size_t num_clients, std::size_t trials, uint64_t seed);

// Deviation of the expected aggregate caused by an attack, estimated with
// common random numbers for honest clients, against 2 beta ||b|| + 3 SE.
OracleReport CheckByzantineBound(const AttackSpec& spec, const ModelVector& theta,
                                 std::span<const double> b, std::size_t num_clients,
                                 std::size_t trials, uint64_t seed,
                                 const UpdateModel& model = {});

// d = 1, every honest client at delta = -b, all-plus adversary: the exact
// deviation is 2 beta b. Passes when the measured value is >= 1.9 beta b.
OracleReport CheckByzantineTightness(double beta, double b, std::size_t num_clients,
                                     std::size_t trials, uint64_t seed);

enum class MarginPolicy {
  // b = max|delta| + (1 + 1/eps) * delta1
  kCalibrated,
  // b = max|delta|
  kNone,
};

// Randomized adversarial search over adjacent pairs (delta, delta + v) with
// ||v||_1 <= delta1 for the largest audited privacy loss. Passes when the
// maximum stays <= epsilon.
OracleReport CheckDp(MarginPolicy policy, const PrivacySpec& spec, double max_abs_delta,
                     std::size_t dim, std::size_t trials, uint64_t seed);

// Least-squares slope of log MSE against log M; passes in [-1.15, -0.85].
// Throws PreconditionError with fewer than three client counts or an
// unsorted list.
OracleReport CheckErrorDecay(const ModelVector& theta, std::span<const double> b,
                             std::span<const std::size_t> client_counts,
                             std::size_t trials, uint64_t seed);

struct SuiteOptions {
  // 0 keeps each check's default trial count.
  std::size_t trials = 0;
  uint64_t seed = 20260117;
  // Sabotage switch: run the DP calibration check without the margin.
  bool remove_dp_margin = false;
};

// Known suites: unbiasedness, variance, byzantine, dp, decay, all.
const std::vector<std::string>& SuiteNames();
bool IsKnownSuite(const std::string& name);
std::vector<OracleReport> RunSuite(const std::string& name, const SuiteOptions& options);

void WriteReportHeader(std::ostream& out);
void WriteReportRow(std::ostream& out, const OracleReport& report);

}  // namespace probit

#endif  // PROBIT_VERIFY_H_
