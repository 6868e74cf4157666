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

#include "probit/privacy.h"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "probit/errors.h"
#include "probit/quantizer.h"

namespace probit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack for the l1 sensitivity check so that vectors scaled to
// exactly delta1 are not rejected by rounding.
constexpr double kSensitivitySlack = 1e-12;

// |ln(p_after / p_before)| with the convention that two impossible outputs
// carry no loss.
double LogRatio(double p_before, double p_after) {
  if (p_before <= 0.0 && p_after <= 0.0) return 0.0;
  if (p_before <= 0.0 || p_after <= 0.0) return kInf;
  return std::abs(std::log(p_after) - std::log(p_before));
}

}  // namespace

double PrivacySpec::Margin() const {
  return enabled ? (1.0 + 1.0 / epsilon) * delta1 : 0.0;
}

void PrivacySpec::Validate() const {
  if (!enabled) return;
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("privacy: epsilon must be a positive finite number");
  }
  if (!(delta1 > 0.0) || !std::isfinite(delta1)) {
    throw ConfigError("privacy: delta1 must be a positive finite number");
  }
}

double RequiredB(double max_abs_delta, const PrivacySpec& spec) {
  if (!spec.enabled) {
    throw PreconditionError("RequiredB: privacy spec is disabled");
  }
  spec.Validate();
  return max_abs_delta + (1.0 + 1.0 / spec.epsilon) * spec.delta1;
}

double OutputLogRatio(double b, double delta, double v, int output) {
  if (!(b > 0.0) || std::abs(delta) > b || std::abs(delta + v) > b) {
    throw PreconditionError("privacy audit: inputs outside [-b, b]");
  }
  if (output != 1 && output != -1) {
    throw PreconditionError("OutputLogRatio: output must be +1 or -1");
  }
  const double plus_before = PlusProbability(delta, b);
  const double plus_after = PlusProbability(delta + v, b);
  return output == 1 ? LogRatio(plus_before, plus_after)
                     : LogRatio(1.0 - plus_before, 1.0 - plus_after);
}

double AuditPrivacyLoss(double b, double delta, double v) {
  return std::max(OutputLogRatio(b, delta, v, 1), OutputLogRatio(b, delta, v, -1));
}

double AuditVector(std::span<const double> b, const ModelVector& delta,
                   const ModelVector& v, double delta1) {
  CheckSameDim(delta, v, "AuditVector");
  if (b.size() != delta.dim()) {
    throw PreconditionError("AuditVector: b has the wrong dimension");
  }
  if (L1Norm(v) > delta1 * (1.0 + kSensitivitySlack)) {
    throw PreconditionError("AuditVector: ||v||_1 = " +
                            std::to_string(L1Norm(v)) +
                            " exceeds the sensitivity " +
                            std::to_string(delta1));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < delta.dim(); ++i) {
    total += AuditPrivacyLoss(b[i], delta[i], v[i]);
  }
  return total;
}

std::vector<AuditRow> AuditRows(std::span<const double> b,
                                const ModelVector& delta, const ModelVector& v,
                                const PrivacySpec& spec) {
  spec.Validate();
  // Validates sensitivity and admissibility up front.
  AuditVector(b, delta, v, spec.delta1);
  std::vector<AuditRow> rows;
  rows.reserve(delta.dim());
  for (std::size_t i = 0; i < delta.dim(); ++i) {
    const double loss = AuditPrivacyLoss(b[i], delta[i], v[i]);
    const double bound = spec.epsilon * std::abs(v[i]) / spec.delta1;
    rows.push_back({i, delta[i], v[i], loss, bound, loss <= bound + 1e-12});
  }
  return rows;
}

void WriteAuditCsv(std::ostream& out, const std::vector<AuditRow>& rows,
                   const PrivacySpec& spec) {
  out << "coordinate,delta,v,loss,bound,pass\n";
  double total = 0.0;
  for (const AuditRow& row : rows) {
    total += row.loss;
    out << fmt::format("{},{},{},{},{},{}\n", row.coordinate, row.delta, row.v,
                       row.loss, row.bound, row.pass ? 1 : 0);
  }
  out << fmt::format("total,,,{},{},{}\n", total, spec.epsilon,
                     total <= spec.epsilon + 1e-12 ? 1 : 0);
}

}  // namespace probit
