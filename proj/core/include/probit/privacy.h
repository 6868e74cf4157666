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

#ifndef PROBIT_PRIVACY_H_
#define PROBIT_PRIVACY_H_

#include <iosfwd>
#include <span>
#include <vector>

#include "probit/model_vector.h"

namespace probit {

// Per-round local differential privacy target for the one-bit compressor.
struct PrivacySpec {
  double epsilon = 0.1;
  // l1-sensitivity of a client update, in model-parameter units.
  double delta1 = 0.0002;
  bool enabled = false;

  // (1 + 1/epsilon) * delta1 when enabled, 0 otherwise.
  double Margin() const;
  // Throws ConfigError if enabled with a non-positive epsilon or delta1.
  void Validate() const;
};

// Smallest quantization range that certifies (epsilon, 0)-DP for updates
// bounded by max_abs_delta: max_abs_delta + (1 + 1/epsilon) * delta1.
double RequiredB(double max_abs_delta, const PrivacySpec& spec);

// |ln P(output | delta + v) - ln P(output | delta)| for output +1 or -1.
double OutputLogRatio(double b, double delta, double v, int output);

// Worst-case log-likelihood ratio of the one-bit channel between inputs
// delta and delta + v, maximized over both outputs. Returns +infinity when
// one input can never produce an output that the other can. Throws
// PreconditionError unless |delta| <= b and |delta + v| <= b.
double AuditPrivacyLoss(double b, double delta, double v);

// Sum over coordinates of the per-coordinate worst-case loss, an upper bound
// on the privacy loss of the whole message. Throws PreconditionError when
// ||v||_1 exceeds delta1 or a coordinate is inadmissible.
double AuditVector(std::span<const double> b, const ModelVector& delta,
                   const ModelVector& v, double delta1);

struct AuditRow {
  std::size_t coordinate;
  double delta;
  double v;
  double loss;
  // Share of the budget this coordinate may use: epsilon * |v_i| / delta1.
  double bound;
  bool pass;
};

std::vector<AuditRow> AuditRows(std::span<const double> b,
                                const ModelVector& delta, const ModelVector& v,
                                const PrivacySpec& spec);

// CSV with header coordinate,delta,v,loss,bound,pass and a trailing "total"
// row comparing the summed loss against epsilon.
void WriteAuditCsv(std::ostream& out, const std::vector<AuditRow>& rows,
                   const PrivacySpec& spec);

}  // namespace probit

#endif  // PROBIT_PRIVACY_H_
