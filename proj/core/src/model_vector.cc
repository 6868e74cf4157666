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

#include "probit/model_vector.h"

#include <cmath>
#include <string>
#include <utility>

#include "probit/errors.h"

namespace probit {

ModelVector::ModelVector(std::vector<double> values)
    : values_(std::move(values)) {
  CheckFinite();
}

ModelVector ModelVector::Filled(std::size_t d, double value) {
  return ModelVector(std::vector<double>(d, value));
}

void ModelVector::Set(std::size_t i, double value) {
  if (!std::isfinite(value)) {
    throw PreconditionError("ModelVector::Set: non-finite value at index " +
                            std::to_string(i));
  }
  values_.at(i) = value;
}

void ModelVector::CheckFinite() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw PreconditionError("ModelVector: non-finite entry at index " +
                              std::to_string(i));
    }
  }
}

void CheckSameDim(const ModelVector& a, const ModelVector& b,
                  const char* context) {
  if (a.dim() != b.dim()) {
    throw PreconditionError(std::string(context) + ": dimension mismatch (" +
                            std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()) + ")");
  }
}

double L2Norm(const ModelVector& v) {
  double sum = 0.0;
  for (double x : v.values()) sum += x * x;
  return std::sqrt(sum);
}

double L1Norm(const ModelVector& v) {
  double sum = 0.0;
  for (double x : v.values()) sum += std::abs(x);
  return sum;
}

double SquaredL2Distance(const ModelVector& a, const ModelVector& b) {
  CheckSameDim(a, b, "SquaredL2Distance");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

ModelVector Axpy(double a, const ModelVector& x, const ModelVector& y) {
  CheckSameDim(x, y, "Axpy");
  ModelVector out(y);
  auto dst = out.mutable_values();
  for (std::size_t i = 0; i < x.dim(); ++i) dst[i] += a * x[i];
  out.CheckFinite();
  return out;
}

}  // namespace probit
