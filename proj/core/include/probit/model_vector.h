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

#ifndef PROBIT_MODEL_VECTOR_H_
#define PROBIT_MODEL_VECTOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace probit {

// Flat real-valued parameter or update vector. The dimension is fixed at
// construction and every entry is finite.
class ModelVector {
 public:
  ModelVector() = default;
  // Zero vector of dimension d.
  explicit ModelVector(std::size_t d) : values_(d, 0.0) {}
  // Throws PreconditionError if any entry is NaN or infinite.
  explicit ModelVector(std::vector<double> values);

  static ModelVector Filled(std::size_t d, double value);

  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  // Raw write access for hot loops. Callers must keep entries finite; call
  // CheckFinite() afterwards when the inputs are untrusted.
  std::span<double> mutable_values() { return values_; }
  void Set(std::size_t i, double value);

  void CheckFinite() const;

  friend bool operator==(const ModelVector&, const ModelVector&) = default;

 private:
  std::vector<double> values_;
};

// Euclidean norm, sequential left-to-right summation.
double L2Norm(const ModelVector& v);
double L1Norm(const ModelVector& v);
double SquaredL2Distance(const ModelVector& a, const ModelVector& b);

// Returns a*x + y. Throws PreconditionError on dimension mismatch.
ModelVector Axpy(double a, const ModelVector& x, const ModelVector& y);

void CheckSameDim(const ModelVector& a, const ModelVector& b,
                  const char* context);

}  // namespace probit

#endif  // PROBIT_MODEL_VECTOR_H_
