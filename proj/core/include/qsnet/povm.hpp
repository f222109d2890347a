// Copyright 2026 The qsnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qsnet/tensor.hpp"

namespace qsnet {

/// One POVM effect. Large registers make dense dim x dim storage
/// impractical, so an element is kept in whichever form it was built in:
///
///   kFactored   Pi = F F^dagger        (F is dim x r)
///   kDense      Pi = M
///   kResidual   Pi = I - W W^dagger    (the complement of a set of factors)
class PovmElement {
 public:
  enum class Form { kFactored, kDense, kResidual };

  static PovmElement factored(Matrix factor);
  static PovmElement rank_one(const Vector& v, double weight = 1.0);
  static PovmElement dense(DenseOperator op);
  static PovmElement residual(Matrix stacked);

  Form form() const { return form_; }
  std::size_t dim() const { return static_cast<std::size_t>(data_.rows()); }
  const Matrix& data() const { return data_; }

  /// <psi|Pi|psi>.
  double expectation(const Vector& psi) const;
  Matrix to_dense() const;
  /// Exact for factored/residual forms via the small r x r Gram matrix.
  double min_eigenvalue() const;
  /// Pi -> s Pi. A residual element is materialized first.
  PovmElement scaled(double s) const;

 private:
  PovmElement(Form form, Matrix data) : form_(form), data_(std::move(data)) {}

  Form form_;
  Matrix data_;
};

class Povm {
 public:
  Povm(std::vector<PovmElement> elements, std::optional<std::size_t> failure_index = std::nullopt);

  std::size_t size() const { return elements_.size(); }
  std::size_t dim() const { return elements_.front().dim(); }
  const PovmElement& operator[](std::size_t i) const { return elements_.at(i); }
  const std::vector<PovmElement>& elements() const { return elements_; }
  std::optional<std::size_t> failure_index() const { return failure_index_; }

  /// Copy with element `i` multiplied by `s` (fault injection in tests).
  Povm with_scaled_element(std::size_t i, double s) const;

  /// Largest entry of |sum_i Pi_i - I|. Above `kDenseCompletenessCap` the
  /// Frobenius norm is returned instead (an upper bound on the max entry),
  /// computed from factor Gram matrices.
  double completeness_error() const;

  static constexpr std::size_t kDenseCompletenessCap = 1024;

 private:
  std::vector<PovmElement> elements_;
  std::optional<std::size_t> failure_index_;
};

/// Stacks the factors of `elements` and appends the complement I - sum.
/// Every element must be factored.
Povm complete_with_residual(std::vector<PovmElement> elements, bool complement_is_failure);

}  // namespace qsnet
