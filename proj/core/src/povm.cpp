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

#include "qsnet/povm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qsnet {

PovmElement PovmElement::factored(Matrix factor) {
  if (factor.rows() == 0) throw std::invalid_argument("PovmElement: empty factor");
  return PovmElement(Form::kFactored, std::move(factor));
}

PovmElement PovmElement::rank_one(const Vector& v, double weight) {
  if (weight < 0.0) throw std::invalid_argument("PovmElement: negative weight");
  return factored(Matrix(std::sqrt(weight) * v));
}

PovmElement PovmElement::dense(DenseOperator op) {
  if (!op.hermitian()) throw std::invalid_argument("PovmElement: dense element must be hermitian");
  return PovmElement(Form::kDense, op.matrix());
}

PovmElement PovmElement::residual(Matrix stacked) {
  if (stacked.rows() == 0) throw std::invalid_argument("PovmElement: empty residual factor");
  return PovmElement(Form::kResidual, std::move(stacked));
}

double PovmElement::expectation(const Vector& psi) const {
  if (psi.size() != data_.rows()) {
    throw std::invalid_argument("PovmElement::expectation: dimension mismatch");
  }
  switch (form_) {
    case Form::kFactored:
      return (data_.adjoint() * psi).squaredNorm();
    case Form::kDense:
      return psi.dot(data_ * psi).real();
    case Form::kResidual:
      return psi.squaredNorm() - (data_.adjoint() * psi).squaredNorm();
  }
  return 0.0;
}

Matrix PovmElement::to_dense() const {
  switch (form_) {
    case Form::kFactored:
      return data_ * data_.adjoint();
    case Form::kDense:
      return data_;
    case Form::kResidual:
      return Matrix::Identity(data_.rows(), data_.rows()) - data_ * data_.adjoint();
  }
  return {};
}

double PovmElement::min_eigenvalue() const {
  const Eigen::Index n = data_.rows();
  switch (form_) {
    case Form::kFactored: {
      if (data_.cols() < n) return 0.0;  // rank-deficient PSD: smallest eigenvalue is exactly 0
      return hermitian_eigenvalues(DenseOperator(to_dense(), OperatorFlag::kHermitian)).back();
    }
    case Form::kDense: {
      Matrix m = (0.5 * (data_ + data_.adjoint())).eval();
      return hermitian_eigenvalues(DenseOperator(std::move(m), OperatorFlag::kHermitian)).back();
    }
    case Form::kResidual: {
      // eigenvalues of I - W W^dagger: {1 - sigma_i^2} plus 1 on the complement of range(W).
      if (data_.cols() == 0) return 1.0;
      Matrix g = data_.adjoint() * data_;
      g = (0.5 * (g + g.adjoint())).eval();
      const double top = hermitian_eigenvalues(DenseOperator(std::move(g), OperatorFlag::kHermitian)).front();
      return 1.0 - top;
    }
  }
  return 0.0;
}

PovmElement PovmElement::scaled(double s) const {
  switch (form_) {
    case Form::kFactored:
      if (s < 0.0) return PovmElement(Form::kDense, s * to_dense());
      return PovmElement(Form::kFactored, std::sqrt(s) * data_);
    case Form::kDense:
      return PovmElement(Form::kDense, s * data_);
    case Form::kResidual:
      return PovmElement(Form::kDense, s * to_dense());
  }
  return *this;
}

Povm::Povm(std::vector<PovmElement> elements, std::optional<std::size_t> failure_index)
    : elements_(std::move(elements)), failure_index_(failure_index) {
  if (elements_.empty()) throw std::invalid_argument("Povm: no elements");
  for (const PovmElement& e : elements_) {
    if (e.dim() != elements_.front().dim()) {
      throw std::invalid_argument("Povm: elements act on different dimensions");
    }
  }
  if (failure_index_ && *failure_index_ >= elements_.size()) {
    throw std::out_of_range("Povm: failure index out of range");
  }
}

Povm Povm::with_scaled_element(std::size_t i, double s) const {
  std::vector<PovmElement> copy = elements_;
  copy.at(i) = copy.at(i).scaled(s);
  return Povm(std::move(copy), failure_index_);
}

double Povm::completeness_error() const {
  const auto n = static_cast<Eigen::Index>(dim());
  if (dim() <= kDenseCompletenessCap) {
    Matrix sum = Matrix::Zero(n, n);
    for (const PovmElement& e : elements_) {
      switch (e.form()) {
        case PovmElement::Form::kFactored:
          sum.noalias() += e.data() * e.data().adjoint();
          break;
        case PovmElement::Form::kDense:
          sum += e.data();
          break;
        case PovmElement::Form::kResidual:
          sum.diagonal().array() += 1.0;
          sum.noalias() -= e.data() * e.data().adjoint();
          break;
      }
    }
    sum.diagonal().array() -= 1.0;
    return sum.cwiseAbs().maxCoeff();
  }
  // Large registers: sum = S S^dagger + (I - W W^dagger) with exactly one
  // residual, so sum - I = S S^dagger - W W^dagger and
  // ||.||_F^2 = ||S^dagger S||^2 - 2 ||S^dagger W||^2 + ||W^dagger W||^2.
  std::vector<const Matrix*> factors;
  const Matrix* residual = nullptr;
  for (const PovmElement& e : elements_) {
    if (e.form() == PovmElement::Form::kFactored) {
      factors.push_back(&e.data());
    } else if (e.form() == PovmElement::Form::kResidual && residual == nullptr) {
      residual = &e.data();
    } else {
      throw std::invalid_argument(
          "Povm::completeness_error: above the dense cap only factored elements plus one "
          "residual are supported");
    }
  }
  if (residual == nullptr) {
    throw std::invalid_argument("Povm::completeness_error: no residual element above the dense cap");
  }
  Eigen::Index cols = 0;
  for (const Matrix* f : factors) cols += f->cols();
  Matrix stacked(n, cols);
  Eigen::Index at = 0;
  for (const Matrix* f : factors) {
    stacked.middleCols(at, f->cols()) = *f;
    at += f->cols();
  }
  const double ss = (stacked.adjoint() * stacked).squaredNorm();
  const double sw = (stacked.adjoint() * *residual).squaredNorm();
  const double ww = (residual->adjoint() * *residual).squaredNorm();
  return std::sqrt(std::max(ss - 2.0 * sw + ww, 0.0));
}

Povm complete_with_residual(std::vector<PovmElement> elements, bool complement_is_failure) {
  if (elements.empty()) throw std::invalid_argument("complete_with_residual: no elements");
  const Eigen::Index n = elements.front().data().rows();
  Eigen::Index cols = 0;
  for (const PovmElement& e : elements) {
    if (e.form() != PovmElement::Form::kFactored) {
      throw std::invalid_argument("complete_with_residual: elements must be factored");
    }
    if (e.data().rows() != n) {
      throw std::invalid_argument("complete_with_residual: dimension mismatch");
    }
    cols += e.data().cols();
  }
  Matrix stacked(n, cols);
  Eigen::Index at = 0;
  for (const PovmElement& e : elements) {
    stacked.middleCols(at, e.data().cols()) = e.data();
    at += e.data().cols();
  }
  const std::size_t complement = elements.size();
  elements.push_back(PovmElement::residual(std::move(stacked)));
  return Povm(std::move(elements),
              complement_is_failure ? std::optional<std::size_t>(complement) : std::nullopt);
}

}  // namespace qsnet
