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

#include "qsnet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qsnet {

namespace {

double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": operator must be square and non-empty");
  }
}

}  // namespace

Ket::Ket(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) {
    throw std::invalid_argument("Ket: empty amplitude vector");
  }
  const double n = amplitudes_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("Ket: amplitude vector has zero or non-finite norm");
  }
  amplitudes_ /= n;
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) {
    throw std::out_of_range("Ket::basis: index out of range");
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return Ket(std::move(v));
}

Complex Ket::inner(const Ket& other) const {
  if (other.dim() != dim()) {
    throw std::invalid_argument("Ket::inner: dimension mismatch");
  }
  return amplitudes_.dot(other.amplitudes_);  // Eigen's dot conjugates the left operand
}

bool is_hermitian(const Matrix& a, double tol) {
  return a.rows() == a.cols() && max_abs_entry(a - a.adjoint()) <= tol;
}

bool is_unitary(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  return max_abs_entry(a.adjoint() * a - id) <= tol;
}

bool is_positive(const Matrix& a, double tol) {
  if (!is_hermitian(a, tolerance::kStructural)) return false;
  Matrix shifted = a;
  shifted.diagonal().array() += tol;
  Eigen::LLT<Matrix> llt(shifted);
  return llt.info() == Eigen::Success;
}

DenseOperator::DenseOperator(Matrix entries, OperatorFlag flags)
    : entries_(std::move(entries)), flags_(flags) {
  require_square(entries_, "DenseOperator");
  if (has_flag(flags_, OperatorFlag::kPositive)) {
    flags_ = flags_ | OperatorFlag::kHermitian;
  }
  if (hermitian() && !is_hermitian(entries_)) {
    throw std::invalid_argument("DenseOperator: flagged hermitian but A != A^dagger");
  }
  if (unitary() && !is_unitary(entries_)) {
    throw std::invalid_argument("DenseOperator: flagged unitary but A^dagger A != I");
  }
  if (positive() && !is_positive(entries_)) {
    throw std::invalid_argument("DenseOperator: flagged positive but has eigenvalue below -1e-10");
  }
}

DenseOperator DenseOperator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DenseOperator(Matrix::Identity(n, n),
                       OperatorFlag::kHermitian | OperatorFlag::kUnitary | OperatorFlag::kPositive);
}

DenseOperator DenseOperator::outer(const Vector& v) {
  Matrix m = v * v.adjoint();
  // Exact hermiticity: rounding in the product can leave 1 ulp asymmetry.
  m = (0.5 * (m + m.adjoint())).eval();
  return DenseOperator(std::move(m), OperatorFlag::kHermitian);
}

Ket EigenDecomposition::eigenvector(std::size_t i) const {
  return Ket(eigenvectors.col(static_cast<Eigen::Index>(i)));
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  const Eigen::Index bn = y.rows();
  Matrix out(x.rows() * bn, x.cols() * bn);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * bn, j * bn, bn, bn) = x(i, j) * y;
    }
  }
  OperatorFlag flags = OperatorFlag::kNone;
  if (a.hermitian() && b.hermitian()) flags = flags | OperatorFlag::kHermitian;
  if (a.unitary() && b.unitary()) flags = flags | OperatorFlag::kUnitary;
  if (flags == OperatorFlag::kNone) {
    return DenseOperator(std::move(out));
  }
  // Products of flagged factors satisfy the flags up to rounding; symmetrize
  // only when hermitian so the check at 1e-12 cannot trip on accumulation.
  if (has_flag(flags, OperatorFlag::kHermitian)) {
    out = (0.5 * (out + out.adjoint())).eval();
  }
  return DenseOperator(std::move(out), flags);
}

int qubit_count(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

Vector apply_site_operator(const Vector& state, const Matrix& u, int site, int n_sites) {
  if (u.rows() != 2 || u.cols() != 2) {
    throw std::invalid_argument("apply_site_operator: single-qubit operator must be 2x2");
  }
  if (n_sites < 1 || n_sites > 62) {
    throw std::invalid_argument("apply_site_operator: invalid register size");
  }
  if (static_cast<std::uint64_t>(state.size()) != (std::uint64_t{1} << n_sites)) {
    throw std::invalid_argument("apply_site_operator: state dimension is not 2^n_sites");
  }
  if (site < 1 || site > n_sites) {
    throw std::out_of_range("apply_site_operator: site " + std::to_string(site) +
                            " outside 1.." + std::to_string(n_sites));
  }
  // Site 1 is the most significant bit.
  const Eigen::Index stride = Eigen::Index{1} << (n_sites - site);
  const Eigen::Index block = stride * 2;
  Vector out(state.size());
  const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  for (Eigen::Index base = 0; base < state.size(); base += block) {
    for (Eigen::Index off = 0; off < stride; ++off) {
      const Eigen::Index i0 = base + off;
      const Eigen::Index i1 = i0 + stride;
      const Complex a0 = state(i0);
      const Complex a1 = state(i1);
      out(i0) = u00 * a0 + u01 * a1;
      out(i1) = u10 * a0 + u11 * a1;
    }
  }
  return out;
}

Ket apply_site_unitary(const Ket& state, const DenseOperator& u, int site, int n_sites) {
  if (!u.unitary()) {
    throw std::invalid_argument("apply_site_unitary: operator must be flagged unitary");
  }
  return Ket(apply_site_operator(state.amplitudes(), u.matrix(), site, n_sites));
}

DenseOperator site_operator(const DenseOperator& u, int site, int n_sites) {
  if (u.dim() != 2) {
    throw std::invalid_argument("site_operator: single-qubit operator must be 2x2");
  }
  if (site < 1 || site > n_sites) {
    throw std::out_of_range("site_operator: site out of range");
  }
  const DenseOperator id2 = DenseOperator::identity(2);
  DenseOperator acc = site == 1 ? u : id2;
  for (int s = 2; s <= n_sites; ++s) {
    acc = kron(acc, s == site ? u : id2);
  }
  return acc;
}

namespace {

void require_hermitian(const DenseOperator& a, const char* what) {
  if (!a.hermitian()) {
    throw std::invalid_argument(std::string(what) + ": operator must be flagged hermitian");
  }
}

}  // namespace

EigenDecomposition hermitian_eig(const DenseOperator& a) {
  require_hermitian(a, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  const Eigen::Index n = a.matrix().rows();
  EigenDecomposition out;
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  out.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues[static_cast<std::size_t>(i)] = solver.eigenvalues()(n - 1 - i);
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const DenseOperator& a) {
  require_hermitian(a, "hermitian_eigenvalues");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigenvalues: eigensolver did not converge");
  }
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  std::reverse(values.begin(), values.end());
  return values;
}

double trace_norm(const DenseOperator& a) {
  require_hermitian(a, "trace_norm");
  double total = 0.0;
  for (double v : hermitian_eigenvalues(a)) total += std::abs(v);
  return total;
}

DenseOperator inv_sqrt_on_support(const DenseOperator& rho, double tol) {
  require_hermitian(rho, "inv_sqrt_on_support");
  const EigenDecomposition eig = hermitian_eig(rho);
  const auto n = static_cast<Eigen::Index>(eig.eigenvalues.size());
  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = eig.eigenvalues[static_cast<std::size_t>(i)];
    if (lambda < -tol) {
      throw std::domain_error("inv_sqrt_on_support: eigenvalue " + std::to_string(lambda) +
                              " below -tol; operator is not positive");
    }
    scale(i) = lambda >= tol ? 1.0 / std::sqrt(lambda) : 0.0;
  }
  Matrix out = eig.eigenvectors * scale.asDiagonal() * eig.eigenvectors.adjoint();
  out = (0.5 * (out + out.adjoint())).eval();
  return DenseOperator(std::move(out), OperatorFlag::kHermitian);
}

DenseOperator sqrt_positive(const DenseOperator& rho, double tol) {
  require_hermitian(rho, "sqrt_positive");
  const EigenDecomposition eig = hermitian_eig(rho);
  const auto n = static_cast<Eigen::Index>(eig.eigenvalues.size());
  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = eig.eigenvalues[static_cast<std::size_t>(i)];
    if (lambda < -tol) {
      throw std::domain_error("sqrt_positive: operator is not positive");
    }
    // Same support cut as inv_sqrt_on_support; sqrt would amplify rounding
    // noise on a numerically zero eigenvalue to ~1e-8.
    scale(i) = lambda > tol ? std::sqrt(lambda) : 0.0;
  }
  Matrix out = eig.eigenvectors * scale.asDiagonal() * eig.eigenvectors.adjoint();
  out = (0.5 * (out + out.adjoint())).eval();
  return DenseOperator(std::move(out), OperatorFlag::kHermitian);
}

DenseOperator gram(std::span<const Ket> states) {
  if (states.empty()) {
    throw std::invalid_argument("gram: empty state list");
  }
  const std::size_t dim = states.front().dim();
  const auto m = static_cast<Eigen::Index>(states.size());
  Matrix stacked(static_cast<Eigen::Index>(dim), m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Ket& s = states[static_cast<std::size_t>(j)];
    if (s.dim() != dim) {
      throw std::invalid_argument("gram: states have different dimensions");
    }
    stacked.col(j) = s.amplitudes();
  }
  Matrix g = stacked.adjoint() * stacked;
  g = (0.5 * (g + g.adjoint())).eval();
  return DenseOperator(std::move(g), OperatorFlag::kPositive);
}

}  // namespace qsnet
