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

// Dense complex linear algebra used throughout qsnet: normalized kets,
// flagged dense operators, Kronecker products, site-local operator
// application on qubit registers, and spectral functions of Hermitian
// operators.
//
// Conventions:
//   * Each qubit's computational basis is the eigenbasis {|u+>, |u->} of the
//     phase unitary; bit value 0 is |u+>, bit value 1 is |u->.
//   * Site 1 is the most significant tensor factor.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qsnet {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

namespace tolerance {
inline constexpr double kNorm = 1e-12;
inline constexpr double kStructural = 1e-12;
inline constexpr double kSpectral = 1e-10;
inline constexpr double kPositivity = 1e-10;
}  // namespace tolerance

// Largest register size the dense routines accept (2^14 amplitudes).
inline constexpr int kMaxQubits = 14;

/// Normalized complex amplitude vector.
class Ket {
 public:
  /// Normalizes `amplitudes`; throws std::invalid_argument on an empty or
  /// zero vector.
  explicit Ket(Vector amplitudes);

  static Ket basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

  /// <this|other>
  Complex inner(const Ket& other) const;

 private:
  Vector amplitudes_;
};

enum class OperatorFlag : std::uint8_t {
  kNone = 0,
  kHermitian = 1u << 0,
  kUnitary = 1u << 1,
  kPositive = 1u << 2,
};

constexpr OperatorFlag operator|(OperatorFlag a, OperatorFlag b) {
  return static_cast<OperatorFlag>(static_cast<std::uint8_t>(a) | static_cast<std::uint8_t>(b));
}
constexpr OperatorFlag operator&(OperatorFlag a, OperatorFlag b) {
  return static_cast<OperatorFlag>(static_cast<std::uint8_t>(a) & static_cast<std::uint8_t>(b));
}
constexpr bool has_flag(OperatorFlag set, OperatorFlag f) { return (set & f) == f; }

/// Square complex matrix with optional structural flags. Flags are
/// assertions: the constructor verifies each one and throws
/// std::invalid_argument if the entries do not satisfy it.
class DenseOperator {
 public:
  explicit DenseOperator(Matrix entries, OperatorFlag flags = OperatorFlag::kNone);

  static DenseOperator identity(std::size_t dim);
  /// |v><v| for an arbitrary (not necessarily normalized) vector.
  static DenseOperator outer(const Vector& v);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  OperatorFlag flags() const { return flags_; }
  bool hermitian() const { return has_flag(flags_, OperatorFlag::kHermitian); }
  bool unitary() const { return has_flag(flags_, OperatorFlag::kUnitary); }
  bool positive() const { return has_flag(flags_, OperatorFlag::kPositive); }

 private:
  Matrix entries_;
  OperatorFlag flags_;
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // column i pairs with eigenvalues[i]

  Ket eigenvector(std::size_t i) const;
};

// Structural predicates at tolerance::kStructural (max-entry norm).
bool is_hermitian(const Matrix& a, double tol = tolerance::kStructural);
bool is_unitary(const Matrix& a, double tol = tolerance::kStructural);
/// Minimum eigenvalue >= -tol, certified by a Cholesky factorization.
bool is_positive(const Matrix& a, double tol = tolerance::kPositivity);

DenseOperator kron(const DenseOperator& a, const DenseOperator& b);

/// Applies `u` (2x2) to qubit `site` (1-based) of an `n_sites` register
/// without forming the 2^n x 2^n operator.
Vector apply_site_operator(const Vector& state, const Matrix& u, int site, int n_sites);

/// F_site |state>; `u` must be flagged unitary.
Ket apply_site_unitary(const Ket& state, const DenseOperator& u, int site, int n_sites);

/// Full 2^n x 2^n matrix of I^{(site-1)} (x) u (x) I^{(n-site)}. Test/oracle use.
DenseOperator site_operator(const DenseOperator& u, int site, int n_sites);

EigenDecomposition hermitian_eig(const DenseOperator& a);
std::vector<double> hermitian_eigenvalues(const DenseOperator& a);

double trace_norm(const DenseOperator& a);

/// Pseudo-inverse square root: eigenvalues >= tol map to lambda^{-1/2}, the
/// rest to zero. Throws std::domain_error if an eigenvalue is below -tol.
DenseOperator inv_sqrt_on_support(const DenseOperator& rho, double tol = tolerance::kSpectral);

/// Principal square root of a positive operator. Eigenvalues in [-tol, tol]
/// are treated as zero.
DenseOperator sqrt_positive(const DenseOperator& rho, double tol = tolerance::kSpectral);

/// G_jk = <states_j|states_k>.
DenseOperator gram(std::span<const Ket> states);

/// Number of qubits n with 2^n == dim; throws if dim is not a power of two.
int qubit_count(std::size_t dim);

}  // namespace qsnet
