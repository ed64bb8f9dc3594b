// Copyright 2026 The qsilab Authors
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

#include <string>
#include <string_view>
#include <vector>

#include "qsilab/qsim/statevector.hpp"

namespace qsilab::qsim {

/// The operator i^phase * X^x * Z^z, with X^x = prod_q X_q^{x_q} placed to
/// the left of Z^z.
class PauliString {
 public:
  explicit PauliString(std::size_t n = 0);
  PauliString(BitVector x, BitVector z, unsigned phase = 0);

  /// Parses an optional sign prefix ("+", "-", "i", "-i") followed by one
  /// letter of I, X, Y, Z per qubit, qubit 0 first. Y means i*X*Z.
  static PauliString from_string(std::string_view text);

  std::size_t size() const { return x_.size(); }
  const BitVector& x() const { return x_; }
  const BitVector& z() const { return z_; }
  unsigned phase() const { return phase_; }

  bool is_identity_up_to_phase() const { return x_.is_zero() && z_.is_zero(); }
  bool is_hermitian() const;
  /// +1 or -1 relative to the Hermitian letter form; throws if not Hermitian.
  int sign() const;

  PauliString adjoint() const;
  bool commutes_with(const PauliString& other) const;

  /// Dense matrix, qubit 0 on the least significant index bit. n <= 12.
  Matrix to_matrix() const;
  /// Applies the operator to a state of the same qubit count.
  void apply_to(StateVector& state) const;

  std::string to_string() const;

  friend PauliString operator*(const PauliString& a, const PauliString& b);
  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  BitVector x_;
  BitVector z_;
  unsigned phase_ = 0;
};

/// Clifford element modulo global phase, stored as the Heisenberg images
/// C^dagger X_q C and C^dagger Z_q C.
class CliffordElement {
 public:
  explicit CliffordElement(std::size_t n = 0);

  /// Validates Hermiticity and the canonical commutation relations.
  static CliffordElement from_images(std::vector<PauliString> x_images,
                                     std::vector<PauliString> z_images);

  static CliffordElement hadamard(std::size_t n, std::size_t q);
  static CliffordElement phase(std::size_t n, std::size_t q);
  static CliffordElement cnot(std::size_t n, std::size_t control, std::size_t target);

  std::size_t num_qubits() const { return x_images_.size(); }
  const PauliString& x_image(std::size_t q) const { return x_images_[q]; }
  const PauliString& z_image(std::size_t q) const { return z_images_[q]; }

  /// C^dagger P C.
  PauliString conjugate(const PauliString& p) const;

  /// Canonical text of the tableau, for counting distinct elements.
  std::string key() const;

  friend bool operator==(const CliffordElement&, const CliffordElement&) = default;

 private:
  std::vector<PauliString> x_images_;
  std::vector<PauliString> z_images_;
};

/// Uniform over the n-qubit Clifford group modulo phase.
CliffordElement sample_clifford(std::size_t n, Rng& rng);

/// C^dagger P C.
PauliString clifford_conjugate_pauli(const CliffordElement& c, const PauliString& p);

/// "Conjugate by `first`, then by `second`": the element whose unitary is
/// U_first * U_second up to phase.
CliffordElement compose(const CliffordElement& first, const CliffordElement& second);

inline constexpr std::size_t kMaxDenseClifford = 6;

/// Dense unitary C with C^dagger P C equal to the tableau action; global
/// phase is unspecified. Throws CapacityError for n > 6.
Matrix clifford_to_unitary(const CliffordElement& c);

/// Every element of the n-qubit Clifford group modulo phase, n in {1, 2}.
/// The result is computed once per n and cached.
const std::vector<CliffordElement>& enumerate_cliffords(std::size_t n);

/// Sum over the Clifford group of C^dagger P2 C |psi><psi| C^dagger P1 C,
/// with P1 = X^{x1} Z^{z1} and P2 = X^{x2} Z^{z2}. n in {1, 2}.
Matrix twirl_sum(std::size_t n, const PauliString& p1, const PauliString& p2,
                 const StateVector& psi);

/// Symplectic form on the binary parts.
bool symplectic_product(const PauliString& a, const PauliString& b);

}  // namespace qsilab::qsim
