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

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsilab/f2linalg.hpp"
#include "qsilab/random.hpp"

namespace qsilab::qsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using f2::BitVector;

inline constexpr std::size_t kDefaultQubitCap = 24;
inline constexpr double kUnitaryTolerance = 1e-10;

class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Pure state on `num_qubits` qubits. Qubit 0 is the least significant bit
/// of the amplitude index.
class StateVector {
 public:
  /// |0...0> on `num_qubits` qubits.
  explicit StateVector(std::size_t num_qubits = 0,
                       std::size_t cap = kDefaultQubitCap);

  /// Computational basis state with qubit i set to bits[i].
  static StateVector basis(const BitVector& bits, std::size_t cap = kDefaultQubitCap);
  /// Takes ownership of `amps`; the length must be a power of two and the
  /// norm must be 1 within tolerance.
  static StateVector from_amplitudes(std::vector<Complex> amps,
                                     std::size_t cap = kDefaultQubitCap);
  /// Haar-random pure state.
  static StateVector random(std::size_t num_qubits, Rng& rng,
                            std::size_t cap = kDefaultQubitCap);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::size_t cap() const { return cap_; }

  std::span<const Complex> amplitudes() const { return amps_; }
  Complex amplitude(std::size_t index) const { return amps_[index]; }
  Eigen::Map<const Eigen::VectorXcd> as_eigen() const {
    return {amps_.data(), static_cast<Eigen::Index>(amps_.size())};
  }

  double norm() const;

  /// Appends `other`'s qubits above the existing ones.
  void append(const StateVector& other);
  /// Appends `count` fresh |0> qubits; returns the index of the first.
  std::size_t append_zeros(std::size_t count);

  // Unchecked primitives used by the operations below. `amps_mut` exposes
  // the buffer for routines that maintain the norm themselves.
  std::vector<Complex>& amps_mut() { return amps_; }
  void renormalize();

 private:
  std::size_t num_qubits_ = 0;
  std::size_t cap_ = kDefaultQubitCap;
  std::vector<Complex> amps_;
};

Complex inner(const StateVector& a, const StateVector& b);
/// `low` occupies the low qubits of the result.
StateVector tensor(const StateVector& low, const StateVector& high);

bool is_unitary(const Matrix& u, double tol = kUnitaryTolerance);

/// Applies U to `targets`; targets[j] is bit j of U's row/column index.
/// Throws std::invalid_argument if U is not unitary within 1e-10 or the
/// dimensions disagree, and std::out_of_range for a bad target.
void apply_unitary(StateVector& state, const Matrix& u,
                   std::span<const std::size_t> targets);
/// Same layout as apply_unitary but accepts any square matrix and does not
/// renormalize.
void apply_matrix(StateVector& state, const Matrix& m,
                  std::span<const std::size_t> targets);

struct Measurement {
  BitVector outcome;        // outcome[i] is the value of qubits[i]
  double probability = 0;   // Born probability of this outcome
};

/// Projective computational-basis measurement, in place.
Measurement measure(StateVector& state, std::span<const std::size_t> qubits, Rng& rng);

/// Value-returning form: (outcome, normalized post-measurement state).
std::pair<BitVector, StateVector> measure_computational(
    StateVector state, std::span<const std::size_t> qubits, Rng& rng);

/// Reduced density matrix on `keep`; keep[j] is bit j of the row index.
Matrix reduced_density_matrix(const StateVector& state,
                              std::span<const std::size_t> keep);

/// Haar-random unitary of the given dimension (QR of a Ginibre matrix).
Matrix haar_unitary(std::size_t dim, Rng& rng);

namespace gates {
Matrix I();
Matrix X();
Matrix Y();
Matrix Z();
Matrix H();
Matrix S();
/// Control on local qubit 0, target on local qubit 1.
Matrix CNOT();
/// Kronecker product with `high` on the high bits of the index.
Matrix kron(const Matrix& high, const Matrix& low);
}  // namespace gates

}  // namespace qsilab::qsim
