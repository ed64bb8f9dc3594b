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

#include <functional>
#include <span>
#include <vector>

#include "qsilab/f2linalg.hpp"
#include "qsilab/qsim/statevector.hpp"

namespace qsilab::gl {

using f2::BitMatrix;
using f2::BitVector;
using qsim::Matrix;
using qsim::StateVector;

/// Binary measurement: apply `unitary` to the party register, then read
/// local qubit `output` in the computational basis.
struct BinaryMeasurement {
  Matrix unitary;
  std::size_t output = 0;
};

/// Family u -> A^u over a fixed party register of `register_qubits` qubits.
class MeasurementFamily {
 public:
  using Realize = std::function<BinaryMeasurement(const BitVector&)>;

  MeasurementFamily(std::size_t index_len, std::size_t register_qubits, Realize realize);

  std::size_t index_len() const { return index_len_; }
  std::size_t register_qubits() const { return register_qubits_; }
  BinaryMeasurement realize(const BitVector& u) const;

  /// V^dagger Z_out V.
  Matrix phase_oracle(const BitVector& u) const;
  /// V^dagger |bit><bit|_out V.
  Matrix projector(const BitVector& u, bool bit) const;

 private:
  std::size_t index_len_;
  std::size_t register_qubits_;
  Realize realize_;
};

inline constexpr std::size_t kMaxGlIndexBits = 16;

/// Kraus operators M_w = E_u (-1)^{u.w} A_ph^u of the extraction circuit
/// after the control register is measured with outcome w.
std::vector<Matrix> gl_kraus(const MeasurementFamily& family);

/// Runs the extraction on `qubits` of `state` and returns w. The state is
/// left in the post-measurement state of the party register.
BitVector gl_extract(const MeasurementFamily& family, StateVector& state,
                     std::span<const std::size_t> qubits, Rng& rng);

/// Probability of each outcome w, indexed by w's integer value.
std::vector<double> gl_distribution(const MeasurementFamily& family, const StateVector& state,
                                    std::span<const std::size_t> qubits);

/// || (2 E_u Pi_A^{x,u} - I) (x) (2 E_v Pi_B^{x,v} - I) |psi> ||^2.
double gl_success_formula(const MeasurementFamily& fam_a, const MeasurementFamily& fam_b,
                          const StateVector& joint, const BitVector& x,
                          std::span<const std::size_t> qubits_a,
                          std::span<const std::size_t> qubits_b);

/// 2 E_u Pi^{x,u} - I for one family.
Matrix gl_bias_operator(const MeasurementFamily& family, const BitVector& x);

/// |M| of a Hermitian matrix through its spectral decomposition.
Matrix hermitian_abs(const Matrix& m);

/// Rows j < i uniform over {u : u.x = r_j}; the remaining rows uniform.
/// Throws std::invalid_argument for an infeasible row (x = 0, r_j = 1).
BitMatrix sample_Di(std::size_t i, const BitVector& x, const BitVector& r, std::size_t cols,
                    Rng& rng);

struct SimultInstance {
  StateVector psi;  // P acts on the low qubits, Q on the rest
  Matrix p;
  Matrix q;
};

struct SimultCheck {
  double premise = 0;     // E <(1+P)/2 (x) (1+Q)/2>
  double conclusion = 0;  // E <P (x) Q>
  bool premise_holds = false;
  bool conclusion_holds = false;
  /// True unless the premise holds and the conclusion fails.
  bool ok() const { return !premise_holds || conclusion_holds; }
};

/// Throws std::invalid_argument unless 0 <= P, Q <= 1.
SimultCheck simult_bound_check(const std::vector<SimultInstance>& instances, double eps);

}  // namespace qsilab::gl
