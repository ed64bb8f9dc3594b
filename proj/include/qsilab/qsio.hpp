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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "qsilab/qsim/clifford.hpp"
#include "qsilab/qsim/statevector.hpp"

namespace qsilab::qsio {

using f2::BitVector;
using qsim::Matrix;
using qsim::StateVector;

/// Result of one evaluation. An empty value is the refusal symbol.
/// `exact` marks outputs that occurred with probability 1.
struct Evaluation {
  std::optional<BitVector> value;
  bool exact = false;
};

/// Something that maps in_len input bits to out_len output bits, possibly
/// by running a circuit on an inner state that persists between calls.
class QuantumImplementation {
 public:
  virtual ~QuantumImplementation() = default;
  virtual std::size_t in_len() const = 0;
  virtual std::size_t out_len() const = 0;
  virtual Evaluation evaluate(const BitVector& x, Rng& rng) = 0;

 protected:
  void check_input(const BitVector& x) const;
};

/// A deterministic classical function (a basis-state implementation).
class ClassicalImplementation final : public QuantumImplementation {
 public:
  using Function = std::function<std::optional<BitVector>(const BitVector&)>;
  ClassicalImplementation(std::size_t in_len, std::size_t out_len, Function f);

  std::size_t in_len() const override { return in_len_; }
  std::size_t out_len() const override { return out_len_; }
  Evaluation evaluate(const BitVector& x, Rng& rng) override;

 private:
  std::size_t in_len_;
  std::size_t out_len_;
  Function f_;
};

/// Explicit (state, Eval) pair. Eval acts on [state | X | Y] with the state
/// register on the low qubits, then X (in_len), then Y (out_len).
/// Evaluation appends |x>|0>, applies Eval, measures Y and keeps the state
/// block that remains.
class DenseImplementation : public QuantumImplementation {
 public:
  DenseImplementation(StateVector state, Matrix eval, std::size_t in_len, std::size_t out_len);

  std::size_t in_len() const override { return in_len_; }
  std::size_t out_len() const override { return out_len_; }
  Evaluation evaluate(const BitVector& x, Rng& rng) override;

  const StateVector& state() const { return state_; }
  const Matrix& eval() const { return eval_; }
  std::size_t state_qubits() const { return state_.num_qubits(); }

 protected:
  StateVector state_;
  Matrix eval_;
  std::size_t in_len_;
  std::size_t out_len_;
};

/// Truth table held in qubits: register t has 2^in_len * out_len qubits
/// in the basis state of the table, and Eval is Y ^= t[x].
/// `table[x]` has out_len bits. in_len + table qubits must stay small.
DenseImplementation make_truth_table_implementation(const std::vector<BitVector>& table,
                                                    std::size_t in_len);

/// Opaque handle: evaluation is the only exposed capability.
class OpaqueProgram final {
 public:
  OpaqueProgram(const OpaqueProgram&) = delete;
  OpaqueProgram& operator=(const OpaqueProgram&) = delete;

  std::size_t in_len() const { return inner_->in_len(); }
  std::size_t out_len() const { return inner_->out_len(); }
  std::optional<BitVector> evaluate(const BitVector& x, Rng& rng) { return inner_->evaluate(x, rng).value; }
  Evaluation evaluate_detailed(const BitVector& x, Rng& rng) { return inner_->evaluate(x, rng); }
  std::uint64_t token() const { return token_; }

 private:
  friend std::shared_ptr<OpaqueProgram> wrap_opaque(std::unique_ptr<QuantumImplementation>);
  OpaqueProgram(std::unique_ptr<QuantumImplementation> inner, std::uint64_t token)
      : inner_(std::move(inner)), token_(token) {}

  std::unique_ptr<QuantumImplementation> inner_;
  std::uint64_t token_;
};

/// Ideal stand-in for the obfuscator. The token is a fresh identifier
/// unrelated to the wrapped implementation.
std::shared_ptr<OpaqueProgram> wrap_opaque(std::unique_ptr<QuantumImplementation> impl);

inline std::optional<BitVector> evaluate(QuantumImplementation& p, const BitVector& x, Rng& rng) {
  return p.evaluate(x, rng).value;
}
inline std::optional<BitVector> evaluate(OpaqueProgram& p, const BitVector& x, Rng& rng) {
  return p.evaluate(x, rng);
}

/// Clifford one-time pad of a dense implementation: the state padded with
/// |0^lambda> and conjugated by a uniform Clifford C on the padded
/// register, and the oracle G_C = C Eval C^dagger (C on the padded register,
/// identity on X and Y).
class CliffordOtpArtifact final : public QuantumImplementation {
 public:
  std::size_t in_len() const override { return in_len_; }
  std::size_t out_len() const override { return out_len_; }
  /// Applies G_C to the held state with |x>|0> appended and measures Y.
  Evaluation evaluate(const BitVector& x, Rng& rng) override;

  const StateVector& padded_state() const { return state_; }
  std::size_t padded_qubits() const { return state_.num_qubits(); }
  /// Dense G_C for audits.
  Matrix oracle_matrix() const;
  /// Dense Eval with identity on the pad qubits, same layout as the oracle.
  Matrix padded_eval() const;
  const Matrix& clifford_unitary() const { return u_c_; }

 private:
  friend CliffordOtpArtifact clifford_otp_obfuscate(const DenseImplementation&, std::size_t, Rng&);
  CliffordOtpArtifact() = default;

  StateVector state_;
  Matrix u_c_;
  Matrix eval_;
  std::size_t inner_qubits_ = 0;
  std::size_t in_len_ = 0;
  std::size_t out_len_ = 0;
};

/// Throws CapacityError when state qubits + lambda_pad exceeds the dense
/// Clifford limit.
CliffordOtpArtifact clifford_otp_obfuscate(const DenseImplementation& impl, std::size_t lambda_pad,
                                           Rng& rng);

/// Trace distance between the average padded state over `samples` fresh
/// obfuscations and the maximally mixed state.
double otp_mixing_distance(const DenseImplementation& impl, std::size_t lambda_pad,
                           std::size_t samples, Rng& rng);

struct EquivalenceReport {
  bool equal = true;
  std::optional<BitVector> witness;
};

inline constexpr std::size_t kEquivalenceSamples = 64;

/// Every input of the given length, in counting order.
std::vector<BitVector> full_domain(std::size_t in_len);

/// Compares outputs on every domain point. A point whose evaluations are
/// exact is compared once; otherwise each side is sampled 64 times and all
/// samples must agree on one value.
EquivalenceReport functional_equiv(QuantumImplementation& a, QuantumImplementation& b,
                                   const std::vector<BitVector>& domain, Rng& rng);

// Purified two-oracle comparison at toy size: B1 = one qubit holding |b>,
// B2 = one pad qubit, R = the output qubit, Z = one work qubit, and
// Eval = CNOT from B1 to R. The Clifford register ranges over all 11520
// two-qubit Cliffords. `adv_unitary` is 16 x 16 on (B1, B2, R, Z) with B1
// on bit 0.

/// || (G'U)^q |Psi_0>|00> - (GU)^q |Psi_0>|00> ||.
double purified_hybrid_gap(std::size_t q, const Matrix& adv_unitary, bool b);

/// Squared norm of the non-identity Pauli branch of W^dagger U |Psi_0>|00>
/// projected onto |0> in B2.
double pauli_branch_weight(const Matrix& adv_unitary, bool b);

}  // namespace qsilab::qsio
