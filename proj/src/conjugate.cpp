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


#include "qsilab/conjugate.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace qsilab::conj {

namespace {

void hadamard_layer(StateVector& state, std::span<const std::size_t> qubits,
                    const BitVector& theta) {
  static const qsim::Matrix h = qsim::gates::H();
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (theta.get(i)) {
      const std::size_t q = qubits[i];
      qsim::apply_unitary(state, h, std::span<const std::size_t>(&q, 1));
    }
  }
}

}  // namespace

StateVector encode_bb84(const BitVector& x, const BitVector& theta) {
  if (x.size() != theta.size()) {
    throw f2::DimensionError("encode_bb84: x and theta lengths differ");
  }
  const std::size_t n = x.size();
  if (n > qsim::kDefaultQubitCap) throw qsim::CapacityError("encode_bb84: too many qubits");
  // Amplitude of basis index k is the product of per-qubit amplitudes.
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<qsim::Complex> amps(std::size_t{1} << n, qsim::Complex(1.0, 0.0));
  for (std::size_t k = 0; k < amps.size(); ++k) {
    double a = 1.0;
    for (std::size_t q = 0; q < n && a != 0.0; ++q) {
      const bool bit = (k >> q) & 1U;
      if (theta.get(q)) {
        a *= (bit && x.get(q)) ? -r : r;
      } else if (bit != x.get(q)) {
        a = 0.0;
      }
    }
    amps[k] = a;
  }
  return StateVector::from_amplitudes(std::move(amps));
}

BitVector decode_bb84_in_place(StateVector& state, std::span<const std::size_t> qubits,
                               const BitVector& theta, Rng& rng) {
  if (theta.size() != qubits.size()) {
    throw f2::DimensionError("decode_bb84: theta length must match the qubit count");
  }
  hadamard_layer(state, qubits, theta);
  auto m = qsim::measure(state, qubits, rng);
  hadamard_layer(state, qubits, theta);
  return std::move(m.outcome);
}

std::pair<BitVector, StateVector> decode_bb84(StateVector state, const BitVector& theta,
                                              Rng& rng) {
  std::vector<std::size_t> all(state.num_qubits());
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto x = decode_bb84_in_place(state, all, theta, rng);
  return {std::move(x), std::move(state)};
}

}  // namespace qsilab::conj
