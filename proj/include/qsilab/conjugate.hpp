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

#include <span>
#include <utility>

#include "qsilab/qsim/statevector.hpp"

namespace qsilab::conj {

using f2::BitVector;
using qsim::StateVector;

/// H^theta |x>, built directly as a product state.
StateVector encode_bb84(const BitVector& x, const BitVector& theta);

/// Applies H^theta to `qubits`, measures them and applies H^theta again.
/// outcome[i] is the bit read from qubits[i].
BitVector decode_bb84_in_place(StateVector& state, std::span<const std::size_t> qubits,
                               const BitVector& theta, Rng& rng);

/// Value form over all qubits of `state`.
std::pair<BitVector, StateVector> decode_bb84(StateVector state, const BitVector& theta,
                                              Rng& rng);

}  // namespace qsilab::conj
