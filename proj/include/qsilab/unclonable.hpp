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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qsilab/crypto.hpp"
#include "qsilab/f2linalg.hpp"
#include "qsilab/qsim/statevector.hpp"

namespace qsilab::qsio {
class OpaqueProgram;
}

namespace qsilab::ue {

using f2::BitMatrix;
using f2::BitVector;
using qsim::StateVector;

enum class PadMode {
  Prg,     // pad = PRG_{rows, |m|}(Ux)
  Direct,  // pad = prefix of Ux; requires |m| <= rows
};

/// Dimensions of a UE or cUE instance. `lambda` is the key length, `qubits`
/// the length of x, `rows` the number of rows of U (and V).
struct SchemeParams {
  std::size_t lambda = 0;
  std::size_t qubits = 0;
  std::size_t rows = 0;
  PadMode pad = PadMode::Prg;

  /// lambda' = lambda_prime(lambda, UE); qubits = 11 lambda', rows = lambda'.
  static SchemeParams paper_ue(std::size_t lambda);
  /// lambda' = lambda_prime(lambda, CUE).
  static SchemeParams paper_cue(std::size_t lambda);
  /// Reduced sizes with the smallest key that fits (theta, U).
  static SchemeParams toy_ue(std::size_t qubits, std::size_t rows, PadMode pad);
  static SchemeParams toy_cue(std::size_t qubits, std::size_t rows, PadMode pad);

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Key layout: theta first, then the matrix row-major; leftover bits are
/// discarded.
struct KeyParse {
  BitVector theta;
  BitMatrix matrix;
  std::size_t discarded = 0;
};

KeyParse parse_ue_key(const SchemeParams& p, const BitVector& sk);
/// theta has qubits + 1 bits for cUE.
KeyParse parse_cue_key(const SchemeParams& p, const BitVector& sk);

/// PRG or direct pad from seed Ux.
BitVector pad_stream(const SchemeParams& p, const BitVector& seed, std::size_t len);

struct UeCiphertext {
  StateVector state;
  BitVector pad;
  SchemeParams params;
};

struct CueCiphertext {
  StateVector state;
  BitMatrix t;
  BitVector pad_a;
  BitVector pad_b;
  SchemeParams params;
};

UeCiphertext ue_encrypt(const SchemeParams& p, const BitVector& sk, const BitVector& m, Rng& rng);
/// Measures in the key's bases and re-applies them; honest ciphertexts are
/// left unchanged.
BitVector ue_decrypt(const BitVector& sk, UeCiphertext& ct, Rng& rng);
/// Same on ciphertext qubits living inside a larger state.
BitVector ue_decrypt_in_place(const SchemeParams& p, const BitVector& sk, StateVector& state,
                              std::span<const std::size_t> qubits, const BitVector& pad, Rng& rng);

CueCiphertext cue_encrypt(const SchemeParams& p, const BitVector& sk_a, const BitVector& sk_b,
                          const BitVector& m_a, const BitVector& m_b, Rng& rng);
/// slot 0 reads pad_a with the A key, slot 1 pad_b with the B key.
BitVector cue_decrypt(int slot, const BitVector& sk, CueCiphertext& ct, Rng& rng);
BitVector cue_decrypt_in_place(const SchemeParams& p, const BitVector& sk, const BitMatrix& t,
                               StateVector& state, std::span<const std::size_t> qubits,
                               const BitVector& pad, Rng& rng);

/// Challenger bundle of the unclonable-randomness game: x, theta of length
/// 10n + lambda, U and V of size n x (10n + lambda), r1 = Ux, s1 = Vx.
struct RandomnessSample {
  StateVector state;
  BitVector x;
  BitVector theta;
  BitMatrix u;
  BitMatrix v;
  BitVector r1;
  BitVector s1;
};

RandomnessSample unclonable_randomness_sample(std::size_t n, std::size_t lambda, Rng& rng);

// Key testing -------------------------------------------------------------

/// UE with key testing. Outer keys s have key_len bits; each ciphertext
/// carries a fresh A (inner lambda x key_len), is encrypted under As, and
/// holds an opaque indicator of s.
struct KeyTestedUeCiphertext {
  BitMatrix a;
  UeCiphertext inner;
  std::shared_ptr<qsio::OpaqueProgram> indicator;
};

struct KeyTestedCueCiphertext {
  BitMatrix a;
  CueCiphertext inner;
  std::shared_ptr<qsio::OpaqueProgram> indicator_a;
  std::shared_ptr<qsio::OpaqueProgram> indicator_b;
};

class KeyTestedUe {
 public:
  KeyTestedUe(SchemeParams inner, std::size_t key_len);
  const SchemeParams& inner() const { return inner_; }
  std::size_t key_len() const { return key_len_; }

  KeyTestedUeCiphertext encrypt(const BitVector& s, const BitVector& m, Rng& rng) const;
  bool test(const BitVector& s, KeyTestedUeCiphertext& ct, Rng& rng) const;
  BitVector decrypt(const BitVector& s, KeyTestedUeCiphertext& ct, Rng& rng) const;

 private:
  SchemeParams inner_;
  std::size_t key_len_;
};

class KeyTestedCue {
 public:
  KeyTestedCue(SchemeParams inner, std::size_t key_len);
  const SchemeParams& inner() const { return inner_; }
  std::size_t key_len() const { return key_len_; }

  KeyTestedCueCiphertext encrypt(const BitVector& s_a, const BitVector& s_b, const BitVector& m_a,
                                 const BitVector& m_b, Rng& rng) const;
  /// 0 for the A key, 1 for the B key, nothing otherwise. A key equal to
  /// both resolves to 0.
  std::optional<int> test(const BitVector& s, KeyTestedCueCiphertext& ct, Rng& rng) const;
  BitVector decrypt(int slot, const BitVector& s, KeyTestedCueCiphertext& ct, Rng& rng) const;

 private:
  SchemeParams inner_;
  std::size_t key_len_;
};

/// Outer key length defaults to three times the inner one.
KeyTestedUe compile_key_testing(const SchemeParams& ue_params,
                                std::optional<std::size_t> key_len = std::nullopt);
KeyTestedCue compile_key_testing_cue(const SchemeParams& cue_params,
                                     std::optional<std::size_t> key_len = std::nullopt);

// Classical byte layout ------------------------------------------------------

/// Classical parts of a ciphertext. Layout in docs/ciphertext_layout.md.
struct ClassicalParts {
  std::optional<BitMatrix> t;
  std::optional<BitMatrix> a;
  std::vector<BitVector> pads;
  friend bool operator==(const ClassicalParts&, const ClassicalParts&) = default;
};

std::vector<std::uint8_t> serialize_classical(const ClassicalParts& parts);
/// Throws std::invalid_argument on malformed input.
ClassicalParts parse_classical(std::span<const std::uint8_t> bytes);

ClassicalParts classical_parts(const UeCiphertext& ct);
ClassicalParts classical_parts(const CueCiphertext& ct);
ClassicalParts classical_parts(const KeyTestedUeCiphertext& ct);
ClassicalParts classical_parts(const KeyTestedCueCiphertext& ct);

}  // namespace qsilab::ue
