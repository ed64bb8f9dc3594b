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
#include <memory>
#include <optional>
#include <set>
#include <utility>

#include "qsilab/crypto.hpp"
#include "qsilab/qsio.hpp"
#include "qsilab/unclonable.hpp"

namespace qsilab::programs {

using f2::BitMatrix;
using f2::BitVector;

enum class Kind { Plain, Point, Patched, TildePatched, SearchPatched, PointCoset };

/// A classical circuit: in_len bits to out_len bits, or nothing for a
/// refusal (punctured points, malformed descriptions).
struct ClassicalFunction {
  std::size_t in_len = 0;
  std::size_t out_len = 0;
  std::function<std::optional<BitVector>(const BitVector&)> f;

  std::optional<BitVector> operator()(const BitVector& x) const { return f(x); }
};

ClassicalFunction ggm_function(const crypto::GgmKey& key);
/// Refuses at punctured points.
ClassicalFunction punctured_function(const crypto::PuncturedKey& key);

class ProgramDescriptor : public qsio::QuantumImplementation {
 public:
  virtual Kind kind() const = 0;
};

class PlainProgram final : public ProgramDescriptor {
 public:
  PlainProgram(ClassicalFunction f, Kind kind = Kind::Plain);
  Kind kind() const override { return kind_; }
  std::size_t in_len() const override { return f_.in_len; }
  std::size_t out_len() const override { return f_.out_len; }
  qsio::Evaluation evaluate(const BitVector& x, Rng& rng) override;
  const ClassicalFunction& function() const { return f_; }

 private:
  ClassicalFunction f_;
  Kind kind_;
};

std::unique_ptr<PlainProgram> make_plain(ClassicalFunction f);
/// delta_S with a one-bit output.
std::unique_ptr<PlainProgram> make_point(const std::set<BitVector>& points, std::size_t in_len);

/// P[g, sigma] and, with `tilde`, the variant that outputs g(Dec(...)).
class PatchedProgram final : public ProgramDescriptor {
 public:
  PatchedProgram(ClassicalFunction g, ue::KeyTestedCue scheme, ue::KeyTestedCueCiphertext sigma,
                 bool tilde);
  Kind kind() const override { return tilde_ ? Kind::TildePatched : Kind::Patched; }
  std::size_t in_len() const override { return g_.in_len; }
  std::size_t out_len() const override { return g_.out_len; }
  qsio::Evaluation evaluate(const BitVector& z, Rng& rng) override;

 private:
  ClassicalFunction g_;
  ue::KeyTestedCue scheme_;
  ue::KeyTestedCueCiphertext sigma_;
  bool tilde_;
};

std::unique_ptr<PatchedProgram> make_patched(ClassicalFunction g, const ue::KeyTestedCue& scheme,
                                             ue::KeyTestedCueCiphertext sigma);
std::unique_ptr<PatchedProgram> make_tilde_patched(ClassicalFunction g,
                                                   const ue::KeyTestedCue& scheme,
                                                   ue::KeyTestedCueCiphertext sigma);

/// Search variant: a key z decrypts to 0^prefix || <g'> and the program
/// outputs g'(z), where <g'> is a serialized GGM key. Anything else at a key
/// is a refusal.
class SearchPatchedProgram final : public ProgramDescriptor {
 public:
  SearchPatchedProgram(ClassicalFunction f, ue::KeyTestedUe scheme, ue::KeyTestedUeCiphertext sigma,
                       std::size_t prefix_len);
  Kind kind() const override { return Kind::SearchPatched; }
  std::size_t in_len() const override { return f_.in_len; }
  std::size_t out_len() const override { return f_.out_len; }
  qsio::Evaluation evaluate(const BitVector& z, Rng& rng) override;

 private:
  ClassicalFunction f_;
  ue::KeyTestedUe scheme_;
  ue::KeyTestedUeCiphertext sigma_;
  std::size_t prefix_len_;
};

std::unique_ptr<SearchPatchedProgram> make_search_patched(ClassicalFunction f,
                                                          const ue::KeyTestedUe& scheme,
                                                          ue::KeyTestedUeCiphertext sigma,
                                                          std::size_t prefix_len);

/// 0^prefix_len || serialize_ggm_key(key).
BitVector search_message(const crypto::GgmKey& key, std::size_t prefix_len);

/// The two preimages of w under T (rank rows = cols - 1), with x0 < x1.
/// Throws ue::ParameterError on a rank violation.
std::pair<BitVector, BitVector> coset_pair(const BitMatrix& t, const BitVector& w);
/// First index where x0 and x1 differ. They must differ.
std::size_t first_difference(const BitVector& x0, const BitVector& x1);
/// x0 if x0 has bit c at the first difference, else x1.
const BitVector& x_of(bool c, const BitVector& x0, const BitVector& x1);

/// P_{T, sigma} on lambda + 1 input bits with a one-bit output.
class PointCosetProgram final : public ProgramDescriptor {
 public:
  PointCosetProgram(BitMatrix t, ue::KeyTestedUe scheme, ue::KeyTestedUeCiphertext sigma);
  Kind kind() const override { return Kind::PointCoset; }
  std::size_t in_len() const override { return t_.cols(); }
  std::size_t out_len() const override { return 1; }
  qsio::Evaluation evaluate(const BitVector& z, Rng& rng) override;

 private:
  BitMatrix t_;
  ue::KeyTestedUe scheme_;
  ue::KeyTestedUeCiphertext sigma_;
};

std::unique_ptr<PointCosetProgram> make_point_coset(BitMatrix t, const ue::KeyTestedUe& scheme,
                                                    ue::KeyTestedUeCiphertext sigma);

/// Key-tested UE with lambda-bit keys used by P_{T, sigma}: toy inner UE on
/// 2 qubits with one row and direct pads, so one-bit messages.
ue::KeyTestedUe point_coset_scheme(std::size_t lambda);

}  // namespace qsilab::programs
