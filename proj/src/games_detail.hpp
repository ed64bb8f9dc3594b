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


// Building blocks shared by the built-in adversaries and the reductions.

#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "qsilab/games.hpp"

namespace qsilab::games::detail {

using AnswerFn =
    std::function<std::optional<BitVector>(const Challenge&, PartyRegisters&, Rng&)>;
using CoherentFn = std::function<std::optional<gl::BinaryMeasurement>(const Challenge&, std::size_t)>;

/// Party whose strategy is a closure.
class FnParty final : public PartyStrategy {
 public:
  explicit FnParty(AnswerFn answer, CoherentFn coherent = {})
      : answer_(std::move(answer)), coherent_(std::move(coherent)) {}
  std::optional<BitVector> answer(const Challenge& c, PartyRegisters& regs, Rng& rng) override {
    return answer_(c, regs, rng);
  }
  std::optional<gl::BinaryMeasurement> coherent(const Challenge& c,
                                                std::size_t register_qubits) const override {
    return coherent_ ? coherent_(c, register_qubits) : std::nullopt;
  }

 private:
  AnswerFn answer_;
  CoherentFn coherent_;
};

/// Party given only by its coherent form.
class FnCoherentParty final : public CoherentStrategy {
 public:
  explicit FnCoherentParty(CoherentFn coherent) : coherent_(std::move(coherent)) {}
  std::optional<gl::BinaryMeasurement> coherent(const Challenge& c,
                                                std::size_t register_qubits) const override {
    return coherent_(c, register_qubits);
  }

 private:
  CoherentFn coherent_;
};

/// Adversary assembled from closures. Every trial gets a fresh instance.
class FnAdversary final : public Adversary {
 public:
  using SplitFn = std::function<Split(Transmission&, Rng&)>;
  using ChooseFn = std::function<std::vector<BitVector>(std::size_t, std::size_t, Rng&)>;
  using AuditFn = std::function<void(const std::map<std::string, BitVector>&, const Notes&,
                                     const Notes&, Tallies&)>;

  explicit FnAdversary(SplitFn split, ChooseFn choose = {}, AuditFn audit = {})
      : split_(std::move(split)), choose_(std::move(choose)), audit_(std::move(audit)) {}

  std::vector<BitVector> choose_messages(std::size_t count, std::size_t len, Rng& rng) override {
    return choose_ ? choose_(count, len, rng) : Adversary::choose_messages(count, len, rng);
  }
  Split split(Transmission& t, Rng& rng) override { return split_(t, rng); }
  void audit(const std::map<std::string, BitVector>& secrets, const Notes& a, const Notes& b,
             Tallies& tallies) const override {
    if (audit_) audit_(secrets, a, b, tallies);
  }

 private:
  SplitFn split_;
  ChooseFn choose_;
  AuditFn audit_;
};

std::unique_ptr<PartyStrategy> random_party();
/// Coherent party that reads local qubit `output` without touching anything.
std::unique_ptr<PartyStrategy> identity_party(std::size_t output);
/// Honest strategy of `slot` (0 = A, 1 = B) given the whole ciphertext
/// register and, in copy-protection games, the program.
std::unique_ptr<PartyStrategy> honest_party(const Transmission& t, int slot);

std::vector<std::size_t> iota(std::size_t begin, std::size_t end);
BitVector bit(bool b);
/// Last value noted under `key`, if any.
std::optional<std::string> find_note(const Notes& notes, const std::string& key);

}  // namespace qsilab::games::detail
