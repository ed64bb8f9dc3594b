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

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qsilab/crypto.hpp"
#include "qsilab/glreduce.hpp"
#include "qsilab/qsio.hpp"
#include "qsilab/unclonable.hpp"

namespace qsilab::games {

using f2::BitMatrix;
using f2::BitVector;
using qsim::Matrix;
using qsim::StateVector;

enum class GameId { RAND, SEARCH, UE, CUE, CP_DECISION, CP_SEARCH, CP_PTFUNC };

std::string to_string(GameId id);
/// Accepts the enumerator names in any case ("cue", "CP_DECISION").
std::optional<GameId> parse_game_id(std::string_view name);
const std::vector<GameId>& all_games();

/// Which experiment of the decision copy-protection hybrid chain to run.
/// H0 is the unmodified experiment.
enum class DecisionHybrid { H0 = 0, H1 = 1, H2 = 2, H3 = 3 };

struct GameConfig {
  GameId game = GameId::CUE;
  // RAND / SEARCH.
  std::size_t n = 1;
  std::size_t lambda = 1;
  // UE / CUE.
  ue::SchemeParams scheme = ue::SchemeParams::paper_cue(23);
  /// Outer key length when the scheme is compiled with key testing.
  std::optional<std::size_t> key_tested_len;
  /// UE only: encrypt the challenge bit itself instead of m^c.
  bool ue_bit_variant = false;
  /// Suggested message length handed to the adversary.
  std::size_t msg_len = 8;
  // Copy-protection games: PRF input and output lengths. CP_PTFUNC uses
  // prf_in as the point length.
  std::size_t prf_in = 8;
  std::size_t prf_out = 4;
  DecisionHybrid hybrid = DecisionHybrid::H0;

  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  /// 0 means QSILAB_WORKERS, else the hardware concurrency.
  std::size_t workers = 0;
  /// Discloses challenger secrets to the adversary and allows a shared
  /// program. Test mode only.
  bool rigged = false;
  /// Record the challenger's samples of every trial.
  bool transcript = false;
};

enum class Preset { Toy, Paper };

/// Built-in defaults for each game. The CLI reads the same values from
/// config/presets.json.
GameConfig preset(GameId id, Preset p);

/// Ciphertext classical parts handed to the adversary. The quantum part
/// lives in Transmission::state; the `state` fields here are empty.
using Ciphertext = std::variant<std::monostate, ue::UeCiphertext, ue::CueCiphertext,
                                ue::KeyTestedUeCiphertext, ue::KeyTestedCueCiphertext>;

/// Everything the challenger sends in the first message, plus the
/// adversary's workspace.
struct Transmission {
  GameId game = GameId::RAND;
  StateVector state;
  std::map<std::string, BitVector> bits;
  std::map<std::string, BitMatrix> matrices;
  Ciphertext ciphertext;
  std::shared_ptr<qsio::OpaqueProgram> program;
  /// The adversary's own earlier choices (tau).
  std::vector<BitVector> chosen;
  /// Filled only in rigged mode.
  std::map<std::string, BitVector> rigged;
};

/// Moves Transmission::state back into the held ciphertext. Throws
/// std::logic_error if the variant holds another type.
template <class C>
C take_ciphertext(Transmission& t) {
  C* held = std::get_if<C>(&t.ciphertext);
  if (held == nullptr) throw std::logic_error("transmission holds another ciphertext type");
  C out = std::move(*held);
  if constexpr (requires { out.inner.state; }) {
    out.inner.state = std::move(t.state);
  } else {
    out.state = std::move(t.state);
  }
  t.ciphertext = std::monostate{};
  t.state = StateVector(0);
  return out;
}

/// Key or challenge delivered to one party in the measurement phase.
struct Challenge {
  std::map<std::string, BitVector> bits;
  std::map<std::string, BitMatrix> matrices;
  /// Required answer length.
  std::size_t answer_len = 1;

  const BitVector& bit(const std::string& k) const { return bits.at(k); }
  const BitMatrix& matrix(const std::string& k) const { return matrices.at(k); }
};

class ProtocolViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One party's view of the joint state: local qubit i is the i-th owned
/// qubit. Indices outside the view raise ProtocolViolation.
class PartyRegisters {
 public:
  PartyRegisters(StateVector& state, std::vector<std::size_t> qubits,
                 std::shared_ptr<qsio::OpaqueProgram> program);

  std::size_t size() const { return qubits_.size(); }
  void apply(const Matrix& u, std::span<const std::size_t> local);
  BitVector measure(std::span<const std::size_t> local, Rng& rng);
  BitVector measure_all(Rng& rng);
  /// Fresh |0> qubit owned by this party; returns its local index.
  std::size_t add_ancilla();
  /// Runs a library routine on the owned qubits (global indices).
  void operate(const std::function<void(StateVector&, std::span<const std::size_t>)>& fn);
  /// GL extraction over the whole register.
  BitVector extract(const gl::MeasurementFamily& family, Rng& rng);

  qsio::OpaqueProgram* program() const { return program_.get(); }

  /// Write-only audit log, read by the harness after the trial.
  void note(const std::string& key, std::string value);
  const std::vector<std::pair<std::string, std::string>>& notes() const { return notes_; }

 private:
  std::vector<std::size_t> globals(std::span<const std::size_t> local) const;

  StateVector& state_;
  std::vector<std::size_t> qubits_;
  std::shared_ptr<qsio::OpaqueProgram> program_;
  std::vector<std::pair<std::string, std::string>> notes_;
};

class PartyStrategy {
 public:
  virtual ~PartyStrategy() = default;
  /// An answer of the challenge's length; nothing is the refusal symbol.
  virtual std::optional<BitVector> answer(const Challenge& c, PartyRegisters& regs, Rng& rng) = 0;
  /// Coherent form of a binary answer, as a unitary on the register
  /// followed by reading one local qubit. Needed by GL-based reductions.
  virtual std::optional<gl::BinaryMeasurement> coherent(const Challenge& c,
                                                        std::size_t register_qubits) const;
};

/// Answers by applying its coherent form and measuring the output qubit.
class CoherentStrategy : public PartyStrategy {
 public:
  std::optional<BitVector> answer(const Challenge& c, PartyRegisters& regs, Rng& rng) override;
};

enum class ProgramOwner { None, A, B, SharedRigged };

struct Split {
  std::vector<std::size_t> a_qubits;
  std::vector<std::size_t> b_qubits;
  std::unique_ptr<PartyStrategy> party_a;
  std::unique_ptr<PartyStrategy> party_b;
  ProgramOwner program_owner = ProgramOwner::None;
};

using Notes = std::vector<std::pair<std::string, std::string>>;
using Tallies = std::map<std::string, std::size_t>;

/// Per-trial adversary. Created fresh for every trial.
class Adversary {
 public:
  virtual ~Adversary() = default;
  /// UE / cUE message choice; the default is uniform of the suggested length.
  virtual std::vector<BitVector> choose_messages(std::size_t count, std::size_t suggested_len,
                                                 Rng& rng);
  /// First message in, register split and party strategies out. The split
  /// indexes t.state as it is when this returns.
  virtual Split split(Transmission& t, Rng& rng) = 0;
  /// Post-trial bookkeeping against the challenger's secrets. Cannot
  /// influence the outcome.
  virtual void audit(const std::map<std::string, BitVector>& secrets, const Notes& notes_a,
                     const Notes& notes_b, Tallies& tallies) const;
};

struct AdversaryFactory {
  std::string name;
  std::function<std::unique_ptr<Adversary>(const GameConfig&)> make;
};

class UnknownAdversary : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by a factory for a game the strategy does not cover.
class UnsupportedGame : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct WilsonInterval {
  double lo = 0;
  double hi = 1;
};

/// 95% Wilson score interval.
WilsonInterval wilson_interval(std::size_t wins, std::size_t trials, double z = 1.959963984540054);

struct GameResult {
  std::size_t wins = 0;
  std::size_t trials = 0;
  double win_rate = 0;
  WilsonInterval interval;
  Tallies tallies;
  std::size_t violations = 0;
  /// Audit failures with their witnesses; the first few are kept.
  std::vector<std::string> failures;
  std::vector<std::vector<std::string>> transcripts;
  double wall_clock_seconds = 0;
  std::size_t workers = 1;

  /// Equality of everything except timing and worker count.
  bool same_outcome(const GameResult& other) const;
};

/// Worker count from QSILAB_WORKERS, else the hardware concurrency.
std::size_t default_workers();

GameResult run_game(const GameConfig& config, const AdversaryFactory& adversary);

// Built-in and rigged adversaries.
const std::vector<std::string>& builtin_adversary_names();
AdversaryFactory builtin_adversary(const std::string& name);
/// SEARCH, rigged: outputs x iff its matrix maps x to the received string.
AdversaryFactory rigged_oracle();
/// RAND, rigged: coherent a' = [Mx == r] on one ancilla per party.
AdversaryFactory perfect_predictor();
/// Exact win probability of echo_breidbart in SEARCH(0, lambda).
double echo_breidbart_exact(std::size_t lambda);

// Reductions. Each returns an adversary for the outer game.

/// SEARCH(0, 10n + lambda) from a SEARCH(n, lambda) adversary by guessing Ux
/// and Vx.
AdversaryFactory reduction_search_guess(AdversaryFactory inner, std::size_t n, std::size_t lambda);
/// SEARCH(n, lambda) from a RAND(n, lambda) adversary through row-hybrid GL.
AdversaryFactory reduction_rand_to_search(AdversaryFactory inner);
/// RAND(l', l') from a cUE adversary at the given scheme and message length.
AdversaryFactory reduction_cue_to_rand(AdversaryFactory inner, ue::SchemeParams cue,
                                       std::size_t msg_len);
/// UE (key-tested) from a CP_SEARCH adversary; prefix length = PRF input.
AdversaryFactory reduction_search_cp(AdversaryFactory inner, std::size_t prf_in,
                                     std::size_t prf_out);
/// UE (key-tested, bit variant) from a CP_PTFUNC adversary on lambda + 1 bits.
AdversaryFactory reduction_ptfunc(AdversaryFactory inner);
/// cUE (key-tested) from a CP_DECISION adversary via P-tilde[f, sigma].
AdversaryFactory reduction_decision_cp(AdversaryFactory inner, std::size_t prf_in,
                                       std::size_t prf_out);
/// Generic copy-protection wrapper: re-obfuscates the received program and
/// forwards it. Exercised against the ideal stand-in only.
AdversaryFactory best_possible_wrapper(AdversaryFactory inner);

/// Configs the reductions above expect for their outer game.
GameConfig search_guess_config(std::size_t n, std::size_t lambda);
GameConfig cue_to_rand_config(const ue::SchemeParams& cue);
GameConfig search_cp_config(std::size_t prf_in, std::size_t prf_out);
GameConfig ptfunc_config(std::size_t lambda);
GameConfig decision_cp_config(std::size_t prf_in, std::size_t prf_out);

class EquivalenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HybridReport {
  std::vector<GameResult> hybrids;  // H0..H3
  GameResult terminal;              // reduction to cUE
  std::size_t audits = 0;
};

/// Runs H0..H3 of the decision chain and the terminal cUE reduction against
/// one adversary. Throws EquivalenceFailure with the witness if any audit
/// fails.
HybridReport hybrid_chain_decision(const GameConfig& config, const AdversaryFactory& adversary);

}  // namespace qsilab::games
