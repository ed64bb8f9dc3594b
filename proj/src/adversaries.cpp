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


#include <cmath>
#include <numbers>

#include "games_detail.hpp"
#include "qsilab/conjugate.hpp"

namespace qsilab::games {

namespace detail {

std::vector<std::size_t> iota(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out;
  for (std::size_t i = begin; i < end; ++i) out.push_back(i);
  return out;
}

BitVector bit(bool b) { return BitVector::from_uint(b ? 1 : 0, 1); }

std::optional<std::string> find_note(const Notes& notes, const std::string& key) {
  std::optional<std::string> out;
  for (const auto& [k, v] : notes) {
    if (k == key) out = v;
  }
  return out;
}

std::unique_ptr<PartyStrategy> random_party() {
  return std::make_unique<FnParty>([](const Challenge& c, PartyRegisters&, Rng& rng) {
    return std::optional(BitVector::random(c.answer_len, rng));
  });
}

std::unique_ptr<PartyStrategy> identity_party(std::size_t output) {
  return std::make_unique<FnCoherentParty>(
      [output](const Challenge&, std::size_t qubits) -> std::optional<gl::BinaryMeasurement> {
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << qubits);
        return gl::BinaryMeasurement{Matrix::Identity(dim, dim), output};
      });
}

namespace {

// Decrypts the whole register with the inner key.
template <class Fn>
BitVector in_place(PartyRegisters& regs, Fn fn) {
  BitVector out;
  regs.operate([&](StateVector& st, std::span<const std::size_t> q) { out = fn(st, q); });
  return out;
}

std::optional<BitVector> program_at(PartyRegisters& regs, const BitVector& x, Rng& rng) {
  auto* p = regs.program();
  if (p == nullptr) return std::nullopt;
  return p->evaluate(x, rng);
}

}  // namespace

std::unique_ptr<PartyStrategy> honest_party(const Transmission& t, int slot) {
  switch (t.game) {
    case GameId::RAND: {
      const auto target = t.bits.at(slot == 0 ? "r" : "s");
      return std::make_unique<FnParty>(
          [target](const Challenge& c, PartyRegisters& regs, Rng& rng) {
            const auto x = in_place(regs, [&](StateVector& st, std::span<const std::size_t> q) {
              return conj::decode_bb84_in_place(st, q, c.bit("theta"), rng);
            });
            return std::optional(bit(f2::matvec(c.matrix("M"), x) == target));
          });
    }
    case GameId::SEARCH:
      return std::make_unique<FnParty>([](const Challenge& c, PartyRegisters& regs, Rng& rng) {
        return std::optional(in_place(regs, [&](StateVector& st, std::span<const std::size_t> q) {
          return conj::decode_bb84_in_place(st, q, c.bit("theta"), rng);
        }));
      });
    case GameId::UE: {
      const auto chosen = t.chosen.empty() ? std::optional<BitVector>() : t.chosen.front();
      std::optional<BitMatrix> a;
      ue::UeCiphertext ct;
      if (const auto* kt = std::get_if<ue::KeyTestedUeCiphertext>(&t.ciphertext)) {
        a = kt->a;
        ct.pad = kt->inner.pad;
        ct.params = kt->inner.params;
      } else {
        const auto& plain = std::get<ue::UeCiphertext>(t.ciphertext);
        ct.pad = plain.pad;
        ct.params = plain.params;
      }
      return std::make_unique<FnParty>(
          [chosen, a, params = ct.params, pad = ct.pad](const Challenge& c, PartyRegisters& regs,
                                                         Rng& rng) {
            const auto key = a ? f2::matvec(*a, c.bit("sk")) : c.bit("sk");
            const auto m = in_place(regs, [&](StateVector& st, std::span<const std::size_t> q) {
              return ue::ue_decrypt_in_place(params, key, st, q, pad, rng);
            });
            return std::optional(chosen ? bit(m == *chosen) : m);
          });
    }
    case GameId::CUE: {
      const auto chosen = t.chosen.at(static_cast<std::size_t>(slot));
      std::optional<BitMatrix> a;
      const ue::CueCiphertext* ct = nullptr;
      if (const auto* kt = std::get_if<ue::KeyTestedCueCiphertext>(&t.ciphertext)) {
        a = kt->a;
        ct = &kt->inner;
      } else {
        ct = &std::get<ue::CueCiphertext>(t.ciphertext);
      }
      return std::make_unique<FnParty>(
          [chosen, a, params = ct->params, tm = ct->t,
           pad = slot == 0 ? ct->pad_a : ct->pad_b](const Challenge& c, PartyRegisters& regs,
                                                    Rng& rng) {
            const auto key = a ? f2::matvec(*a, c.bit("sk")) : c.bit("sk");
            const auto m = in_place(regs, [&](StateVector& st, std::span<const std::size_t> q) {
              return ue::cue_decrypt_in_place(params, key, tm, st, q, pad, rng);
            });
            return std::optional(bit(m == chosen));
          });
    }
    case GameId::CP_DECISION:
      return std::make_unique<FnParty>([](const Challenge& c, PartyRegisters& regs, Rng& rng) {
        return std::optional(bit(program_at(regs, c.bit("x"), rng) == c.bit("y")));
      });
    case GameId::CP_SEARCH:
      return std::make_unique<FnParty>([](const Challenge& c, PartyRegisters& regs, Rng& rng) {
        return program_at(regs, c.bit("x"), rng);
      });
    case GameId::CP_PTFUNC:
      return std::make_unique<FnParty>([](const Challenge& c, PartyRegisters& regs, Rng& rng) {
        return std::optional(bit(program_at(regs, c.bit("x0"), rng) != bit(true)));
      });
  }
  throw std::logic_error("unknown game");
}

}  // namespace detail

using detail::bit;
using detail::FnAdversary;
using detail::FnParty;
using detail::iota;

namespace {

bool is_cp(GameId g) {
  return g == GameId::CP_DECISION || g == GameId::CP_SEARCH || g == GameId::CP_PTFUNC;
}

Matrix breidbart_rotation() {
  const double half = -std::numbers::pi / 8;
  Matrix r(2, 2);
  r << std::cos(half), -std::sin(half), std::sin(half), std::cos(half);
  return r;
}

std::unique_ptr<Adversary> random_guess(const GameConfig&) {
  return std::make_unique<FnAdversary>([](Transmission& t, Rng&) {
    Split s;
    if (t.game == GameId::RAND) {
      // Coins in |+>, so the answers have a coherent form.
      const auto first = t.state.append_zeros(2);
      const std::size_t q0[] = {first};
      const std::size_t q1[] = {first + 1};
      qsim::apply_unitary(t.state, qsim::gates::H(), q0);
      qsim::apply_unitary(t.state, qsim::gates::H(), q1);
      s.a_qubits = {first};
      s.b_qubits = {first + 1};
      s.party_a = detail::identity_party(0);
      s.party_b = detail::identity_party(0);
    } else {
      s.party_a = detail::random_party();
      s.party_b = detail::random_party();
    }
    return s;
  });
}

std::unique_ptr<Adversary> give_all(int slot, bool share_when_rigged, const GameConfig& cfg) {
  const bool shared = share_when_rigged && cfg.rigged && is_cp(cfg.game);
  return std::make_unique<FnAdversary>([slot, shared](Transmission& t, Rng&) {
    Split s;
    auto everything = iota(0, t.state.num_qubits());
    if (shared) {
      s.party_a = detail::honest_party(t, 0);
      s.party_b = detail::honest_party(t, 1);
      s.program_owner = ProgramOwner::SharedRigged;
      return s;
    }
    auto honest = detail::honest_party(t, slot);
    if (slot == 0) {
      s.a_qubits = std::move(everything);
      s.party_a = std::move(honest);
      s.party_b = detail::random_party();
      s.program_owner = ProgramOwner::A;
    } else {
      s.b_qubits = std::move(everything);
      s.party_b = std::move(honest);
      s.party_a = detail::random_party();
      s.program_owner = ProgramOwner::B;
    }
    return s;
  });
}

std::unique_ptr<detail::FnParty> half_party(std::size_t begin, std::size_t end, bool search) {
  return std::make_unique<FnParty>(
      [begin, end, search](const Challenge& c, PartyRegisters& regs, Rng& rng) {
        if (!search) return std::optional(BitVector::random(c.answer_len, rng));
        const auto theta = c.bit("theta").slice(begin, end - begin);
        const auto half = [&] {
          BitVector out;
          regs.operate([&](StateVector& st, std::span<const std::size_t> q) {
            out = conj::decode_bb84_in_place(st, q, theta, rng);
          });
          return out;
        }();
        regs.note("half", half.to_string());
        auto guess = BitVector::random(c.answer_len, rng);
        for (std::size_t i = begin; i < end; ++i) guess.set(i, half.get(i - begin));
        return std::optional(guess);
      });
}

std::unique_ptr<Adversary> split_halves(const GameConfig& cfg) {
  const bool search = cfg.game == GameId::SEARCH;
  return std::make_unique<FnAdversary>(
      [search](Transmission& t, Rng&) {
        const std::size_t k = t.state.num_qubits();
        Split s;
        s.a_qubits = iota(0, k / 2);
        s.b_qubits = iota(k / 2, k);
        s.party_a = half_party(0, k / 2, search);
        s.party_b = half_party(k / 2, k, search);
        return s;
      },
      nullptr,
      [](const std::map<std::string, BitVector>& secrets, const Notes& na, const Notes& nb,
         Tallies& tallies) {
        const auto x = secrets.find("x");
        if (x == secrets.end()) return;
        const std::size_t k = x->second.size();
        if (auto h = detail::find_note(na, "half"); h && *h == x->second.slice(0, k / 2).to_string()) {
          ++tallies["a_half_correct"];
        }
        if (auto h = detail::find_note(nb, "half");
            h && *h == x->second.slice(k / 2, k - k / 2).to_string()) {
          ++tallies["b_half_correct"];
        }
      });
}

std::unique_ptr<Adversary> echo_breidbart(const GameConfig& cfg) {
  if (cfg.game != GameId::RAND && cfg.game != GameId::SEARCH) {
    throw UnsupportedGame("echo_breidbart plays RAND and SEARCH only");
  }
  return std::make_unique<FnAdversary>([](Transmission& t, Rng& rng) {
    const auto rot = breidbart_rotation();
    const std::size_t k = t.state.num_qubits();
    for (std::size_t q = 0; q < k; ++q) {
      const std::size_t target[] = {q};
      qsim::apply_unitary(t.state, rot, target);
    }
    const auto all = iota(0, k);
    const auto g = k == 0 ? BitVector(0) : qsim::measure(t.state, all, rng).outcome;
    auto party = [g, &t](const char* key) -> std::unique_ptr<PartyStrategy> {
      if (t.game == GameId::SEARCH) {
        return std::make_unique<FnParty>(
            [g](const Challenge&, PartyRegisters&, Rng&) { return std::optional(g); });
      }
      const auto target = t.bits.at(key);
      return std::make_unique<FnParty>([g, target](const Challenge& c, PartyRegisters&, Rng&) {
        return std::optional(bit(f2::matvec(c.matrix("M"), g) == target));
      });
    };
    Split s;
    s.party_a = party("r");
    s.party_b = party("s");
    return s;
  });
}

}  // namespace

const std::vector<std::string>& builtin_adversary_names() {
  static const std::vector<std::string> names = {"random_guess",    "give_all_to_A",
                                                 "give_all_to_B",   "split_halves",
                                                 "echo_breidbart",  "honest_decryptor"};
  return names;
}

AdversaryFactory builtin_adversary(const std::string& name) {
  if (name == "random_guess") return {name, random_guess};
  if (name == "give_all_to_A") {
    return {name, [](const GameConfig& c) { return give_all(0, false, c); }};
  }
  if (name == "give_all_to_B") {
    return {name, [](const GameConfig& c) { return give_all(1, false, c); }};
  }
  if (name == "honest_decryptor") {
    return {name, [](const GameConfig& c) { return give_all(0, true, c); }};
  }
  if (name == "split_halves") return {name, split_halves};
  if (name == "echo_breidbart") return {name, echo_breidbart};
  throw UnknownAdversary("unknown adversary: " + name);
}

AdversaryFactory rigged_oracle() {
  return {"rigged_oracle", [](const GameConfig& cfg) -> std::unique_ptr<Adversary> {
            if (cfg.game != GameId::SEARCH) throw UnsupportedGame("rigged_oracle plays SEARCH");
            return std::make_unique<FnAdversary>([](Transmission& t, Rng&) {
              const auto it = t.rigged.find("x");
              if (it == t.rigged.end()) throw ProtocolViolation("rigged_oracle needs rigged mode");
              const auto x = it->second;
              auto party = [&x](const BitVector& target) {
                return std::make_unique<FnParty>(
                    [x, target](const Challenge& c, PartyRegisters&, Rng& rng) {
                      if (f2::matvec(c.matrix("M"), x) == target) return std::optional(x);
                      return std::optional(BitVector::random(c.answer_len, rng));
                    });
              };
              Split s;
              s.party_a = party(t.bits.at("r"));
              s.party_b = party(t.bits.at("s"));
              return s;
            });
          }};
}

AdversaryFactory perfect_predictor() {
  return {"perfect_predictor", [](const GameConfig& cfg) -> std::unique_ptr<Adversary> {
            if (cfg.game != GameId::RAND) throw UnsupportedGame("perfect_predictor plays RAND");
            return std::make_unique<FnAdversary>([](Transmission& t, Rng&) {
              const auto it = t.rigged.find("x");
              if (it == t.rigged.end()) {
                throw ProtocolViolation("perfect_predictor needs rigged mode");
              }
              const auto x = it->second;
              const auto first = t.state.append_zeros(2);
              auto party = [&x](const BitVector& target) {
                return std::make_unique<detail::FnCoherentParty>(
                    [x, target](const Challenge& c,
                                std::size_t qubits) -> std::optional<gl::BinaryMeasurement> {
                      const auto dim = static_cast<Eigen::Index>(std::size_t{1} << qubits);
                      Matrix u = Matrix::Identity(dim, dim);
                      if (f2::matvec(c.matrix("M"), x) == target) {
                        // X on local qubit 0.
                        u = Matrix::Zero(dim, dim);
                        for (Eigen::Index i = 0; i < dim; ++i) u(i ^ 1, i) = 1;
                      }
                      return gl::BinaryMeasurement{u, 0};
                    });
              };
              Split s;
              s.a_qubits = {first};
              s.b_qubits = {first + 1};
              s.party_a = party(t.bits.at("r"));
              s.party_b = party(t.bits.at("s"));
              return s;
            });
          }};
}

double echo_breidbart_exact(std::size_t lambda) {
  if (lambda == 0 || lambda > 10) throw std::invalid_argument("lambda must be in [1, 10]");
  // Average over every (x, theta) of the probability that the rotated
  // encoding reads back x.
  const auto rot = breidbart_rotation();
  const std::uint64_t count = std::uint64_t{1} << lambda;
  double total = 0;
  for (std::uint64_t xv = 0; xv < count; ++xv) {
    for (std::uint64_t tv = 0; tv < count; ++tv) {
      const auto x = BitVector::from_uint(xv, lambda);
      auto st = conj::encode_bb84(x, BitVector::from_uint(tv, lambda));
      for (std::size_t q = 0; q < lambda; ++q) {
        const std::size_t target[] = {q};
        qsim::apply_unitary(st, rot, target);
      }
      total += std::norm(st.amplitude(xv));
    }
  }
  return total / static_cast<double>(count * count);
}

}  // namespace qsilab::games
