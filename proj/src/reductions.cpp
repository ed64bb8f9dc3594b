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


#include "games_detail.hpp"
#include "qsilab/programs.hpp"

namespace qsilab::games {

using detail::bit;
using detail::FnAdversary;
using detail::FnParty;

namespace {

using ProgramPtr = std::shared_ptr<qsio::OpaqueProgram>;

// Runs an inner party on the outer party's register, with the program the
// inner split handed it.
std::optional<BitVector> ask_nested(PartyStrategy& inner, PartyRegisters& regs, const Challenge& c,
                                    const ProgramPtr& program, Rng& rng) {
  std::optional<BitVector> out;
  Notes notes;
  regs.operate([&](StateVector& st, std::span<const std::size_t> q) {
    PartyRegisters view(st, {q.begin(), q.end()}, program);
    out = inner.answer(c, view, rng);
    notes = view.notes();
  });
  for (auto& [k, v] : notes) regs.note(k, std::move(v));
  if (out && out->size() != c.answer_len) throw ProtocolViolation("inner answer has wrong length");
  return out;
}

struct InnerSplit {
  Split split;
  ProgramPtr program_a;
  ProgramPtr program_b;
};

// Hands `inner_t` to the inner adversary, with the outer workspace as its
// state, and moves the workspace back afterwards.
InnerSplit open_inner(Adversary& inner, Transmission& outer, Transmission inner_t, Rng& rng,
                      bool rigged) {
  inner_t.state = std::move(outer.state);
  if (rigged) inner_t.rigged = outer.rigged;
  InnerSplit out;
  out.split = inner.split(inner_t, rng);
  outer.state = std::move(inner_t.state);
  if (!out.split.party_a || !out.split.party_b) throw ProtocolViolation("missing party strategy");
  switch (out.split.program_owner) {
    case ProgramOwner::None: break;
    case ProgramOwner::A: out.program_a = inner_t.program; break;
    case ProgramOwner::B: out.program_b = inner_t.program; break;
    case ProgramOwner::SharedRigged:
      if (!rigged) throw ProtocolViolation("shared program outside rigged mode");
      out.program_a = inner_t.program;
      out.program_b = inner_t.program;
      break;
  }
  return out;
}

// Outer split whose parties are built from the inner ones.
template <class Wrap>
Split wrap_split(InnerSplit& in, Wrap wrap) {
  Split s;
  s.a_qubits = std::move(in.split.a_qubits);
  s.b_qubits = std::move(in.split.b_qubits);
  s.party_a = wrap(0, std::shared_ptr<PartyStrategy>(std::move(in.split.party_a)), in.program_a);
  s.party_b = wrap(1, std::shared_ptr<PartyStrategy>(std::move(in.split.party_b)), in.program_b);
  return s;
}

GameConfig inner_config(const GameConfig& outer, GameId game) {
  GameConfig c = outer;
  c.game = game;
  c.hybrid = DecisionHybrid::H0;
  return c;
}

class ForwardingProgram final : public qsio::QuantumImplementation {
 public:
  explicit ForwardingProgram(ProgramPtr inner) : inner_(std::move(inner)) {}
  std::size_t in_len() const override { return inner_->in_len(); }
  std::size_t out_len() const override { return inner_->out_len(); }
  qsio::Evaluation evaluate(const BitVector& x, Rng& rng) override {
    check_input(x);
    return inner_->evaluate_detailed(x, rng);
  }

 private:
  ProgramPtr inner_;
};

}  // namespace

// SEARCH(0, 10n + lambda) from SEARCH(n, lambda) -----------------------------

AdversaryFactory reduction_search_guess(AdversaryFactory inner, std::size_t n,
                                        std::size_t lambda) {
  auto make = [inner, n, lambda](const GameConfig& cfg) -> std::unique_ptr<Adversary> {
    if (cfg.game != GameId::SEARCH || cfg.n != 0 || cfg.lambda != 10 * n + lambda) {
      throw UnsupportedGame("search_guess plays SEARCH(0, 10n + lambda)");
    }
    GameConfig ic = inner_config(cfg, GameId::SEARCH);
    ic.n = n;
    ic.lambda = lambda;
    std::shared_ptr<Adversary> adv = inner.make(ic);
    const bool rigged = cfg.rigged;
    return std::make_unique<FnAdversary>(
        [adv, n, rigged](Transmission& t, Rng& rng) {
          Transmission it;
          it.game = GameId::SEARCH;
          const auto r = BitVector::random(n, rng);
          const auto s = BitVector::random(n, rng);
          it.bits = {{"r", r}, {"s", s}};
          auto in = open_inner(*adv, t, std::move(it), rng, rigged);
          return wrap_split(in, [n, r, s](int slot, std::shared_ptr<PartyStrategy> party,
                                          ProgramPtr program) {
            const auto guess = slot == 0 ? r : s;
            return std::make_unique<FnParty>(
                [party, program, guess, n](const Challenge& c, PartyRegisters& regs, Rng& rng) {
                  const std::size_t len = c.answer_len;
                  const auto m = BitMatrix::random(n, len, rng);
                  regs.note("M", m.to_row_major().to_string());
                  regs.note("guess", guess.to_string());
                  Challenge ic{{{"theta", c.bit("theta")}}, {{"M", m}}, len};
                  return ask_nested(*party, regs, ic, program, rng);
                });
          });
        },
        nullptr,
        [n](const std::map<std::string, BitVector>& secrets, const Notes& na, const Notes& nb,
            Tallies& tallies) {
          const auto& x = secrets.at("x");
          auto correct = [&](const Notes& notes) {
            const auto m = detail::find_note(notes, "M");
            const auto g = detail::find_note(notes, "guess");
            if (!m || !g) return false;
            const auto mat = BitMatrix::from_row_major(BitVector::from_string(*m), n, x.size());
            return f2::matvec(mat, x).to_string() == *g;
          };
          if (correct(na) && correct(nb)) {
            ++tallies["guess_correct"];
            if (secrets.at("win").get(0)) ++tallies["win_and_guess"];
            ++tallies["guess_r=" + *detail::find_note(na, "guess")];
          }
        });
  };
  return {"search_guess(" + inner.name + ")", make};
}

GameConfig search_guess_config(std::size_t n, std::size_t lambda) {
  GameConfig c = preset(GameId::SEARCH, Preset::Toy);
  c.n = 0;
  c.lambda = 10 * n + lambda;
  return c;
}

// SEARCH(n, lambda) from RAND(n, lambda) --------------------------------------

AdversaryFactory reduction_rand_to_search(AdversaryFactory inner) {
  auto make = [inner](const GameConfig& cfg) -> std::unique_ptr<Adversary> {
    if (cfg.game != GameId::SEARCH || cfg.n == 0) {
      throw UnsupportedGame("rand_to_search plays SEARCH(n, lambda) with n >= 1");
    }
    std::shared_ptr<Adversary> adv = inner.make(inner_config(cfg, GameId::RAND));
    const bool rigged = cfg.rigged;
    const std::size_t n = cfg.n;
    return std::make_unique<FnAdversary>(
        [adv, n, rigged](Transmission& t, Rng& rng) {
          const std::size_t i = uniform_below(n, rng);
          // Rows up to i keep the received values; later rows are fresh.
          auto hybrid = [&](const BitVector& real) {
            auto out = BitVector::random(n, rng);
            for (std::size_t j = 0; j <= i; ++j) out.set(j, real.get(j));
            return out;
          };
          Transmission it;
          it.game = GameId::RAND;
          it.bits = {{"r", hybrid(t.bits.at("r"))}, {"s", hybrid(t.bits.at("s"))}};
          auto in = open_inner(*adv, t, std::move(it), rng, rigged);
          return wrap_split(in, [i, n](int, std::shared_ptr<PartyStrategy> party, ProgramPtr) {
            return std::make_unique<FnParty>([party, i, n](const Challenge& c,
                                                           PartyRegisters& regs, Rng& rng) {
              const auto& u_real = c.matrix("M");
              const std::size_t cols = u_real.cols();
              const auto tail = BitMatrix::random(n, cols, rng);
              auto splice = [&](const BitVector& u) {
                std::vector<BitVector> rows;
                for (std::size_t j = 0; j < n; ++j) {
                  rows.push_back(j < i ? u_real.row(j) : j == i ? u : tail.row(j));
                }
                return BitMatrix::from_rows(std::move(rows), cols);
              };
              const std::size_t reg = regs.size();
              const auto theta = c.bit("theta");
              bool splice_ok = true;
              gl::MeasurementFamily family(cols, reg, [&](const BitVector& u) {
                const auto m = splice(u);
                for (std::size_t j = 0; j < n; ++j) {
                  const auto& want = j < i ? u_real.row(j) : j == i ? u : tail.row(j);
                  if (m.row(j) != want) splice_ok = false;
                }
                auto meas = party->coherent(Challenge{{{"theta", theta}}, {{"M", m}}, 1}, reg);
                if (!meas) throw ProtocolViolation("inner party has no coherent form");
                return *meas;
              });
              BitVector w;
              try {
                w = regs.extract(family, rng);
              } catch (const qsim::CapacityError& e) {
                throw ProtocolViolation(std::string("extraction too large: ") + e.what());
              }
              regs.note("splice_ok", splice_ok ? "1" : "0");
              return std::optional(w);
            });
          });
        },
        nullptr,
        [](const std::map<std::string, BitVector>&, const Notes& na, const Notes& nb,
           Tallies& tallies) {
          for (const auto* notes : {&na, &nb}) {
            if (detail::find_note(*notes, "splice_ok") == "1") ++tallies["splice_ok"];
          }
        });
  };
  return {"rand_to_search(" + inner.name + ")", make};
}

// RAND(l', l') from cUE -------------------------------------------------------

AdversaryFactory reduction_cue_to_rand(AdversaryFactory inner, ue::SchemeParams cue,
                                       std::size_t msg_len) {
  auto make = [inner, cue, msg_len](const GameConfig& cfg) -> std::unique_ptr<Adversary> {
    if (cfg.game != GameId::RAND || cfg.n != cue.rows || 10 * cfg.n + cfg.lambda != cue.qubits) {
      throw UnsupportedGame("cue_to_rand plays RAND with the scheme's dimensions");
    }
    GameConfig ic = inner_config(cfg, GameId::CUE);
    ic.scheme = cue;
    ic.msg_len = msg_len;
    ic.rigged = false;
    std::shared_ptr<Adversary> adv = inner.make(ic);
    return std::make_unique<FnAdversary>(
        [adv, cue, msg_len](Transmission& t, Rng& rng) {
          const std::size_t len = cue.qubits;
          auto msgs = adv->choose_messages(2, msg_len, rng);
          if (msgs.size() != 2) throw ProtocolViolation("two messages required");
          const auto tm = f2::sample_rank_constrained(len, len + 1, std::nullopt, len, rng);
          ue::CueCiphertext ct;
          ct.t = tm;
          ct.params = cue;
          ct.pad_a = msgs[0] ^ ue::pad_stream(cue, t.bits.at("r"), msgs[0].size());
          ct.pad_b = msgs[1] ^ ue::pad_stream(cue, t.bits.at("s"), msgs[1].size());
          const bool d = random_bit(rng);
          Transmission it;
          it.game = GameId::CUE;
          it.ciphertext = std::move(ct);
          it.chosen = msgs;
          auto in = open_inner(*adv, t, std::move(it), rng, false);
          return wrap_split(in, [tm, d, cue](int slot, std::shared_ptr<PartyStrategy> party,
                                             ProgramPtr program) {
            const bool pick = slot == 0 ? d : !d;
            return std::make_unique<FnParty>([party, program, tm, pick, cue](
                                                 const Challenge& c, PartyRegisters& regs,
                                                 Rng& rng) {
              const auto& theta = c.bit("theta");
              const auto [x0, x1] = programs::coset_pair(tm, theta);
              const auto theta_slot = programs::x_of(pick, x0, x1);
              auto key = f2::concat(theta_slot, c.matrix("M").to_row_major());
              if (key.size() < cue.lambda) {
                key = f2::concat(key, BitVector::random(cue.lambda - key.size(), rng));
              }
              regs.note("T_theta", f2::matvec(tm, theta_slot).to_string());
              return ask_nested(*party, regs, Challenge{{{"sk", key}}, {}, 1}, program, rng);
            });
          });
        },
        nullptr,
        [](const std::map<std::string, BitVector>& secrets, const Notes& na, const Notes& nb,
           Tallies& tallies) {
          const auto theta = secrets.at("theta").to_string();
          if (detail::find_note(na, "T_theta") == theta && detail::find_note(nb, "T_theta") == theta) {
            ++tallies["keys_consistent"];
          }
        });
  };
  return {"cue_to_rand(" + inner.name + ")", make};
}

GameConfig cue_to_rand_config(const ue::SchemeParams& cue) {
  GameConfig c = preset(GameId::RAND, Preset::Toy);
  c.n = cue.rows;
  c.lambda = cue.qubits - 10 * cue.rows;
  return c;
}

// UE from CP_SEARCH -------------------------------------------------------------

AdversaryFactory reduction_search_cp(AdversaryFactory inner, std::size_t prf_in,
                                     std::size_t prf_out) {
  auto make = [inner, prf_in, prf_out](const GameConfig& cfg) -> std::unique_ptr<Adversary> {
    if (cfg.game != GameId::UE || cfg.key_tested_len != prf_in || cfg.ue_bit_variant) {
      throw UnsupportedGame("search_cp plays key-tested UE with prf_in-bit keys");
    }
    GameConfig ic = inner_config(cfg, GameId::CP_SEARCH);
    ic.prf_in = prf_in;
    ic.prf_out = prf_out;
    std::shared_ptr<Adversary> adv = inner.make(ic);
    auto f = std::make_shared<std::optional<crypto::GgmKey>>();
    const bool rigged = cfg.rigged;
    return std::make_unique<FnAdversary>(
        [adv, f, prf_in, rigged](Transmission& t, Rng& rng) {
          auto ct = take_ciphertext<ue::KeyTestedUeCiphertext>(t);
          const ue::KeyTestedUe scheme(ct.inner.params, ct.a.cols());
          Transmission it;
          it.game = GameId::CP_SEARCH;
          it.program = qsio::wrap_opaque(
              programs::make_search_patched(programs::ggm_function(**f), scheme, std::move(ct),
                                            prf_in));
          auto in = open_inner(*adv, t, std::move(it), rng, rigged);
          const auto key = **f;
          return wrap_split(in, [key](int, std::shared_ptr<PartyStrategy> party,
                                      ProgramPtr program) {
            return std::make_unique<FnParty>(
                [party, program, key](const Challenge& c, PartyRegisters& regs, Rng& rng) {
                  const auto& s = c.bit("sk");
                  const auto y = ask_nested(*party, regs, Challenge{{{"x", s}}, {}, key.output_len},
                                            program, rng);
                  const bool verified = crypto::mac_verify(key, s, y);
                  regs.note("outcome", verified ? "verified" : y ? "rejected" : "bottom");
                  return std::optional(bit(verified || random_bit(rng)));
                });
          });
        },
        [f, prf_in, prf_out](std::size_t count, std::size_t, Rng& rng) {
          *f = crypto::GgmKey::generate(prf_in, prf_out, rng);
          std::vector<BitVector> out(count, programs::search_message(**f, prf_in));
          return out;
        },
        [](const std::map<std::string, BitVector>& secrets, const Notes& na, const Notes& nb,
           Tallies& tallies) {
          const std::string c = secrets.at("c").get(0) ? "c1" : "c0";
          for (const auto* notes : {&na, &nb}) {
            if (auto o = detail::find_note(*notes, "outcome")) ++tallies[c + "_" + *o];
          }
          ++tallies[c + "_trials"];
          if (secrets.at("win").get(0)) ++tallies[c + "_wins"];
        });
  };
  return {"search_cp(" + inner.name + ")", make};
}

GameConfig search_cp_config(std::size_t prf_in, std::size_t prf_out) {
  GameConfig c = preset(GameId::UE, Preset::Paper);
  c.key_tested_len = prf_in;
  c.prf_in = prf_in;
  c.prf_out = prf_out;
  c.msg_len = prf_in;
  return c;
}

// UE bit variant from CP_PTFUNC ----------------------------------------------

AdversaryFactory reduction_ptfunc(AdversaryFactory inner) {
  auto make = [inner](const GameConfig& cfg) -> std::unique_ptr<Adversary> {
    if (cfg.game != GameId::UE || !cfg.key_tested_len || !cfg.ue_bit_variant) {
      throw UnsupportedGame("ptfunc plays the key-tested UE bit variant");
    }
    const std::size_t lambda = *cfg.key_tested_len;
    GameConfig ic = inner_config(cfg, GameId::CP_PTFUNC);
    ic.prf_in = lambda + 1;
    ic.prf_out = 1;
    std::shared_ptr<Adversary> adv = inner.make(ic);
    const bool rigged = cfg.rigged;
    return std::make_unique<FnAdversary>(
        [adv, lambda, rigged](Transmission& t, Rng& rng) {
          auto ct = take_ciphertext<ue::KeyTestedUeCiphertext>(t);
          const ue::KeyTestedUe scheme(ct.inner.params, ct.a.cols());
          const auto tm = f2::sample_rank_constrained(lambda, lambda + 1, std::nullopt, lambda, rng);
          Transmission it;
          it.game = GameId::CP_PTFUNC;
          it.program = qsio::wrap_opaque(programs::make_point_coset(tm, scheme, std::move(ct)));
          auto in = open_inner(*adv, t, std::move(it), rng, rigged);
          return wrap_split(in, [tm](int, std::shared_ptr<PartyStrategy> party,
                                     ProgramPtr program) {
            return std::make_unique<FnParty>(
                [party, program, tm](const Challenge& c, PartyRegisters& regs, Rng& rng) {
                  const auto [x0, x1] = programs::coset_pair(tm, c.bit("sk"));
                  const auto a = ask_nested(*party, regs, Challenge{{{"x0", x0}, {"x1", x1}}, {}, 1},
                                            program, rng);
                  if (!a) throw ProtocolViolation("refusal where a bit was required");
                  const auto& chosen = a->get(0) ? x1 : x0;
                  return std::optional(bit(chosen.get(programs::first_difference(x0, x1))));
                });
          });
        });
  };
  return {"ptfunc(" + inner.name + ")", make};
}

GameConfig ptfunc_config(std::size_t lambda) {
  GameConfig c = preset(GameId::UE, Preset::Toy);
  c.scheme = programs::point_coset_scheme(lambda).inner();
  c.key_tested_len = lambda;
  c.ue_bit_variant = true;
  c.msg_len = 1;
  c.prf_in = lambda + 1;
  c.prf_out = 1;
  return c;
}

// cUE from CP_DECISION --------------------------------------------------------

AdversaryFactory reduction_decision_cp(AdversaryFactory inner, std::size_t prf_in,
                                       std::size_t prf_out) {
  auto make = [inner, prf_in, prf_out](const GameConfig& cfg) -> std::unique_ptr<Adversary> {
    if (cfg.game != GameId::CUE || cfg.key_tested_len != prf_in) {
      throw UnsupportedGame("decision_cp plays key-tested cUE with prf_in-bit keys");
    }
    GameConfig ic = inner_config(cfg, GameId::CP_DECISION);
    ic.prf_in = prf_in;
    ic.prf_out = prf_out;
    std::shared_ptr<Adversary> adv = inner.make(ic);
    auto tilde = std::make_shared<std::vector<BitVector>>();
    const bool rigged = cfg.rigged;
    return std::make_unique<FnAdversary>(
        [adv, tilde, prf_in, prf_out, rigged](Transmission& t, Rng& rng) {
          auto ct = take_ciphertext<ue::KeyTestedCueCiphertext>(t);
          const ue::KeyTestedCue scheme(ct.inner.params, ct.a.cols());
          const auto f = crypto::GgmKey::generate(prf_in, prf_out, rng);
          Transmission it;
          it.game = GameId::CP_DECISION;
          it.program = qsio::wrap_opaque(
              programs::make_tilde_patched(programs::ggm_function(f), scheme, std::move(ct)));
          auto in = open_inner(*adv, t, std::move(it), rng, rigged);
          const auto ya = crypto::ggm_eval(f, tilde->at(0));
          const auto yb = crypto::ggm_eval(f, tilde->at(1));
          return wrap_split(in, [ya, yb](int slot, std::shared_ptr<PartyStrategy> party,
                                         ProgramPtr program) {
            const auto y = slot == 0 ? ya : yb;
            return std::make_unique<FnParty>(
                [party, program, y](const Challenge& c, PartyRegisters& regs, Rng& rng) {
                  return ask_nested(*party, regs, Challenge{{{"x", c.bit("sk")}, {"y", y}}, {}, 1},
                                    program, rng);
                });
          });
        },
        [tilde, prf_in](std::size_t count, std::size_t, Rng& rng) {
          tilde->clear();
          for (std::size_t i = 0; i < count; ++i) tilde->push_back(BitVector::random(prf_in, rng));
          return *tilde;
        });
  };
  return {"decision_cp(" + inner.name + ")", make};
}

GameConfig decision_cp_config(std::size_t prf_in, std::size_t prf_out) {
  GameConfig c = preset(GameId::CUE, Preset::Paper);
  c.key_tested_len = prf_in;
  c.msg_len = prf_in;
  c.prf_in = prf_in;
  c.prf_out = prf_out;
  return c;
}

// Re-obfuscate and forward ----------------------------------------------------

AdversaryFactory best_possible_wrapper(AdversaryFactory inner) {
  auto make = [inner](const GameConfig& cfg) -> std::unique_ptr<Adversary> {
    std::shared_ptr<Adversary> adv = inner.make(cfg);
    return std::make_unique<FnAdversary>(
        [adv](Transmission& t, Rng& rng) {
          if (t.program) {
            t.program = qsio::wrap_opaque(std::make_unique<ForwardingProgram>(t.program));
          }
          return adv->split(t, rng);
        },
        [adv](std::size_t count, std::size_t len, Rng& rng) {
          return adv->choose_messages(count, len, rng);
        },
        [adv](const std::map<std::string, BitVector>& secrets, const Notes& na, const Notes& nb,
              Tallies& tallies) { adv->audit(secrets, na, nb, tallies); });
  };
  return {"best_possible(" + inner.name + ")", make};
}

// Decision hybrid chain -------------------------------------------------------

HybridReport hybrid_chain_decision(const GameConfig& config, const AdversaryFactory& adversary) {
  HybridReport report;
  for (auto h : {DecisionHybrid::H0, DecisionHybrid::H1, DecisionHybrid::H2, DecisionHybrid::H3}) {
    GameConfig c = config;
    c.game = GameId::CP_DECISION;
    c.hybrid = h;
    auto r = run_game(c, adversary);
    if (!r.failures.empty()) throw EquivalenceFailure(r.failures.front());
    if (auto it = r.tallies.find("audit_pass"); it != r.tallies.end()) report.audits += it->second;
    report.hybrids.push_back(std::move(r));
  }
  GameConfig t = decision_cp_config(config.prf_in, config.prf_out);
  t.scheme = config.scheme;
  t.trials = config.trials;
  t.seed = config.seed;
  t.workers = config.workers;
  t.rigged = config.rigged;
  report.terminal =
      run_game(t, reduction_decision_cp(adversary, config.prf_in, config.prf_out));
  return report;
}

}  // namespace qsilab::games
