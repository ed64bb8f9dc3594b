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


#include "qsilab/games.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>

#include "games_detail.hpp"
#include "qsilab/conjugate.hpp"
#include "qsilab/programs.hpp"

namespace qsilab::games {

std::string to_string(GameId id) {
  switch (id) {
    case GameId::RAND: return "RAND";
    case GameId::SEARCH: return "SEARCH";
    case GameId::UE: return "UE";
    case GameId::CUE: return "CUE";
    case GameId::CP_DECISION: return "CP_DECISION";
    case GameId::CP_SEARCH: return "CP_SEARCH";
    case GameId::CP_PTFUNC: return "CP_PTFUNC";
  }
  return "?";
}

const std::vector<GameId>& all_games() {
  static const std::vector<GameId> ids = {GameId::RAND,        GameId::SEARCH,    GameId::UE,
                                          GameId::CUE,         GameId::CP_DECISION,
                                          GameId::CP_SEARCH,   GameId::CP_PTFUNC};
  return ids;
}

std::optional<GameId> parse_game_id(std::string_view name) {
  std::string upper(name);
  for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  std::replace(upper.begin(), upper.end(), '-', '_');
  for (auto id : all_games()) {
    if (to_string(id) == upper) return id;
  }
  return std::nullopt;
}

GameConfig preset(GameId id, Preset p) {
  const bool paper = p == Preset::Paper;
  GameConfig c;
  c.game = id;
  switch (id) {
    case GameId::RAND:
      c.n = 1;
      c.lambda = 1;
      break;
    case GameId::SEARCH:
      c.n = paper ? 1 : 0;
      c.lambda = paper ? 1 : 2;
      break;
    case GameId::UE:
      c.scheme = paper ? ue::SchemeParams::paper_ue(22)
                       : ue::SchemeParams::toy_ue(4, 2, ue::PadMode::Prg);
      c.msg_len = paper ? 8 : 4;
      break;
    case GameId::CUE:
      c.scheme = paper ? ue::SchemeParams::paper_cue(23)
                       : ue::SchemeParams::toy_cue(4, 2, ue::PadMode::Prg);
      c.msg_len = paper ? 8 : 4;
      break;
    case GameId::CP_DECISION:
      c.scheme = ue::SchemeParams::paper_cue(23);
      c.prf_in = 8;
      c.prf_out = 4;
      break;
    case GameId::CP_SEARCH:
      c.prf_in = 8;
      c.prf_out = 8;
      break;
    case GameId::CP_PTFUNC:
      c.prf_in = paper ? 8 : 5;
      c.prf_out = 1;
      break;
  }
  return c;
}

// Transmission and parties ---------------------------------------------------

PartyRegisters::PartyRegisters(StateVector& state, std::vector<std::size_t> qubits,
                               std::shared_ptr<qsio::OpaqueProgram> program)
    : state_(state), qubits_(std::move(qubits)), program_(std::move(program)) {}

std::vector<std::size_t> PartyRegisters::globals(std::span<const std::size_t> local) const {
  std::vector<std::size_t> out;
  out.reserve(local.size());
  for (auto q : local) {
    if (q >= qubits_.size()) throw ProtocolViolation("party touched a qubit outside its register");
    out.push_back(qubits_[q]);
  }
  return out;
}

void PartyRegisters::apply(const Matrix& u, std::span<const std::size_t> local) {
  const auto g = globals(local);
  qsim::apply_unitary(state_, u, g);
}

BitVector PartyRegisters::measure(std::span<const std::size_t> local, Rng& rng) {
  const auto g = globals(local);
  return qsim::measure(state_, g, rng).outcome;
}

BitVector PartyRegisters::measure_all(Rng& rng) {
  if (qubits_.empty()) return BitVector(0);
  return qsim::measure(state_, qubits_, rng).outcome;
}

std::size_t PartyRegisters::add_ancilla() {
  qubits_.push_back(state_.append_zeros(1));
  return qubits_.size() - 1;
}

void PartyRegisters::operate(
    const std::function<void(StateVector&, std::span<const std::size_t>)>& fn) {
  fn(state_, qubits_);
}

BitVector PartyRegisters::extract(const gl::MeasurementFamily& family, Rng& rng) {
  return gl::gl_extract(family, state_, qubits_, rng);
}

void PartyRegisters::note(const std::string& key, std::string value) {
  notes_.emplace_back(key, std::move(value));
}

std::optional<gl::BinaryMeasurement> PartyStrategy::coherent(const Challenge&, std::size_t) const {
  return std::nullopt;
}

std::optional<BitVector> CoherentStrategy::answer(const Challenge& c, PartyRegisters& regs,
                                                  Rng& rng) {
  const auto m = coherent(c, regs.size());
  if (!m) throw ProtocolViolation("coherent strategy without a coherent form");
  std::vector<std::size_t> all(regs.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  regs.apply(m->unitary, all);
  const std::size_t out[] = {m->output};
  return regs.measure(out, rng);
}

std::vector<BitVector> Adversary::choose_messages(std::size_t count, std::size_t suggested_len,
                                                  Rng& rng) {
  std::vector<BitVector> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(BitVector::random(suggested_len, rng));
  return out;
}

void Adversary::audit(const std::map<std::string, BitVector>&, const Notes&, const Notes&,
                      Tallies&) const {}

// Statistics ------------------------------------------------------------------

WilsonInterval wilson_interval(std::size_t wins, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(wins) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  // The endpoints are exact at the extremes.
  return {wins == 0 ? 0.0 : std::max(0.0, center - half),
          wins == trials ? 1.0 : std::min(1.0, center + half)};
}

bool GameResult::same_outcome(const GameResult& o) const {
  return wins == o.wins && trials == o.trials && win_rate == o.win_rate &&
         interval.lo == o.interval.lo && interval.hi == o.interval.hi && tallies == o.tallies &&
         violations == o.violations && failures == o.failures && transcripts == o.transcripts;
}

std::size_t default_workers() {
  if (const char* env = std::getenv("QSILAB_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

// Trial machinery ------------------------------------------------------------

namespace {

using detail::bit;

struct TrialOutcome {
  bool win = false;
  bool violation = false;
  Tallies tallies;
  std::optional<std::string> failure;
  std::vector<std::string> transcript;
};

class Trial {
 public:
  Trial(const GameConfig& cfg, Adversary& adv, std::size_t index)
      : cfg(cfg), adv(adv), ch(derive_seed(cfg.seed, 3 * index)),
        arng(derive_seed(cfg.seed, 3 * index + 1)), audit_rng(derive_seed(cfg.seed, 3 * index + 2)) {}

  const GameConfig& cfg;
  Adversary& adv;
  Rng ch;         // challenger
  Rng arng;       // adversary and parties
  Rng audit_rng;  // equivalence audits
  TrialOutcome out;
  std::map<std::string, BitVector> secrets;

  BitVector sample(const std::string& name, std::size_t len) {
    auto v = BitVector::random(len, ch);
    log(name, v.to_string());
    return v;
  }
  BitMatrix sample(const std::string& name, std::size_t rows, std::size_t cols) {
    auto m = BitMatrix::random(rows, cols, ch);
    log(name, m.to_row_major().to_string());
    return m;
  }
  bool coin(const std::string& name) {
    const bool b = random_bit(ch);
    log(name, b ? "1" : "0");
    return b;
  }
  void log(const std::string& name, const std::string& value) {
    if (cfg.transcript) out.transcript.push_back(name + "=" + value);
  }
  void fail(const std::string& what) {
    ++out.tallies["audit_fail"];
    if (!out.failure) out.failure = what;
  }

  struct Parties {
    std::unique_ptr<PartyStrategy> a, b;
    std::unique_ptr<PartyRegisters> ra, rb;
  };

  Parties open(Transmission& t) {
    if (cfg.rigged) secrets_to_rigged(t);
    Split s = adv.split(t, arng);
    if (!s.party_a || !s.party_b) throw ProtocolViolation("missing party strategy");
    std::set<std::size_t> seen;
    for (const auto* list : {&s.a_qubits, &s.b_qubits}) {
      for (auto q : *list) {
        if (q >= t.state.num_qubits()) throw ProtocolViolation("split names a missing qubit");
        if (!seen.insert(q).second) throw ProtocolViolation("registers overlap");
      }
    }
    if (s.program_owner == ProgramOwner::SharedRigged && !cfg.rigged) {
      throw ProtocolViolation("shared program outside rigged mode");
    }
    const bool a_has = s.program_owner == ProgramOwner::A ||
                       s.program_owner == ProgramOwner::SharedRigged;
    const bool b_has = s.program_owner == ProgramOwner::B ||
                       s.program_owner == ProgramOwner::SharedRigged;
    Parties p;
    p.a = std::move(s.party_a);
    p.b = std::move(s.party_b);
    p.ra = std::make_unique<PartyRegisters>(t.state, std::move(s.a_qubits),
                                            a_has ? t.program : nullptr);
    p.rb = std::make_unique<PartyRegisters>(t.state, std::move(s.b_qubits),
                                            b_has ? t.program : nullptr);
    t.program.reset();
    return p;
  }

  std::optional<BitVector> ask(PartyStrategy& party, PartyRegisters& regs, const Challenge& c,
                               bool allow_refusal) {
    auto ans = party.answer(c, regs, arng);
    if (!ans) {
      if (!allow_refusal) throw ProtocolViolation("refusal where a bit was required");
      return ans;
    }
    if (ans->size() != c.answer_len) throw ProtocolViolation("answer has the wrong length");
    return ans;
  }

  bool ask_bit(PartyStrategy& party, PartyRegisters& regs, const Challenge& c) {
    return ask(party, regs, c, false)->get(0);
  }

  void finish(bool win, Parties& p) {
    out.win = win;
    secrets["win"] = BitVector::from_uint(win ? 1 : 0, 1);
    adv.audit(secrets, p.ra->notes(), p.rb->notes(), out.tallies);
  }

  std::map<std::string, BitVector> rigged_view;

 private:
  void secrets_to_rigged(Transmission& t) { t.rigged = rigged_view; }
};

void play_rand(Trial& tr) {
  const auto& c = tr.cfg;
  const std::size_t len = 10 * c.n + c.lambda;
  const auto x = tr.sample("x", len);
  const auto theta = tr.sample("theta", len);
  const auto u = tr.sample("U", c.n, len);
  const auto v = tr.sample("V", c.n, len);
  const auto r0 = tr.sample("r0", c.n);
  const auto s0 = tr.sample("s0", c.n);
  const auto r1 = f2::matvec(u, x);
  const auto s1 = f2::matvec(v, x);
  const bool a = tr.coin("a");
  const bool b = tr.coin("b");

  Transmission t;
  t.game = GameId::RAND;
  t.state = conj::encode_bb84(x, theta);
  t.bits["r"] = a ? r1 : r0;
  t.bits["s"] = b ? s1 : s0;
  tr.secrets = {{"x", x}, {"theta", theta}, {"a", bit(a)}, {"b", bit(b)}, {"Ux", r1}, {"Vx", s1}};
  tr.rigged_view = {{"x", x}, {"theta", theta}};

  auto p = tr.open(t);
  const bool ap = tr.ask_bit(*p.a, *p.ra, {{{"theta", theta}}, {{"M", u}}, 1});
  const bool bp = tr.ask_bit(*p.b, *p.rb, {{{"theta", theta}}, {{"M", v}}, 1});
  if (ap == a) ++tr.out.tallies["a_correct"];
  if (bp == b) ++tr.out.tallies["b_correct"];
  tr.finish(ap == a && bp == b, p);
}

void play_search(Trial& tr) {
  const auto& c = tr.cfg;
  const std::size_t len = 10 * c.n + c.lambda;
  const auto x = tr.sample("x", len);
  const auto theta = tr.sample("theta", len);
  const auto u = tr.sample("U", c.n, len);
  const auto v = tr.sample("V", c.n, len);

  Transmission t;
  t.game = GameId::SEARCH;
  t.state = conj::encode_bb84(x, theta);
  t.bits["r"] = f2::matvec(u, x);
  t.bits["s"] = f2::matvec(v, x);
  tr.secrets = {{"x", x}, {"theta", theta}};
  tr.rigged_view = {{"x", x}, {"theta", theta}};

  auto p = tr.open(t);
  const auto xa = tr.ask(*p.a, *p.ra, {{{"theta", theta}}, {{"M", u}}, len}, true);
  const auto xb = tr.ask(*p.b, *p.rb, {{{"theta", theta}}, {{"M", v}}, len}, true);
  const bool wa = xa == x;
  const bool wb = xb == x;
  if (wa) ++tr.out.tallies["a_correct"];
  if (wb) ++tr.out.tallies["b_correct"];
  tr.finish(wa && wb, p);
}

std::size_t key_len_of(const GameConfig& c) { return c.key_tested_len.value_or(c.scheme.lambda); }

void play_ue(Trial& tr) {
  const auto& c = tr.cfg;
  const auto sk = tr.sample("sk", key_len_of(c));
  BitVector plaintext;
  bool chal = false;
  Transmission t;
  t.game = GameId::UE;
  if (c.ue_bit_variant) {
    chal = tr.coin("c");
    plaintext = bit(chal);
  } else {
    auto m = tr.adv.choose_messages(1, c.msg_len, tr.arng).at(0);
    tr.log("m", m.to_string());
    const auto m0 = tr.sample("m0", m.size());
    chal = tr.coin("c");
    plaintext = chal ? m : m0;
    t.chosen = {m};
  }
  if (c.key_tested_len) {
    const ue::KeyTestedUe scheme(c.scheme, *c.key_tested_len);
    auto ct = scheme.encrypt(sk, plaintext, tr.ch);
    t.state = std::move(ct.inner.state);
    ct.inner.state = StateVector(0);
    t.ciphertext = std::move(ct);
  } else {
    auto ct = ue::ue_encrypt(c.scheme, sk, plaintext, tr.ch);
    t.state = std::move(ct.state);
    ct.state = StateVector(0);
    t.ciphertext = std::move(ct);
  }
  tr.secrets = {{"sk", sk}, {"c", bit(chal)}, {"plaintext", plaintext}};
  tr.rigged_view = tr.secrets;

  auto p = tr.open(t);
  const bool ap = tr.ask_bit(*p.a, *p.ra, {{{"sk", sk}}, {}, 1});
  const bool bp = tr.ask_bit(*p.b, *p.rb, {{{"sk", sk}}, {}, 1});
  if (ap == chal) ++tr.out.tallies["a_correct"];
  if (bp == chal) ++tr.out.tallies["b_correct"];
  tr.finish(ap == chal && bp == chal, p);
}

void play_cue(Trial& tr) {
  const auto& c = tr.cfg;
  const auto sk_a = tr.sample("sk_A", key_len_of(c));
  const auto sk_b = tr.sample("sk_B", key_len_of(c));
  auto msgs = tr.adv.choose_messages(2, c.msg_len, tr.arng);
  if (msgs.size() != 2) throw ProtocolViolation("two messages required");
  tr.log("m_A", msgs[0].to_string());
  tr.log("m_B", msgs[1].to_string());
  const auto ma0 = tr.sample("m_A0", msgs[0].size());
  const auto mb0 = tr.sample("m_B0", msgs[1].size());
  const bool a = tr.coin("a");
  const bool b = tr.coin("b");
  const auto& pa = a ? msgs[0] : ma0;
  const auto& pb = b ? msgs[1] : mb0;

  Transmission t;
  t.game = GameId::CUE;
  t.chosen = msgs;
  if (c.key_tested_len) {
    const ue::KeyTestedCue scheme(c.scheme, *c.key_tested_len);
    auto ct = scheme.encrypt(sk_a, sk_b, pa, pb, tr.ch);
    t.state = std::move(ct.inner.state);
    ct.inner.state = StateVector(0);
    t.ciphertext = std::move(ct);
  } else {
    auto ct = ue::cue_encrypt(c.scheme, sk_a, sk_b, pa, pb, tr.ch);
    t.state = std::move(ct.state);
    ct.state = StateVector(0);
    t.ciphertext = std::move(ct);
  }
  tr.secrets = {{"sk_A", sk_a}, {"sk_B", sk_b}, {"a", bit(a)}, {"b", bit(b)}};
  tr.rigged_view = tr.secrets;

  auto p = tr.open(t);
  const bool ap = tr.ask_bit(*p.a, *p.ra, {{{"sk", sk_a}}, {}, 1});
  const bool bp = tr.ask_bit(*p.b, *p.rb, {{{"sk", sk_b}}, {}, 1});
  if (ap == a) ++tr.out.tallies["a_correct"];
  if (bp == b) ++tr.out.tallies["b_correct"];
  tr.finish(ap == a && bp == b, p);
}

std::unique_ptr<qsio::QuantumImplementation> decision_program(Trial& tr, const crypto::GgmKey& f,
                                                              const BitVector& xa,
                                                              const BitVector& xb,
                                                              const BitVector& xta,
                                                              const BitVector& xtb) {
  const auto& c = tr.cfg;
  const auto fn = programs::ggm_function(f);
  if (c.hybrid == DecisionHybrid::H0) return programs::make_plain(fn);

  const auto scheme = ue::compile_key_testing_cue(c.scheme, c.prf_in);
  const auto punct = programs::punctured_function(crypto::ggm_puncture(f, {xa, xb}));
  const auto domain = qsio::full_domain(c.prf_in);
  auto witness = [](const qsio::EquivalenceReport& r) {
    return r.witness ? r.witness->to_string() : std::string("?");
  };
  switch (c.hybrid) {
    case DecisionHybrid::H1: {
      auto p = programs::make_patched(punct, scheme,
                                      scheme.encrypt(xa, xb, *fn(xa), *fn(xb), tr.ch));
      auto plain = programs::make_plain(fn);
      const auto rep = qsio::functional_equiv(*p, *plain, domain, tr.audit_rng);
      if (rep.equal) {
        ++tr.out.tallies["audit_pass"];
      } else {
        tr.fail("H1 program differs from f at " + witness(rep));
      }
      return p;
    }
    case DecisionHybrid::H2: {
      auto p = programs::make_patched(punct, scheme,
                                      scheme.encrypt(xa, xb, *fn(xta), *fn(xtb), tr.ch));
      // Honest evaluation away from the punctured points matches H1.
      auto h1 = programs::make_patched(punct, scheme,
                                       scheme.encrypt(xa, xb, *fn(xa), *fn(xb), tr.audit_rng));
      bool same = true;
      for (const auto& z : domain) {
        if (z == xa || z == xb) continue;
        if (p->evaluate(z, tr.audit_rng).value != h1->evaluate(z, tr.audit_rng).value) {
          tr.fail("H2 and H1 differ off the punctured set at " + z.to_string());
          same = false;
          break;
        }
      }
      if (same) ++tr.out.tallies["audit_pass"];
      return p;
    }
    case DecisionHybrid::H3: {
      auto p = programs::make_tilde_patched(fn, scheme, scheme.encrypt(xa, xb, xta, xtb, tr.ch));
      auto h2 = programs::make_patched(
          punct, scheme, scheme.encrypt(xa, xb, *fn(xta), *fn(xtb), tr.audit_rng));
      const auto rep = qsio::functional_equiv(*p, *h2, domain, tr.audit_rng);
      if (rep.equal) {
        ++tr.out.tallies["audit_pass"];
      } else {
        tr.fail("H3 program differs from its H2 counterpart at " + witness(rep));
      }
      return p;
    }
    case DecisionHybrid::H0: break;
  }
  return programs::make_plain(fn);
}

void play_cp_decision(Trial& tr) {
  const auto& c = tr.cfg;
  const auto f = crypto::GgmKey::generate(c.prf_in, c.prf_out, tr.ch);
  tr.log("f", crypto::serialize_ggm_key(f).to_string());
  const auto xa = tr.sample("x_A", c.prf_in);
  const auto xb = tr.sample("x_B", c.prf_in);
  const auto xa_alt = tr.sample("x_A'", c.prf_in);
  const auto xb_alt = tr.sample("x_B'", c.prf_in);
  const bool tilde = c.hybrid >= DecisionHybrid::H2;
  const auto xta = tilde ? tr.sample("xt_A", c.prf_in) : xa;
  const auto xtb = tilde ? tr.sample("xt_B", c.prf_in) : xb;
  const auto ya0 = crypto::ggm_eval(f, xa_alt);
  const auto yb0 = crypto::ggm_eval(f, xb_alt);
  const auto ya1 = crypto::ggm_eval(f, xta);
  const auto yb1 = crypto::ggm_eval(f, xtb);

  Transmission t;
  t.game = GameId::CP_DECISION;
  t.program = qsio::wrap_opaque(decision_program(tr, f, xa, xb, xta, xtb));
  tr.rigged_view = {{"f", crypto::serialize_ggm_key(f)}, {"x_A", xa}, {"x_B", xb}};

  auto p = tr.open(t);
  const bool a = tr.coin("a");
  const bool b = tr.coin("b");
  tr.secrets = {{"a", bit(a)}, {"b", bit(b)}, {"x_A", xa}, {"x_B", xb}};
  const bool ap = tr.ask_bit(*p.a, *p.ra, {{{"x", xa}, {"y", a ? ya1 : ya0}}, {}, 1});
  const bool bp = tr.ask_bit(*p.b, *p.rb, {{{"x", xb}, {"y", b ? yb1 : yb0}}, {}, 1});
  if (ap == a) ++tr.out.tallies["a_correct"];
  if (bp == b) ++tr.out.tallies["b_correct"];
  tr.finish(ap == a && bp == b, p);
}

void play_cp_search(Trial& tr) {
  const auto& c = tr.cfg;
  const auto f = crypto::GgmKey::generate(c.prf_in, c.prf_out, tr.ch);
  tr.log("f", crypto::serialize_ggm_key(f).to_string());
  Transmission t;
  t.game = GameId::CP_SEARCH;
  t.program = qsio::wrap_opaque(programs::make_plain(programs::ggm_function(f)));
  tr.rigged_view = {{"f", crypto::serialize_ggm_key(f)}};

  auto p = tr.open(t);
  const auto x = tr.sample("x", c.prf_in);
  tr.secrets = {{"x", x}};
  const auto ya = tr.ask(*p.a, *p.ra, {{{"x", x}}, {}, c.prf_out}, true);
  const auto yb = tr.ask(*p.b, *p.rb, {{{"x", x}}, {}, c.prf_out}, true);
  const bool wa = crypto::mac_verify(f, x, ya);
  const bool wb = crypto::mac_verify(f, x, yb);
  if (wa) ++tr.out.tallies["a_correct"];
  if (wb) ++tr.out.tallies["b_correct"];
  tr.finish(wa && wb, p);
}

void play_cp_ptfunc(Trial& tr) {
  const auto& c = tr.cfg;
  const auto x0 = tr.sample("x0", c.prf_in);
  const auto x1 = tr.sample("x1", c.prf_in);
  const bool chal = tr.coin("c");
  Transmission t;
  t.game = GameId::CP_PTFUNC;
  t.program = qsio::wrap_opaque(programs::make_point({chal ? x1 : x0}, c.prf_in));
  tr.secrets = {{"c", bit(chal)}, {"x0", x0}, {"x1", x1}};
  tr.rigged_view = tr.secrets;

  auto p = tr.open(t);
  const Challenge ch{{{"x0", x0}, {"x1", x1}}, {}, 1};
  const bool ap = tr.ask_bit(*p.a, *p.ra, ch);
  const bool bp = tr.ask_bit(*p.b, *p.rb, ch);
  if (ap == chal) ++tr.out.tallies["a_correct"];
  if (bp == chal) ++tr.out.tallies["b_correct"];
  tr.finish(ap == chal && bp == chal, p);
}

TrialOutcome run_trial(const GameConfig& cfg, const AdversaryFactory& factory, std::size_t index) {
  auto adv = factory.make(cfg);
  Trial tr(cfg, *adv, index);
  try {
    switch (cfg.game) {
      case GameId::RAND: play_rand(tr); break;
      case GameId::SEARCH: play_search(tr); break;
      case GameId::UE: play_ue(tr); break;
      case GameId::CUE: play_cue(tr); break;
      case GameId::CP_DECISION: play_cp_decision(tr); break;
      case GameId::CP_SEARCH: play_cp_search(tr); break;
      case GameId::CP_PTFUNC: play_cp_ptfunc(tr); break;
    }
  } catch (const ProtocolViolation& e) {
    tr.out.win = false;
    tr.out.violation = true;
    ++tr.out.tallies["violation"];
  }
  return std::move(tr.out);
}

void validate(const GameConfig& c) {
  if (c.trials == 0) throw std::invalid_argument("trials must be positive");
  switch (c.game) {
    case GameId::RAND:
    case GameId::SEARCH:
      if (10 * c.n + c.lambda == 0 || 10 * c.n + c.lambda > 20) {
        throw std::invalid_argument("10n + lambda must be in [1, 20]");
      }
      break;
    case GameId::UE:
    case GameId::CUE:
      if (c.scheme.qubits == 0 || c.scheme.qubits > 20) {
        throw std::invalid_argument("scheme qubits must be in [1, 20]");
      }
      break;
    case GameId::CP_DECISION:
    case GameId::CP_SEARCH:
    case GameId::CP_PTFUNC:
      if (c.prf_in == 0 || c.prf_in > 16) throw std::invalid_argument("prf_in must be in [1, 16]");
      break;
  }
}

}  // namespace

GameResult run_game(const GameConfig& config, const AdversaryFactory& adversary) {
  validate(config);
  (void)adversary.make(config);  // surfaces UnsupportedGame before any trial
  const auto start = std::chrono::steady_clock::now();
  const std::size_t workers =
      std::min(config.trials, config.workers ? config.workers : default_workers());
  std::vector<TrialOutcome> outcomes(config.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < config.trials; i = next++) {
      try {
        outcomes[i] = run_trial(config, adversary, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = config.trials;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  GameResult r;
  r.trials = config.trials;
  r.workers = workers;
  for (auto& o : outcomes) {
    if (o.win) ++r.wins;
    if (o.violation) ++r.violations;
    for (const auto& [k, v] : o.tallies) r.tallies[k] += v;
    if (o.failure && r.failures.size() < 8) r.failures.push_back(*o.failure);
    if (config.transcript) r.transcripts.push_back(std::move(o.transcript));
  }
  r.win_rate = static_cast<double>(r.wins) / static_cast<double>(r.trials);
  r.interval = wilson_interval(r.wins, r.trials);
  r.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace qsilab::games
