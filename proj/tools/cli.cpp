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


#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qsilab/glreduce.hpp"
#include "qsilab/qsim/clifford.hpp"
#include "qsilab/qsio.hpp"

#ifndef QSILAB_PRESETS_FILE
#define QSILAB_PRESETS_FILE "config/presets.json"
#endif
#ifndef QSILAB_VERSION
#define QSILAB_VERSION "0.0.0"
#endif

namespace qsilab::cli {

using games::GameConfig;
using games::GameId;
using games::Preset;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

qsim::PauliString pauli_from_index(std::uint64_t v, std::size_t n) {
  return {f2::BitVector::from_uint(v, n), f2::BitVector::from_uint(v >> n, n)};
}

gl::MeasurementFamily random_family(std::size_t m, std::size_t r, Rng& rng) {
  std::vector<gl::BinaryMeasurement> table;
  for (std::size_t u = 0; u < (std::size_t{1} << m); ++u) {
    table.push_back({qsim::haar_unitary(std::size_t{1} << r, rng), uniform_below(r, rng)});
  }
  return gl::MeasurementFamily(m, r, [table](const f2::BitVector& u) {
    return table[u.to_uint()];
  });
}

}  // namespace

// Checks -----------------------------------------------------------------------

CheckVerdict check_twirl(std::size_t qubits, std::size_t instances, std::uint64_t seed) {
  if (qubits != 1 && qubits != 2) throw std::invalid_argument("twirl supports 1 or 2 qubits");
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  const std::uint64_t paulis = std::uint64_t{1} << (2 * qubits);
  double worst = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t a = uniform_below(paulis, rng);
    std::uint64_t b = uniform_below(paulis - 1, rng);
    if (b >= a) ++b;
    const auto psi = qsim::StateVector::random(qubits, rng);
    const auto sum =
        qsim::twirl_sum(qubits, pauli_from_index(a, qubits), pauli_from_index(b, qubits), psi);
    worst = std::max(worst, sum.norm());
  }
  CheckVerdict v;
  v.pass = worst < 1e-10;
  std::ostringstream norm;
  norm << std::scientific << std::setprecision(3) << worst;
  v.summary = "max Frobenius norm " + norm.str() + " over " +
              std::to_string(instances) + " instances";
  v.details = {{"qubits", qubits},
               {"instances", instances},
               {"group_size", qsim::enumerate_cliffords(qubits).size()},
               {"max_frobenius_norm", worst},
               {"threshold", 1e-10},
               {"seconds", seconds_since(start)}};
  return v;
}

CheckVerdict check_gl(std::size_t bits, std::size_t instances, std::size_t runs,
                      std::uint64_t seed) {
  if (bits == 0 || bits > 3) throw std::invalid_argument("gl check supports 1 to 3 bits");
  Rng rng(seed);
  std::size_t outside = 0;
  double worst_sigma = 0;
  Json rows = Json::array();
  for (std::size_t inst = 0; inst < instances; ++inst) {
    const std::size_t m = 1 + inst % bits;
    // A holds qubit 0, B qubit 2; qubit 1 is an untouched environment.
    const auto fa = random_family(m, 1, rng);
    const auto fb = random_family(m, 1, rng);
    const auto joint = qsim::StateVector::random(3, rng);
    const auto x = f2::BitVector::random(m, rng);
    const std::size_t qa[] = {0};
    const std::size_t qb[] = {2};
    const double p = gl::gl_success_formula(fa, fb, joint, x, qa, qb);
    std::size_t hits = 0;
    for (std::size_t r = 0; r < runs; ++r) {
      auto s = joint;
      const auto wa = gl::gl_extract(fa, s, qa, rng);
      const auto wb = gl::gl_extract(fb, s, qb, rng);
      if (wa == x && wb == x) ++hits;
    }
    const double rate = static_cast<double>(hits) / static_cast<double>(runs);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(runs));
    const double dev = std::abs(rate - p);
    const bool ok = dev <= 3 * sigma + 1e-12;
    if (!ok) ++outside;
    if (sigma > 0) worst_sigma = std::max(worst_sigma, dev / sigma);
    rows.push_back({{"bits", m}, {"formula", p}, {"empirical", rate}, {"within_3sigma", ok}});
  }
  CheckVerdict v;
  v.pass = outside == 0;
  v.summary = std::to_string(instances - outside) + "/" + std::to_string(instances) +
              " instances within 3 sigma (worst " + fixed(worst_sigma, 2) + " sigma)";
  v.details = {{"bits", bits},        {"instances", instances}, {"runs", runs},
               {"outside", outside},  {"worst_sigma", worst_sigma}, {"per_instance", rows}};
  return v;
}

CheckVerdict check_hybrid_decision(std::size_t trials, std::uint64_t seed, std::size_t workers) {
  auto c = games::preset(GameId::CP_DECISION, Preset::Toy);
  c.trials = trials;
  c.seed = seed;
  c.workers = workers;
  CheckVerdict v;
  try {
    const auto rep = games::hybrid_chain_decision(c, games::builtin_adversary("random_guess"));
    Json rates = Json::array();
    for (const auto& h : rep.hybrids) rates.push_back(game_result_json(h));
    v.pass = rep.audits == 3 * trials;
    v.summary = std::to_string(rep.audits) + " equivalence audits passed; hybrid rates";
    for (const auto& h : rep.hybrids) v.summary += " " + fixed(h.win_rate);
    v.summary += ", terminal " + fixed(rep.terminal.win_rate);
    v.details = {{"trials", trials},
                 {"audits", rep.audits},
                 {"hybrids", rates},
                 {"terminal", game_result_json(rep.terminal)}};
  } catch (const games::EquivalenceFailure& e) {
    v.pass = false;
    v.summary = std::string("equivalence failure: ") + e.what();
    v.details = {{"trials", trials}, {"failure", e.what()}};
  }
  return v;
}

CheckVerdict check_otp_correctness(std::size_t cliffords, std::size_t samples,
                                   std::uint64_t seed) {
  Rng rng(seed);
  std::size_t evaluations = 0;
  std::size_t wrong = 0;
  // Every one-bit function, pads of 1 and 2 qubits, two rounds of queries.
  for (std::uint64_t table = 0; table < 4; ++table) {
    const auto impl = qsio::make_truth_table_implementation(
        {f2::BitVector::from_uint(table & 1, 1), f2::BitVector::from_uint(table >> 1, 1)}, 1);
    for (std::size_t pad = 1; pad <= 2; ++pad) {
      for (std::size_t s = 0; s < cliffords; ++s) {
        auto art = qsio::clifford_otp_obfuscate(impl, pad, rng);
        for (int round = 0; round < 2; ++round) {
          for (std::uint64_t x = 0; x < 2; ++x) {
            const auto e = art.evaluate(f2::BitVector::from_uint(x, 1), rng);
            ++evaluations;
            if (!e.value || e.value->to_uint() != ((table >> x) & 1)) ++wrong;
          }
        }
      }
    }
  }
  const auto impl = qsio::make_truth_table_implementation(
      {f2::BitVector::from_string("0"), f2::BitVector::from_string("1")}, 1);
  const double distance = qsio::otp_mixing_distance(impl, 1, samples, rng);
  CheckVerdict v;
  v.pass = wrong == 0 && distance < 0.02;
  v.summary = std::to_string(wrong) + " wrong of " + std::to_string(evaluations) +
              " evaluations; mixing distance " + fixed(distance) + " over " +
              std::to_string(samples) + " samples";
  v.details = {{"cliffords", cliffords},   {"evaluations", evaluations}, {"wrong", wrong},
               {"samples", samples},       {"mixing_distance", distance},
               {"distance_threshold", 0.02}};
  return v;
}

CheckVerdict check_purified_gap(std::size_t queries, std::size_t instances, std::uint64_t seed) {
  Rng rng(seed);
  // One pad qubit in the toy.
  const double pad_bound = 0.5;
  double worst_weight = 0;
  bool ok = true;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto u = qsim::haar_unitary(16, rng);
    const double w = qsio::pauli_branch_weight(u, i % 2 == 1);
    worst_weight = std::max(worst_weight, w);
    ok = ok && w <= pad_bound + 1e-9;
  }
  Json gaps = Json::array();
  const std::size_t per_q = std::max<std::size_t>(1, instances / 10);
  for (std::size_t q = 1; q <= queries; ++q) {
    double worst = 0;
    for (std::size_t i = 0; i < per_q; ++i) {
      worst = std::max(worst, qsio::purified_hybrid_gap(q, qsim::haar_unitary(16, rng), i % 2 == 1));
    }
    const double bound = static_cast<double>(q * (q + 1)) * pad_bound;
    ok = ok && worst <= bound + 1e-9;
    gaps.push_back({{"queries", q}, {"max_gap", worst}, {"bound", bound}, {"instances", per_q}});
  }
  CheckVerdict v;
  v.pass = ok;
  v.summary = "max Pauli-branch weight " + fixed(worst_weight, 6) + " (bound 0.5); gaps within " +
              "q(q+1)/2 for q <= " + std::to_string(queries);
  v.details = {{"instances", instances},
               {"max_branch_weight", worst_weight},
               {"branch_bound", pad_bound},
               {"gaps", gaps}};
  return v;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"twirl", "gl", "hybrid-decision",
                                                 "otp-correctness", "purified-gap"};
  return names;
}

// Presets -------------------------------------------------------------------

std::filesystem::path default_presets_path() { return QSILAB_PRESETS_FILE; }

Json load_presets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open presets file " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw std::runtime_error("malformed presets file: " + std::string(e.what()));
  }
}

namespace {

Json scheme_json(const ue::SchemeParams& p) {
  return {{"lambda", p.lambda},
          {"qubits", p.qubits},
          {"rows", p.rows},
          {"pad", p.pad == ue::PadMode::Prg ? "prg" : "direct"}};
}

ue::SchemeParams scheme_from(const Json& j) {
  ue::SchemeParams p;
  p.lambda = j.at("lambda").get<std::size_t>();
  p.qubits = j.at("qubits").get<std::size_t>();
  p.rows = j.at("rows").get<std::size_t>();
  const auto pad = j.at("pad").get<std::string>();
  if (pad != "prg" && pad != "direct") throw std::runtime_error("unknown pad mode " + pad);
  p.pad = pad == "prg" ? ue::PadMode::Prg : ue::PadMode::Direct;
  return p;
}

}  // namespace

Json config_to_preset_json(const GameConfig& c) {
  switch (c.game) {
    case GameId::RAND:
    case GameId::SEARCH: return {{"n", c.n}, {"lambda", c.lambda}};
    case GameId::UE:
    case GameId::CUE: return {{"scheme", scheme_json(c.scheme)}, {"msg_len", c.msg_len}};
    case GameId::CP_DECISION:
      return {{"scheme", scheme_json(c.scheme)}, {"prf_in", c.prf_in}, {"prf_out", c.prf_out}};
    case GameId::CP_SEARCH: return {{"prf_in", c.prf_in}, {"prf_out", c.prf_out}};
    case GameId::CP_PTFUNC: return {{"prf_in", c.prf_in}};
  }
  return Json::object();
}

GameConfig config_from_presets(const Json& presets, GameId id, Preset p) {
  try {
    const auto& j = presets.at("presets").at(p == Preset::Paper ? "paper" : "toy").at(games::to_string(id));
    GameConfig c;
    c.game = id;
    if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
    if (j.contains("lambda")) c.lambda = j.at("lambda").get<std::size_t>();
    if (j.contains("scheme")) c.scheme = scheme_from(j.at("scheme"));
    if (j.contains("msg_len")) c.msg_len = j.at("msg_len").get<std::size_t>();
    if (j.contains("prf_in")) c.prf_in = j.at("prf_in").get<std::size_t>();
    if (j.contains("prf_out")) c.prf_out = j.at("prf_out").get<std::size_t>();
    if (id == GameId::CP_PTFUNC) c.prf_out = 1;
    return c;
  } catch (const Json::exception& e) {
    throw std::runtime_error("malformed presets file: " + std::string(e.what()));
  }
}

// Results -------------------------------------------------------------------

Json game_result_json(const games::GameResult& r) {
  Json tallies = Json::object();
  for (const auto& [k, v] : r.tallies) tallies[k] = v;
  return {{"wins", r.wins},
          {"trials", r.trials},
          {"win_rate", r.win_rate},
          {"interval", {{"lo", r.interval.lo}, {"hi", r.interval.hi}}},
          {"tallies", tallies},
          {"violations", r.violations},
          {"failures", r.failures}};
}

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

games::AdversaryFactory adversary_by_name(const std::string& name) {
  if (name == "rigged_oracle") return games::rigged_oracle();
  if (name == "perfect_predictor") return games::perfect_predictor();
  return games::builtin_adversary(name);
}

const std::vector<std::string>& reduction_names() {
  static const std::vector<std::string> names = {"search-guess", "rand-to-search", "cue-to-rand",
                                                 "search-cp",    "ptfunc",         "decision-cp",
                                                 "best-possible"};
  return names;
}

// Command line ----------------------------------------------------------------

namespace {

struct CommonOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  std::string out;
  std::string expect;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--trials", o.trials, "Number of trials")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "64-bit master seed");
  app->add_option("--workers", o.workers, "Worker threads (default: QSILAB_WORKERS or all cores)");
  app->add_option("--out", o.out, "Write the JSON record here");
  app->add_option("--expect", o.expect, "Assert LO:HI bounds on the win rate");
}

struct Bounds {
  double lo = 0;
  double hi = 1;
};

std::optional<Bounds> parse_expect(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--expect", "expected LO:HI");
  try {
    return Bounds{std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--expect", "expected LO:HI");
  }
}

Json base_record(Json spec) {
  return {{"schema_version", kSchemaVersion},
          {"artifact_version", QSILAB_VERSION},
          {"spec", std::move(spec)}};
}

int emit(Json record, double wall, std::size_t workers, bool pass, const std::string& out_path,
         std::ostream& out, std::ostream& err) {
  record["run"] = {{"timestamp", timestamp_now()},
                   {"wall_clock_seconds", wall},
                   {"workers", workers}};
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) {
      err << "cannot write " << out_path << "\n";
      return 2;
    }
    f << record.dump(2) << "\n";
  }
  out << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

int finish_game(const std::string& label, Json spec, const games::GameResult& r,
                const std::optional<Bounds>& expect, const CommonOptions& o, std::ostream& out,
                std::ostream& err) {
  bool pass = true;
  Json result = {{"kind", "game"}};
  result.update(game_result_json(r));
  if (expect) {
    pass = r.win_rate >= expect->lo && r.win_rate <= expect->hi;
    result["expect"] = {{"lo", expect->lo}, {"hi", expect->hi}};
  } else {
    result["expect"] = nullptr;
  }
  result["pass"] = pass;
  out << label << ": " << r.wins << "/" << r.trials << " wins, rate " << fixed(r.win_rate)
      << " [" << fixed(r.interval.lo) << ", " << fixed(r.interval.hi) << "]";
  if (r.violations > 0) out << ", " << r.violations << " protocol violations";
  out << "\n";
  for (const auto& [k, v] : r.tallies) out << "  " << k << " = " << v << "\n";
  auto record = base_record(std::move(spec));
  record["result"] = std::move(result);
  return emit(std::move(record), r.wall_clock_seconds, r.workers, pass, o.out, out, err);
}

Json params_json(const GameConfig& c) {
  auto j = config_to_preset_json(c);
  j["rigged"] = c.rigged;
  if (c.game == GameId::CP_DECISION) j["hybrid"] = static_cast<int>(c.hybrid);
  if (c.key_tested_len) j["key_tested_len"] = *c.key_tested_len;
  if (c.ue_bit_variant) j["ue_bit_variant"] = true;
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qsilab: unclonable-primitive experiments and checks"};
  app.require_subcommand(1);
  std::string presets_path = default_presets_path().string();
  app.add_option("--presets", presets_path, "Presets file");

  // game
  auto* game = app.add_subcommand("game", "Run a security game against an adversary");
  CommonOptions go;
  std::string game_id;
  std::string adversary = "random_guess";
  std::string preset_name = "toy";
  std::optional<std::size_t> n, lambda, msg_len, prf_in, prf_out;
  int hybrid = 0;
  bool rigged = false;
  game->add_option("id", game_id, "Game id")->required();
  game->add_option("--adversary", adversary, "Adversary name");
  game->add_option("--preset", preset_name, "Parameter preset")
      ->check(CLI::IsMember({"toy", "paper"}));
  game->add_option("--n", n);
  game->add_option("--lambda", lambda);
  game->add_option("--msg-len", msg_len);
  game->add_option("--prf-in", prf_in);
  game->add_option("--prf-out", prf_out);
  game->add_option("--hybrid", hybrid, "Decision hybrid 0-3")->check(CLI::Range(0, 3));
  game->add_flag("--rigged", rigged, "Test mode: disclose challenger secrets");
  add_common(game, go);

  // reduction
  auto* red = app.add_subcommand("reduction", "Run a reduction wrapped around an inner adversary");
  CommonOptions ro;
  std::string red_name;
  std::string inner = "random_guess";
  std::string outer_game = "CP_SEARCH";
  bool red_rigged = false;
  std::size_t red_n = 1, red_lambda = 1, red_prf_in = 8, red_prf_out = 8;
  red->add_option("name", red_name, "Reduction")->required()->check(CLI::IsMember(reduction_names()));
  red->add_option("--inner", inner, "Inner adversary");
  red->add_option("--game", outer_game, "Outer game for best-possible");
  red->add_option("--n", red_n);
  red->add_option("--lambda", red_lambda);
  red->add_option("--prf-in", red_prf_in);
  red->add_option("--prf-out", red_prf_out);
  red->add_flag("--rigged", red_rigged);
  add_common(red, ro);

  // check
  auto* check = app.add_subcommand("check", "Run a numerical check");
  check->require_subcommand(1);
  std::uint64_t check_seed = 1;
  std::string check_out;
  check->add_option("--seed", check_seed);
  check->add_option("--out", check_out);
  std::size_t tw_qubits = 1;
  std::optional<std::size_t> tw_instances;
  auto* twirl = check->add_subcommand("twirl", "Clifford twirl of distinct Pauli pairs");
  twirl->add_option("--qubits", tw_qubits)->check(CLI::IsMember({1, 2}));
  twirl->add_option("--instances", tw_instances);
  std::size_t gl_bits = 3, gl_instances = 50, gl_runs = 10000;
  auto* glc = check->add_subcommand("gl", "Simultaneous extraction formula vs Monte Carlo");
  glc->add_option("--bits", gl_bits)->check(CLI::Range(1, 3));
  glc->add_option("--instances", gl_instances);
  glc->add_option("--runs", gl_runs);
  std::size_t hy_trials = 100, hy_workers = 0;
  auto* hyc = check->add_subcommand("hybrid-decision", "Decision hybrid chain with audits");
  hyc->add_option("--trials", hy_trials)->check(CLI::PositiveNumber);
  hyc->add_option("--workers", hy_workers);
  std::size_t otp_cliffords = 100, otp_samples = 10000;
  auto* otp = check->add_subcommand("otp-correctness", "Clifford one-time pad correctness");
  otp->add_option("--cliffords", otp_cliffords);
  otp->add_option("--samples", otp_samples);
  std::size_t pg_queries = 3, pg_instances = 100;
  auto* pg = check->add_subcommand("purified-gap", "Purified two-oracle gap and Pauli branch");
  pg->add_option("--queries", pg_queries)->check(CLI::Range(1, 3));
  pg->add_option("--instances", pg_instances);

  for (auto* sub : check->get_subcommands({})) sub->fallthrough();
  game->fallthrough();
  red->fallthrough();

  // list
  auto* list = app.add_subcommand("list", "List games, adversaries, reductions and checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      out << "games:";
      for (auto id : games::all_games()) out << " " << games::to_string(id);
      out << "\nadversaries:";
      for (const auto& a : games::builtin_adversary_names()) out << " " << a;
      out << " rigged_oracle perfect_predictor\nreductions:";
      for (const auto& r : reduction_names()) out << " " << r;
      out << "\nchecks:";
      for (const auto& c : check_names()) out << " " << c;
      out << "\n";
      return 0;
    }

    if (game->parsed()) {
      const auto id = games::parse_game_id(game_id);
      if (!id) {
        err << "unknown game: " << game_id << "\n";
        return 2;
      }
      const auto expect = parse_expect(go.expect);
      const auto presets = load_presets(presets_path);
      auto c = config_from_presets(presets, *id, preset_name == "paper" ? Preset::Paper : Preset::Toy);
      if (n) c.n = *n;
      if (lambda) c.lambda = *lambda;
      if (msg_len) c.msg_len = *msg_len;
      if (prf_in) c.prf_in = *prf_in;
      if (prf_out) c.prf_out = *prf_out;
      c.hybrid = static_cast<games::DecisionHybrid>(hybrid);
      c.rigged = rigged;
      c.trials = go.trials;
      c.seed = go.seed;
      c.workers = go.workers;
      const auto adv = adversary_by_name(adversary);
      const auto r = games::run_game(c, adv);
      Json spec = {{"subcommand", "game"}, {"game", games::to_string(*id)},
                   {"adversary", adversary}, {"preset", preset_name},
                   {"trials", c.trials},     {"seed", c.seed},
                   {"params", params_json(c)}};
      return finish_game(games::to_string(*id) + " " + adversary, std::move(spec), r, expect, go,
                         out, err);
    }

    if (red->parsed()) {
      const auto expect = parse_expect(ro.expect);
      const auto in = adversary_by_name(inner);
      GameConfig c;
      games::AdversaryFactory adv;
      if (red_name == "search-guess") {
        c = games::search_guess_config(red_n, red_lambda);
        adv = games::reduction_search_guess(in, red_n, red_lambda);
      } else if (red_name == "rand-to-search") {
        c = games::preset(GameId::SEARCH, Preset::Paper);
        c.n = red_n;
        c.lambda = red_lambda;
        adv = games::reduction_rand_to_search(in);
      } else if (red_name == "cue-to-rand") {
        const auto cue = ue::SchemeParams::paper_cue(23);
        c = games::cue_to_rand_config(cue);
        adv = games::reduction_cue_to_rand(in, cue, 8);
      } else if (red_name == "search-cp") {
        c = games::search_cp_config(red_prf_in, red_prf_out);
        adv = games::reduction_search_cp(in, red_prf_in, red_prf_out);
      } else if (red_name == "ptfunc") {
        c = games::ptfunc_config(red_lambda);
        adv = games::reduction_ptfunc(in);
      } else if (red_name == "decision-cp") {
        c = games::decision_cp_config(red_prf_in, red_prf_out);
        adv = games::reduction_decision_cp(in, red_prf_in, red_prf_out);
      } else {
        const auto id = games::parse_game_id(outer_game);
        if (!id) {
          err << "unknown game: " << outer_game << "\n";
          return 2;
        }
        c = games::preset(*id, Preset::Toy);
        adv = games::best_possible_wrapper(in);
      }
      c.rigged = red_rigged;
      c.trials = ro.trials;
      c.seed = ro.seed;
      c.workers = ro.workers;
      const auto r = games::run_game(c, adv);
      Json spec = {{"subcommand", "reduction"}, {"reduction", red_name},
                   {"inner", inner},            {"game", games::to_string(c.game)},
                   {"trials", c.trials},        {"seed", c.seed},
                   {"params", params_json(c)}};
      return finish_game(red_name + " " + inner, std::move(spec), r, expect, ro, out, err);
    }

    // check
    const auto start = std::chrono::steady_clock::now();
    CheckVerdict v;
    std::string name;
    Json params;
    std::size_t workers = 1;
    if (twirl->parsed()) {
      name = "twirl";
      const std::size_t inst = tw_instances.value_or(tw_qubits == 1 ? 1000 : 100);
      params = {{"qubits", tw_qubits}, {"instances", inst}};
      v = check_twirl(tw_qubits, inst, check_seed);
    } else if (glc->parsed()) {
      name = "gl";
      params = {{"bits", gl_bits}, {"instances", gl_instances}, {"runs", gl_runs}};
      v = check_gl(gl_bits, gl_instances, gl_runs, check_seed);
    } else if (hyc->parsed()) {
      name = "hybrid-decision";
      workers = hy_workers ? hy_workers : games::default_workers();
      params = {{"trials", hy_trials}};
      v = check_hybrid_decision(hy_trials, check_seed, hy_workers);
    } else if (otp->parsed()) {
      name = "otp-correctness";
      params = {{"cliffords", otp_cliffords}, {"samples", otp_samples}};
      v = check_otp_correctness(otp_cliffords, otp_samples, check_seed);
    } else {
      name = "purified-gap";
      params = {{"queries", pg_queries}, {"instances", pg_instances}};
      v = check_purified_gap(pg_queries, pg_instances, check_seed);
    }
    out << "check " << name << ": " << v.summary << "\n";
    auto record = base_record({{"subcommand", "check"}, {"check", name}, {"seed", check_seed},
                               {"params", params}});
    record["result"] = {{"kind", "check"}, {"pass", v.pass}, {"details", v.details}};
    return emit(std::move(record), seconds_since(start), workers, v.pass, check_out, out, err);
  } catch (const games::UnknownAdversary& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const games::UnsupportedGame& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    err << e.what() << "\n";
    return 2;
  }
}

}  // namespace qsilab::cli
