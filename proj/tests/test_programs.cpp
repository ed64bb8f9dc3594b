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


#include <catch_amalgamated.hpp>

#include "qsilab/programs.hpp"
#include "testutil.hpp"

namespace qsilab::test_programs {

using f2::BitMatrix;
using f2::BitVector;
using namespace programs;

static BitVector bits(const char* s) { return BitVector::from_string(s); }

static BitVector out(ProgramDescriptor& p, const BitVector& x, Rng& rng) {
  const auto v = p.evaluate(x, rng).value;
  REQUIRE(v.has_value());
  return *v;
}

TEST_CASE("point functions") {
  Rng rng(41);
  auto single = make_point({bits("101")}, 3);
  CHECK(single->kind() == Kind::Point);
  for (const auto& x : qsio::full_domain(3)) {
    CHECK(out(*single, x, rng) == BitVector::from_uint(x == bits("101") ? 1 : 0, 1));
  }
  auto empty = make_point({}, 3);
  for (const auto& x : qsio::full_domain(3)) CHECK(out(*empty, x, rng).is_zero());
  auto full = make_point({bits("00"), bits("01"), bits("10"), bits("11")}, 2);
  for (const auto& x : qsio::full_domain(2)) CHECK(out(*full, x, rng) == bits("1"));
  CHECK_THROWS_AS(make_point({bits("10")}, 3), f2::DimensionError);
}

TEST_CASE("coset pair and the first-difference relabeling") {
  const auto t = BitMatrix::from_strings({"100", "010"});
  const auto [x0, x1] = coset_pair(t, bits("10"));
  CHECK(x0 == bits("100"));
  CHECK(x1 == bits("101"));
  CHECK(first_difference(x0, x1) + 1 == 3);
  CHECK(x_of(false, x0, x1) == bits("100"));
  CHECK(x_of(true, x0, x1) == bits("101"));
  // Selection is by bit value, not by position in the pair.
  for (bool c : {false, true}) CHECK(x_of(c, x1, x0) == x_of(c, x0, x1));
  CHECK_THROWS_AS(coset_pair(BitMatrix::from_strings({"100", "100"}), bits("10")),
                  ue::ParameterError);

  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const auto tt = f2::sample_rank_constrained(5, 6, std::nullopt, 5, rng);
    const auto w = BitVector::random(5, rng);
    const auto [a, b] = coset_pair(tt, w);
    CHECK(f2::matvec(tt, a) == w);
    CHECK(f2::matvec(tt, b) == w);
    CHECK(a < b);
  }
}

// Decision hybrids at in_len 8 over paper cUE parameters at lambda = 23.
struct DecisionSetup {
  crypto::GgmKey key;
  BitVector xa, xb;
  ue::KeyTestedCue scheme;
};

static DecisionSetup decision_setup(Rng& rng) {
  auto key = crypto::GgmKey::generate(8, 4, rng);
  return {key, BitVector::random(8, rng), BitVector::random(8, rng),
          ue::compile_key_testing_cue(ue::SchemeParams::paper_cue(23), 8)};
}

TEST_CASE("P[f punctured, Enc(f(xA), f(xB))] implements f") {
  Rng rng(43);
  for (int trial = 0; trial < 3; ++trial) {
    auto s = decision_setup(rng);
    const auto f = ggm_function(s.key);
    const auto punct = punctured_function(crypto::ggm_puncture(s.key, {s.xa, s.xb}));
    auto sigma = s.scheme.encrypt(s.xa, s.xb, *f(s.xa), *f(s.xb), rng);
    auto p = make_patched(punct, s.scheme, std::move(sigma));
    CHECK(p->kind() == Kind::Patched);
    CHECK(out(*p, s.xa, rng) == *f(s.xa));
    CHECK(out(*p, s.xb, rng) == *f(s.xb));
    auto plain = make_plain(f);
    const auto rep = qsio::functional_equiv(*p, *plain, qsio::full_domain(8), rng);
    CHECK(rep.equal);
  }
}

TEST_CASE("P with a non-key input falls through to g") {
  Rng rng(44);
  auto s = decision_setup(rng);
  const auto f = ggm_function(s.key);
  auto sigma = s.scheme.encrypt(s.xa, s.xb, bits("1111"), bits("0000"), rng);
  auto p = make_patched(f, s.scheme, std::move(sigma));
  auto z = s.xa;
  z.flip(0);
  if (z == s.xb) z.flip(1);
  CHECK(out(*p, z, rng) == *f(z));
  if (s.xa != s.xb) {
    CHECK(out(*p, s.xa, rng) == bits("1111"));
    CHECK(out(*p, s.xb, rng) == bits("0000"));
  }
}

TEST_CASE("tilde-patched program matches the patched program on the whole domain") {
  Rng rng(45);
  for (int trial = 0; trial < 3; ++trial) {
    auto s = decision_setup(rng);
    const auto f = ggm_function(s.key);
    const auto xta = BitVector::random(8, rng);
    const auto xtb = BitVector::random(8, rng);
    auto tilde = make_tilde_patched(f, s.scheme, s.scheme.encrypt(s.xa, s.xb, xta, xtb, rng));
    CHECK(tilde->kind() == Kind::TildePatched);
    if (s.xa != s.xb) CHECK(out(*tilde, s.xa, rng) == *f(xta));
    const auto punct = punctured_function(crypto::ggm_puncture(s.key, {s.xa, s.xb}));
    auto patched =
        make_patched(punct, s.scheme, s.scheme.encrypt(s.xa, s.xb, *f(xta), *f(xtb), rng));
    CHECK(qsio::functional_equiv(*tilde, *patched, qsio::full_domain(8), rng).equal);
  }
}

TEST_CASE("search-patched program") {
  Rng rng(46);
  const auto scheme =
      ue::compile_key_testing(ue::SchemeParams::toy_ue(6, 2, ue::PadMode::Prg), 8);
  const auto key = crypto::GgmKey::generate(8, 8, rng);
  const auto f = ggm_function(key);
  const auto x = BitVector::random(8, rng);
  SECTION("honest ciphertext") {
    auto p = make_search_patched(f, scheme, scheme.encrypt(x, search_message(key, 8), rng), 8);
    CHECK(out(*p, x, rng) == *f(x));
    auto z = x;
    z.flip(3);
    const auto e = p->evaluate(z, rng);
    CHECK(e.exact);
    CHECK(e.value == f(z));
    auto plain = make_plain(f);
    CHECK(qsio::functional_equiv(*p, *plain, qsio::full_domain(8), rng).equal);
  }
  SECTION("random message") {
    std::size_t refused = 0;
    const std::size_t trials = 300;
    const std::size_t len = search_message(key, 8).size();
    for (std::size_t t = 0; t < trials; ++t) {
      auto p = make_search_patched(f, scheme, scheme.encrypt(x, BitVector::random(len, rng), rng), 8);
      if (!p->evaluate(x, rng).value) ++refused;
    }
    // Refusal probability is at least 1 - 2^-8.
    CHECK(static_cast<double>(refused) / trials >= 1.0 - 1.0 / 256 - 3 * std::sqrt(0.004 / trials));
  }
  SECTION("well-prefixed garbage is refused") {
    auto m = BitVector(8);
    m.append(BitVector::from_string("1"));
    auto p = make_search_patched(f, scheme, scheme.encrypt(x, m, rng), 8);
    CHECK_FALSE(p->evaluate(x, rng).value.has_value());
  }
}

TEST_CASE("P_T,Enc(sk;c) equals the point function at x(c)") {
  Rng rng(47);
  const std::size_t lambda = 4;
  const auto scheme = point_coset_scheme(lambda);
  for (int trial = 0; trial < 8; ++trial) {
    const auto t = f2::sample_rank_constrained(lambda, lambda + 1, std::nullopt, lambda, rng);
    const auto sk = BitVector::random(lambda, rng);
    const bool c = random_bit(rng);
    auto p = make_point_coset(t, scheme, scheme.encrypt(sk, BitVector::from_uint(c, 1), rng));
    const auto [x0, x1] = coset_pair(t, sk);
    auto delta = make_point({x_of(c, x0, x1)}, lambda + 1);
    CHECK(qsio::functional_equiv(*p, *delta, qsio::full_domain(lambda + 1), rng).equal);
    for (const auto& z : qsio::full_domain(lambda + 1)) {
      if (f2::matvec(t, z) != sk) CHECK(out(*p, z, rng).is_zero());
    }
  }
}

}  // namespace qsilab::test_programs
