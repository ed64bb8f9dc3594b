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
#include <functional>
#include <set>
#include <string>

#include "qsilab/crypto.hpp"

namespace qsilab::test_crypto {

using f2::BitVector;

static BitVector bits(const char* s) { return BitVector::from_string(s); }

// Frozen from tools/prg_vectors.py (hashlib BLAKE2b + cryptography ChaCha20).
TEST_CASE("default expander matches reference vectors") {
  CHECK(crypto::chacha_expand(bits("1")).to_string() == "11");
  CHECK(crypto::chacha_expand(bits("0110")).to_string() == "01111011");
  CHECK(crypto::chacha_expand(bits("10110011")).to_string() == "1000111110001101");
  CHECK(crypto::chacha_expand(bits("1111111111111111")).to_string() ==
        "11001001011111001011101111110001");
  CHECK(crypto::chacha_expand(bits("00000000000000001")).to_string() ==
        "0001000100100110110100101100110111");
}

TEST_CASE("prg_stretch") {
  const auto seed = bits("10110011");
  CHECK(crypto::prg_stretch(seed, 3).to_string() == "101");
  CHECK(crypto::prg_stretch(seed, 8) == seed);
  CHECK(crypto::prg_stretch(seed, 0).empty());
  CHECK(crypto::prg_stretch(seed, 40).to_string() == "1000110101110100000101010110011010101101");
  CHECK(crypto::prg_stretch(bits("1"), 9).to_string() == "111111111");
  CHECK_THROWS(crypto::prg_stretch(BitVector(), 3));
}

TEST_CASE("prg_stretch determinism and seed sensitivity") {
  Rng rng(31);
  std::size_t differing = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto a = BitVector::random(16, rng);
    auto b = BitVector::random(16, rng);
    if (a == b) b.flip(0);
    CHECK(crypto::prg_stretch(a, 64) == crypto::prg_stretch(a, 64));
    differing += crypto::prg_stretch(a, 64) != crypto::prg_stretch(b, 64);
  }
  CHECK(differing >= 1);
  CHECK(differing == 1000);
}

TEST_CASE("prg_stretch is prefix-consistent within each regime") {
  Rng rng(32);
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + t % 20;
    const auto s = BitVector::random(k, rng);
    const auto longest = crypto::prg_stretch(s, 5 * k + 3);
    for (std::size_t n = k + 1; n < longest.size(); ++n) {
      REQUIRE(crypto::prg_stretch(s, n) == longest.slice(0, n));
    }
    for (std::size_t n = 0; n <= k; ++n) REQUIRE(crypto::prg_stretch(s, n) == s.slice(0, n));
  }
}

TEST_CASE("pluggable expander") {
  // Identity-doubling expander: output is the seed repeated.
  crypto::PrgFamily twice([](const BitVector& s) { return f2::concat(s, s); });
  CHECK(twice.stretch(bits("10"), 6).to_string() == "101010");
  crypto::PrgFamily bad([](const BitVector& s) { return s; });
  CHECK_THROWS_AS(bad.stretch(bits("10"), 6), f2::DimensionError);
}

TEST_CASE("lambda_prime") {
  using crypto::Variant;
  CHECK(crypto::lambda_prime(23, Variant::CUE) == 1);
  CHECK(crypto::lambda_prime(22, Variant::CUE) == 0);
  CHECK(crypto::lambda_prime(67, Variant::CUE) == 2);
  CHECK(crypto::lambda_prime(66, Variant::CUE) == 1);
  CHECK(crypto::lambda_prime(22, Variant::UE) == 1);
  CHECK(crypto::lambda_prime(21, Variant::UE) == 0);
  CHECK(crypto::lambda_prime(1, Variant::UE) == 0);
  // Brute-force oracle over a range.
  for (std::size_t lambda = 1; lambda < 400; ++lambda) {
    for (int extra = 0; extra < 2; ++extra) {
      std::size_t best = 0;
      for (std::size_t k = 0; k < 10; ++k) {
        if (11 * k * k + 11 * k + extra <= lambda) best = k;
      }
      CHECK(crypto::lambda_prime(lambda, extra ? Variant::CUE : Variant::UE) == best);
    }
  }
}

// Recursive definition, written against the expander alone.
static BitVector naive_ggm(const BitVector& seed, const BitVector& x, std::size_t depth,
                           std::size_t out_len) {
  if (depth == x.size()) return crypto::prg_stretch(seed, out_len);
  const auto e = crypto::chacha_expand(seed);
  const auto half = e.slice(x.get(depth) ? seed.size() : 0, seed.size());
  return naive_ggm(half, x, depth + 1, out_len);
}

TEST_CASE("ggm_eval") {
  const crypto::GgmKey key{bits("1100101011110000"), 8, 8};
  CHECK(crypto::ggm_eval(key, bits("00000000")).to_string() == "01111110");
  CHECK(crypto::ggm_eval(key, bits("10000000")).to_string() == "10000000");
  CHECK(crypto::ggm_eval(key, bits("11111111")).to_string() == "01000111");
  CHECK(crypto::ggm_eval(key, bits("01010101")).to_string() == "01110111");
  const crypto::GgmKey root{key.seed, 0, 20};
  CHECK(crypto::ggm_eval(root, BitVector()) == crypto::prg_stretch(key.seed, 20));
  CHECK(crypto::ggm_eval(root, BitVector()).to_string() == "00010010110010011111");
  CHECK_THROWS_AS(crypto::ggm_eval(key, bits("0")), f2::DimensionError);

  Rng rng(33);
  const auto k = crypto::GgmKey::generate(8, 8, rng);
  for (std::uint64_t v = 0; v < 256; ++v) {
    const auto x = BitVector::from_uint(v, 8);
    REQUIRE(crypto::ggm_eval(k, x) == naive_ggm(k.seed, x, 0, 8));
    REQUIRE(crypto::ggm_eval(k, x) == crypto::ggm_eval(k, x));
  }
}

static void check_puncture(const crypto::GgmKey& key, const std::set<BitVector>& s) {
  const auto pk = crypto::ggm_puncture(key, s);
  CHECK(pk.nodes().size() <= s.size() * key.input_len);
  for (std::uint64_t v = 0; v < (1ULL << key.input_len); ++v) {
    const auto x = BitVector::from_uint(v, key.input_len);
    const auto got = pk.eval(x);
    if (s.count(x)) {
      REQUIRE_FALSE(got.has_value());
    } else {
      REQUIRE(got.has_value());
      REQUIRE(*got == crypto::ggm_eval(key, x));
    }
  }
}

TEST_CASE("ggm_puncture") {
  Rng rng(34);
  const auto key = crypto::GgmKey::generate(8, 8, rng);
  SECTION("single point") { check_puncture(key, {BitVector::from_uint(77, 8)}); }
  SECTION("two points") {
    check_puncture(key, {BitVector::from_uint(3, 8), BitVector::from_uint(200, 8)});
    check_puncture(key, {BitVector::from_uint(4, 8), BitVector::from_uint(5, 8)});
  }
  SECTION("full domain at input_len 2") {
    const auto small = crypto::GgmKey::generate(2, 4, rng);
    std::set<BitVector> all;
    for (std::uint64_t v = 0; v < 4; ++v) all.insert(BitVector::from_uint(v, 2));
    const auto pk = crypto::ggm_puncture(small, all);
    CHECK(pk.nodes().empty());
    for (const auto& x : all) CHECK_FALSE(pk.eval(x).has_value());
  }
  SECTION("random sets up to four points, input_len up to 10") {
    for (int t = 0; t < 40; ++t) {
      const std::size_t n = 1 + t % 10;
      const auto k = crypto::GgmKey::generate(n, 6, rng, 12);
      std::set<BitVector> s;
      const std::size_t size = 1 + t % 4;
      while (s.size() < std::min<std::size_t>(size, 1ULL << n)) s.insert(BitVector::random(n, rng));
      check_puncture(k, s);
    }
  }
  CHECK_THROWS(crypto::ggm_puncture(key, {}));
}

TEST_CASE("ggm key serialization and MAC") {
  Rng rng(35);
  const auto key = crypto::GgmKey::generate(8, 8, rng);
  const auto ser = crypto::serialize_ggm_key(key);
  CHECK(ser.size() == 24 + 16);
  CHECK(crypto::parse_ggm_key(ser) == key);
  CHECK_FALSE(crypto::parse_ggm_key(ser.slice(0, 30)).has_value());
  CHECK_FALSE(crypto::parse_ggm_key(BitVector(40)).has_value());

  const auto x = BitVector::random(8, rng);
  CHECK(crypto::mac_verify(key, x, crypto::mac_tag(key, x)));
  auto forged = crypto::mac_tag(key, x);
  forged.flip(0);
  CHECK_FALSE(crypto::mac_verify(key, x, forged));
  CHECK_FALSE(crypto::mac_verify(key, x, std::nullopt));
}

TEST_CASE("pack_bits layout") {
  const auto v = bits("1000000001");
  const auto bytes = crypto::pack_bits(v);
  REQUIRE(bytes.size() == 2);
  CHECK(bytes[0] == 0x01);
  CHECK(bytes[1] == 0x02);
  CHECK(crypto::unpack_bits(bytes, 10) == v);
}

}  // namespace qsilab::test_crypto
