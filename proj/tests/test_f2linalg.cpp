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
#include <map>
#include <set>
#include <vector>

#include "qsilab/f2linalg.hpp"
#include "testutil.hpp"

namespace qsilab::test_f2linalg {

using f2::BitMatrix;
using f2::BitVector;

// Independent oracle: plain int-matrix elimination on the transpose.
static std::size_t oracle_rank(const BitMatrix& m) {
  std::vector<std::vector<int>> a(m.cols(), std::vector<int>(m.rows(), 0));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) a[c][r] = m.get(r, c) ? 1 : 0;
  }
  std::size_t rank = 0;
  const std::size_t width = m.rows();
  for (std::size_t col = 0; col < width && rank < a.size(); ++col) {
    std::size_t p = rank;
    while (p < a.size() && a[p][col] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      if (a[i][col] != 0) {
        for (std::size_t j = 0; j < width; ++j) a[i][j] ^= a[rank][j];
      }
    }
    ++rank;
  }
  return rank;
}

static BitVector oracle_matvec(const BitMatrix& m, const BitVector& x) {
  BitVector out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    int acc = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc ^= (m.get(r, c) && x.get(c)) ? 1 : 0;
    out.set(r, acc != 0);
  }
  return out;
}

TEST_CASE("BitVector basics") {
  const auto v = BitVector::from_string("1011");
  CHECK(v.size() == 4);
  CHECK(v.to_string() == "1011");
  CHECK(v.popcount() == 3);
  CHECK(v.dot(BitVector::from_string("0011")) == false);
  CHECK(v.dot(BitVector::from_string("1000")) == true);
  CHECK((v ^ v).is_zero());
  CHECK(f2::concat(v, BitVector::from_string("01")).to_string() == "101101");
  CHECK(v.slice(1, 2).to_string() == "01");
  CHECK(BitVector::from_uint(5, 4).to_string() == "1010");
  CHECK(BitVector::from_string("0110") < BitVector::from_string("1000"));
  CHECK_THROWS_AS(v ^ BitVector(3), f2::DimensionError);
}

TEST_CASE("BitVector spans word boundaries") {
  Rng rng(11);
  const auto a = BitVector::random(130, rng);
  const auto b = BitVector::random(130, rng);
  int acc = 0;
  for (std::size_t i = 0; i < 130; ++i) acc ^= (a[i] && b[i]) ? 1 : 0;
  CHECK(a.dot(b) == (acc != 0));
  CHECK(BitVector::from_string(a.to_string()) == a);
}

SCENARIO("rank") {
  GIVEN("identity and zero matrices") {
    CHECK(f2::rank(BitMatrix::identity(3)) == 3);
    CHECK(f2::rank(BitMatrix(2, 4)) == 0);
  }
  GIVEN("random matrices") {
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
      const auto m = BitMatrix::random(5, 8, rng);
      CHECK(f2::rank(m) == oracle_rank(m));
      const auto tall = BitMatrix::random(9, 4, rng);
      CHECK(f2::rank(tall) == oracle_rank(tall));
    }
  }
}

SCENARIO("kernel_basis") {
  GIVEN("identity") { CHECK(f2::kernel_basis(BitMatrix::identity(3)).empty()); }
  GIVEN("a 2x3 projection") {
    const auto t = BitMatrix::from_strings({"100", "010"});
    const auto basis = f2::kernel_basis(t);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0].to_string() == "001");
  }
  GIVEN("random matrices") {
    Rng rng(2);
    for (int t = 0; t < 200; ++t) {
      const auto m = BitMatrix::random(1 + t % 7, 1 + t % 11, rng);
      const auto basis = f2::kernel_basis(m);
      CHECK(f2::rank(m) + basis.size() == m.cols());
      for (const auto& b : basis) CHECK(f2::matvec(m, b).is_zero());
      // Basis vectors are independent.
      if (!basis.empty()) CHECK(f2::rank(BitMatrix::from_rows(basis, m.cols())) == basis.size());
    }
  }
}

SCENARIO("solve") {
  GIVEN("identity") {
    const auto b = BitVector::from_string("101");
    CHECK(f2::solve(BitMatrix::identity(3), b) == b);
  }
  GIVEN("an inconsistent system") {
    CHECK_FALSE(f2::solve(BitMatrix(2, 2), BitVector::from_string("10")).has_value());
  }
  GIVEN("random full-rank square systems") {
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
      const auto m = f2::sample_rank_constrained(6, 6, std::nullopt, 6, rng);
      const auto b = BitVector::random(6, rng);
      const auto z = f2::solve(m, b);
      REQUIRE(z.has_value());
      CHECK(oracle_matvec(m, *z) == b);
    }
  }
  GIVEN("random consistent systems with a kernel") {
    Rng rng(4);
    for (int t = 0; t < 200; ++t) {
      const auto m = BitMatrix::random(4, 7, rng);
      const auto b = f2::matvec(m, BitVector::random(7, rng));
      const auto z = f2::solve(m, b);
      REQUIRE(z.has_value());
      CHECK(f2::matvec(m, *z) == b);
      for (const auto& k : f2::kernel_basis(m)) CHECK(f2::matvec(m, *z ^ k) == b);
    }
  }
}

SCENARIO("matvec") {
  Rng rng(5);
  const auto x = BitVector::random(9, rng);
  CHECK(f2::matvec(BitMatrix::identity(9), x) == x);
  const auto u = BitVector::random(9, rng);
  CHECK(f2::matvec(BitMatrix::from_rows({u}, 9), x).get(0) == u.dot(x));
  for (int t = 0; t < 100; ++t) {
    const auto m = BitMatrix::random(7, 70, rng);
    const auto y = BitVector::random(70, rng);
    CHECK(f2::matvec(m, y) == oracle_matvec(m, y));
  }
  CHECK_THROWS_AS(f2::matvec(BitMatrix(2, 3), BitVector(4)), f2::DimensionError);
}

SCENARIO("sample_rank_constrained") {
  Rng rng(6);
  GIVEN("11x12 with a nonzero annihilated vector") {
    std::size_t attempts = 0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t) {
      BitVector d = BitVector::random(12, rng);
      if (d.is_zero()) d.set(0, true);
      const auto s = f2::sample_rank_constrained_counted(11, 12, d, 11, rng);
      attempts += s.attempts;
      REQUIRE(f2::rank(s.matrix) == 11);
      REQUIRE(f2::matvec(s.matrix, d).is_zero());
      if (t < 200) {
        const auto k = f2::kernel_basis(s.matrix);
        REQUIRE(k.size() == 1);
        CHECK(k[0] == d);
      }
    }
    const double acceptance = static_cast<double>(draws) / static_cast<double>(attempts);
    CHECK(acceptance >= 0.2);
  }
  GIVEN("no constraint or a zero vector") {
    const auto m = f2::sample_rank_constrained(11, 12, BitVector(12), 11, rng);
    CHECK(f2::rank(m) == 11);
    CHECK(f2::rank(f2::sample_rank_constrained(3, 5, std::nullopt, 2, rng)) == 2);
  }
  GIVEN("infeasible requests") {
    CHECK_THROWS_AS(f2::sample_rank_constrained(3, 3, BitVector::from_string("100"), 3, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(f2::sample_rank_constrained(2, 3, std::nullopt, 3, rng),
                    std::invalid_argument);
  }
  GIVEN("rank-1 2x3 matrices annihilating (0,0,1)") {
    const auto d = BitVector::from_string("001");
    // Oracle: enumerate every 2x3 matrix and keep the admissible ones.
    std::set<std::string> support;
    for (std::uint64_t bits = 0; bits < 64; ++bits) {
      const auto m = BitMatrix::from_row_major(BitVector::from_uint(bits, 6), 2, 3);
      if (f2::rank(m) == 1 && f2::matvec(m, d).is_zero()) support.insert(m.to_row_major().to_string());
    }
    REQUIRE(support.size() == 9);
    std::map<std::string, std::size_t> counts;
    const std::size_t draws = 100000;
    for (std::size_t t = 0; t < draws; ++t) {
      const auto m = f2::sample_rank_constrained(2, 3, d, 1, rng);
      const auto key = m.to_row_major().to_string();
      REQUIRE(support.count(key) == 1);
      ++counts[key];
    }
    CHECK(test::chi_squared_uniform(counts, support.size(), draws) <
          test::chi_squared_critical(support.size() - 1, 0.001));
  }
}

TEST_CASE("sample_with_parity") {
  Rng rng(7);
  const auto x = BitVector::from_string("0110");
  for (int t = 0; t < 100; ++t) {
    CHECK(f2::sample_with_parity(x, true, rng).dot(x));
    CHECK_FALSE(f2::sample_with_parity(x, false, rng).dot(x));
  }
  CHECK_THROWS_AS(f2::sample_with_parity(BitVector(4), true, rng), std::invalid_argument);
}

}  // namespace qsilab::test_f2linalg
