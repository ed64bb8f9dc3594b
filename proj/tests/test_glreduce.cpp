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
#include <cmath>
#include <map>
#include <numeric>

#include "qsilab/glreduce.hpp"
#include "testutil.hpp"

namespace qsilab::test_glreduce {

using f2::BitMatrix;
using f2::BitVector;
using gl::BinaryMeasurement;
using gl::MeasurementFamily;
using qsim::Matrix;
using qsim::StateVector;

static MeasurementFamily random_family(std::size_t m, std::size_t r, Rng& rng) {
  std::vector<BinaryMeasurement> table;
  for (std::size_t u = 0; u < (std::size_t{1} << m); ++u) {
    table.push_back({qsim::haar_unitary(std::size_t{1} << r, rng), uniform_below(r, rng)});
  }
  return MeasurementFamily(m, r, [table](const BitVector& u) { return table[u.to_uint()]; });
}

// Register: n qubits holding x, then one output qubit. V_u xors u.x (and
// `flip`) into the output.
static MeasurementFamily parity_family(std::size_t n, bool flip) {
  return MeasurementFamily(n, n + 1, [n, flip](const BitVector& u) {
    const std::size_t d = std::size_t{1} << (n + 1);
    Matrix v = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
      const auto x = BitVector::from_uint(i & ((std::size_t{1} << n) - 1), n);
      const bool bit = u.dot(x) != flip;
      const std::size_t j = bit ? (i ^ (std::size_t{1} << n)) : i;
      v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return BinaryMeasurement{v, n};
  });
}

static MeasurementFamily constant_zero_family(std::size_t m) {
  return MeasurementFamily(m, 1, [](const BitVector&) {
    return BinaryMeasurement{Matrix::Identity(2, 2), 0};
  });
}

// Literal extraction circuit: control register in |+>^m above the state,
// controlled (V_u^dagger Z V_u), Hadamard on each control qubit, then the
// control marginal.
static std::vector<double> literal_gl(const MeasurementFamily& f, const StateVector& psi,
                                      std::span<const std::size_t> qubits) {
  const std::size_t m = f.index_len();
  const std::size_t count = std::size_t{1} << m;
  const std::size_t base = psi.num_qubits();
  std::vector<qsim::Complex> amps(psi.dim() * count);
  for (std::size_t u = 0; u < count; ++u) {
    StateVector branch = psi;
    const auto meas = f.realize(BitVector::from_uint(u, m));
    qsim::apply_unitary(branch, meas.unitary, qubits);
    const std::size_t out[] = {qubits[meas.output]};
    qsim::apply_unitary(branch, qsim::gates::Z(), out);
    qsim::apply_unitary(branch, meas.unitary.adjoint(), qubits);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
      amps[u * psi.dim() + i] = branch.amplitude(i) / std::sqrt(static_cast<double>(count));
    }
  }
  auto big = StateVector::from_amplitudes(std::move(amps));
  for (std::size_t c = 0; c < m; ++c) {
    const std::size_t q[] = {base + c};
    qsim::apply_unitary(big, qsim::gates::H(), q);
  }
  std::vector<double> p(count, 0.0);
  for (std::size_t i = 0; i < big.dim(); ++i) p[i >> base] += std::norm(big.amplitude(i));
  return p;
}

TEST_CASE("extraction distribution matches the literal circuit") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 1 + static_cast<std::size_t>(t % 3);
    const auto fam = random_family(m, 2, rng);
    const auto psi = StateVector::random(3, rng);
    const std::size_t qubits[] = {2, 0};
    const auto expected = literal_gl(fam, psi, qubits);
    const auto got = gl::gl_distribution(fam, psi, qubits);
    REQUIRE(got.size() == expected.size());
    for (std::size_t w = 0; w < got.size(); ++w) CHECK(got[w] == Catch::Approx(expected[w]).margin(1e-10));
    CHECK(std::accumulate(got.begin(), got.end(), 0.0) == Catch::Approx(1.0));
  }
}

TEST_CASE("perfect and affine predictors extract x") {
  Rng rng(32);
  for (bool flip : {false, true}) {
    const auto fam = parity_family(3, flip);
    for (std::uint64_t xv = 0; xv < 8; ++xv) {
      const auto x = BitVector::from_uint(xv, 3);
      auto bits = x;
      bits.append(BitVector(1));
      auto psi = StateVector::basis(bits);
      const std::size_t qubits[] = {0, 1, 2, 3};
      CHECK(gl::gl_extract(fam, psi, qubits, rng) == x);
      CHECK(gl::gl_success_formula(fam, fam, qsim::tensor(psi, psi), x, qubits,
                                   std::array<std::size_t, 4>{4, 5, 6, 7}) ==
            Catch::Approx(1.0));
    }
  }
}

TEST_CASE("constant predictor never yields a nonzero x") {
  const auto fam = constant_zero_family(3);
  const StateVector psi(1);
  const std::size_t q[] = {0};
  const auto p = gl::gl_distribution(fam, psi, q);
  CHECK(p[0] == Catch::Approx(1.0));
  for (std::size_t w = 1; w < 8; ++w) CHECK(p[w] == Catch::Approx(0.0).margin(1e-12));
  Rng rng(33);
  const auto other = random_family(3, 1, rng);
  const auto joint = StateVector::random(2, rng);
  const std::size_t qa[] = {0};
  const std::size_t qb[] = {1};
  CHECK(gl::gl_success_formula(fam, other, joint, BitVector::from_string("101"), qa, qb) ==
        Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("simultaneous formula equals the sequential exact probability") {
  Rng rng(34);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 1 + static_cast<std::size_t>(t % 3);
    const auto fa = random_family(m, 2, rng);
    const auto fb = random_family(m, 1, rng);
    const auto joint = StateVector::random(3, rng);
    const auto x = BitVector::random(m, rng);
    const std::size_t qa[] = {0, 1};
    const std::size_t qb[] = {2};
    // Exact: P[A gets x] * P[B gets x | A got x].
    const auto pa = gl::gl_distribution(fa, joint, qa);
    StateVector post = joint;
    qsim::apply_matrix(post, gl::gl_kraus(fa)[x.to_uint()], qa);
    double exact = 0;
    if (pa[x.to_uint()] > 1e-14) {
      post.renormalize();
      exact = pa[x.to_uint()] * gl::gl_distribution(fb, post, qb)[x.to_uint()];
    }
    CHECK(gl::gl_success_formula(fa, fb, joint, x, qa, qb) ==
          Catch::Approx(exact).margin(1e-12));
  }
}

TEST_CASE("simultaneous formula against Monte Carlo extraction") {
  Rng rng(35);
  std::size_t outside = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t m = 1 + static_cast<std::size_t>(inst % 3);
    const auto fa = random_family(m, 1, rng);
    const auto fb = random_family(m, 1, rng);
    const auto joint = StateVector::random(3, rng);
    const auto x = BitVector::random(m, rng);
    const std::size_t qa[] = {0};
    const std::size_t qb[] = {2};
    const double p = gl::gl_success_formula(fa, fb, joint, x, qa, qb);
    std::size_t hits = 0;
    const std::size_t runs = 10000;
    for (std::size_t r = 0; r < runs; ++r) {
      StateVector s = joint;
      const auto wa = gl::gl_extract(fa, s, qa, rng);
      const auto wb = gl::gl_extract(fb, s, qb, rng);
      if (wa == x && wb == x) ++hits;
    }
    if (!test::within_three_sigma(hits, runs, p)) ++outside;
  }
  CHECK(outside == 0);
}

TEST_CASE("extraction is covariant under a local change of basis") {
  Rng rng(36);
  for (int t = 0; t < 10; ++t) {
    const auto fam = random_family(2, 2, rng);
    const Matrix w = qsim::haar_unitary(4, rng);
    const MeasurementFamily rotated(2, 2, [&fam, w](const BitVector& u) {
      auto meas = fam.realize(u);
      meas.unitary = meas.unitary * w.adjoint();
      return meas;
    });
    const auto psi = StateVector::random(3, rng);
    const std::size_t q[] = {1, 2};
    StateVector moved = psi;
    qsim::apply_unitary(moved, w, q);
    const auto a = gl::gl_distribution(fam, psi, q);
    const auto b = gl::gl_distribution(rotated, moved, q);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == Catch::Approx(b[i]).margin(1e-10));
  }
}

TEST_CASE("operator absolute value") {
  Rng rng(37);
  const auto fam = random_family(3, 2, rng);
  const auto m = gl::gl_bias_operator(fam, BitVector::from_string("110"));
  const auto a = gl::hermitian_abs(m);
  CHECK((a * a).isApprox(m * m, 1e-10));
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  const auto psi = StateVector::random(2, rng);
  const std::size_t q[] = {0, 1};
  StateVector v = psi;
  qsim::apply_matrix(v, m, q);
  const auto e = psi.as_eigen();
  CHECK(v.norm() * v.norm() == Catch::Approx(e.dot(a * a * e).real()));
}

SCENARIO("sample_Di") {
  Rng rng(38);
  const auto x = BitVector::from_string("0110");
  const auto r = BitVector::from_string("101");
  GIVEN("i = 0") {
    const auto u = gl::sample_Di(0, x, r, 4, rng);
    CHECK(u.rows() == 3);
    CHECK(u.cols() == 4);
  }
  GIVEN("i = n") {
    for (int t = 0; t < 500; ++t) CHECK(f2::matvec(gl::sample_Di(3, x, r, 4, rng), x) == r);
  }
  GIVEN("an infeasible row") {
    CHECK_THROWS_AS(gl::sample_Di(1, BitVector(4), r, 4, rng), std::invalid_argument);
    CHECK_NOTHROW(gl::sample_Di(0, BitVector(4), r, 4, rng));
    CHECK_THROWS_AS(gl::sample_Di(4, x, r, 4, rng), std::invalid_argument);
  }
  GIVEN("row-wise uniformity within each constraint class") {
    std::map<std::string, std::size_t> row0, row1, row2;
    const std::size_t draws = 10000;
    for (std::size_t t = 0; t < draws; ++t) {
      const auto u = gl::sample_Di(2, x, r, 4, rng);
      ++row0[u.row(0).to_string()];
      ++row1[u.row(1).to_string()];
      ++row2[u.row(2).to_string()];
    }
    // Enumerated classes: 8 vectors with u.x = 1, 8 with u.x = 0, 16 free.
    for (const auto& [k, n] : row0) CHECK(BitVector::from_string(k).dot(x));
    for (const auto& [k, n] : row1) CHECK_FALSE(BitVector::from_string(k).dot(x));
    CHECK(test::chi_squared_uniform(row0, 8, draws) < test::chi_squared_critical(7, 0.001));
    CHECK(test::chi_squared_uniform(row1, 8, draws) < test::chi_squared_critical(7, 0.001));
    CHECK(test::chi_squared_uniform(row2, 16, draws) < test::chi_squared_critical(15, 0.001));
  }
}

static Matrix random_effect(Rng& rng) {
  const Matrix u = qsim::haar_unitary(2, rng);
  Eigen::VectorXcd d(2);
  d << uniform_unit(rng), uniform_unit(rng);
  return u * d.asDiagonal() * u.adjoint();
}

SCENARIO("simult_bound_check") {
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix zero = Matrix::Zero(2, 2);
  Rng rng(39);
  GIVEN("P = Q = I") {
    const auto c = gl::simult_bound_check({{StateVector::random(2, rng), id, id}}, 0.5);
    CHECK(c.premise == Catch::Approx(1.0));
    CHECK(c.premise_holds);
    CHECK(c.conclusion == Catch::Approx(1.0));
    CHECK(c.ok());
  }
  GIVEN("P = Q = 0") {
    const auto c = gl::simult_bound_check({{StateVector::random(2, rng), zero, zero}}, 0.01);
    CHECK(c.premise == Catch::Approx(0.25));
    CHECK_FALSE(c.premise_holds);
    CHECK(c.ok());
  }
  GIVEN("operators outside [0, 1]") {
    CHECK_THROWS_AS(gl::simult_bound_check({{StateVector(2), 2.0 * id, id}}, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(gl::simult_bound_check({{StateVector(2), id, qsim::gates::Z()}}, 0.1),
                    std::invalid_argument);
  }
  GIVEN("random two-qubit instances") {
    std::size_t tight = 0;
    for (int t = 0; t < 1000; ++t) {
      std::vector<gl::SimultInstance> set;
      for (int k = 0; k < 1 + t % 4; ++k) {
        set.push_back({StateVector::random(2, rng), random_effect(rng), random_effect(rng)});
      }
      // Largest eps the premise allows.
      const double eps = gl::simult_bound_check(set, 0.0).premise - 0.5;
      if (eps <= 0) continue;
      const auto c = gl::simult_bound_check(set, eps);
      REQUIRE(c.premise_holds);
      CHECK(c.ok());
      ++tight;
    }
    CHECK(tight > 0);
  }
}

}  // namespace qsilab::test_glreduce
