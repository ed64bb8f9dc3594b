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
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "qsilab/qsim/clifford.hpp"
#include "qsilab/qsim/statevector.hpp"
#include "testutil.hpp"

namespace qsilab::test_qsim {

using namespace qsim;
using f2::BitVector;

static const std::size_t kQ0[] = {0};
static const std::size_t kQ1[] = {1};
static const std::size_t kQ01[] = {0, 1};

static bool equal_up_to_phase(const Matrix& a, const Matrix& b, double tol = 1e-9) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  Eigen::Index r = 0, c = 0;
  a.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) < 1e-12) return false;
  const Complex ratio = b(r, c) / a(r, c);
  return (a * ratio - b).cwiseAbs().maxCoeff() < tol;
}

// Phase-normalized text key of a unitary: divide by the phase of the first
// entry of largest magnitude, then round.
static std::string phase_class(const Matrix& u) {
  Eigen::Index best_r = 0, best_c = 0;
  double best = -1;
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      if (std::abs(u(r, c)) > best + 1e-9) {
        best = std::abs(u(r, c));
        best_r = r;
        best_c = c;
      }
    }
  }
  const Complex ph = u(best_r, best_c) / std::abs(u(best_r, best_c));
  std::ostringstream os;
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      const Complex v = u(r, c) / ph;
      os << std::lround(v.real() * 1e6) << ',' << std::lround(v.imag() * 1e6) << ';';
    }
  }
  return os.str();
}

// Oracle: closure of the dense generators modulo phase.
static std::set<std::string> clifford_closure(const std::vector<Matrix>& gens) {
  const auto dim = gens.front().rows();
  std::set<std::string> seen;
  std::deque<Matrix> frontier{Matrix::Identity(dim, dim)};
  seen.insert(phase_class(frontier.front()));
  while (!frontier.empty()) {
    Matrix m = frontier.front();
    frontier.pop_front();
    for (const auto& g : gens) {
      Matrix next = g * m;
      if (seen.insert(phase_class(next)).second) frontier.push_back(std::move(next));
    }
  }
  return seen;
}

TEST_CASE("apply_unitary examples") {
  StateVector s(2);
  apply_unitary(s, Matrix::Identity(4, 4), kQ01);
  CHECK(s.amplitude(0) == Complex(1, 0));

  StateVector one(1);
  apply_unitary(one, gates::H(), kQ0);
  CHECK(std::abs(one.amplitude(0) - 1 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(one.amplitude(1) - 1 / std::sqrt(2.0)) < 1e-12);

  StateVector two(2);
  apply_unitary(two, gates::X(), kQ1);
  CHECK(std::abs(two.amplitude(2) - 1.0) < 1e-12);
  CHECK(StateVector::basis(BitVector::from_string("01")).amplitude(2) == Complex(1, 0));

  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(apply_unitary(two, bad, kQ0), std::invalid_argument);
  const std::size_t out_of_range[] = {5};
  CHECK_THROWS_AS(apply_unitary(two, gates::X(), out_of_range), std::out_of_range);
  CHECK_THROWS_AS(StateVector(25), CapacityError);
  CHECK_NOTHROW(StateVector(3, 30));
}

TEST_CASE("apply_unitary preserves the norm on random circuits") {
  Rng rng(21);
  for (int t = 0; t < 1000; ++t) {
    StateVector s = StateVector::random(4, rng);
    for (int g = 0; g < 5; ++g) {
      const std::size_t a = uniform_below(4, rng);
      std::size_t b = uniform_below(4, rng);
      if (b == a) b = (a + 1) % 4;
      const std::size_t targets[] = {a, b};
      apply_unitary(s, haar_unitary(4, rng), targets);
    }
    REQUIRE(std::abs(s.norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("apply_unitary agrees with the Kronecker oracle") {
  Rng rng(22);
  const Matrix u = haar_unitary(4, rng);
  StateVector s = StateVector::random(3, rng);
  Eigen::VectorXcd expected = gates::kron(Matrix::Identity(2, 2), u) * s.as_eigen();
  apply_unitary(s, u, kQ01);
  CHECK((s.as_eigen() - expected).norm() < 1e-12);
}

TEST_CASE("measurement") {
  Rng rng(23);
  StateVector zero(1);
  for (int t = 0; t < 100; ++t) {
    StateVector s = zero;
    const auto m = measure(s, kQ0, rng);
    REQUIRE_FALSE(m.outcome.get(0));
    REQUIRE(m.probability == Catch::Approx(1.0));
  }
  std::size_t ones = 0;
  const std::size_t trials = 10000;
  for (std::size_t t = 0; t < trials; ++t) {
    StateVector plus(1);
    apply_unitary(plus, gates::H(), kQ0);
    const auto first = measure(plus, kQ0, rng);
    ones += first.outcome.get(0);
    const auto again = measure(plus, kQ0, rng);
    REQUIRE(again.outcome == first.outcome);
    REQUIRE(again.probability == Catch::Approx(1.0));
  }
  CHECK(test::within_three_sigma(ones, trials, 0.5));
  auto [outcome, post] = measure_computational(StateVector::basis(BitVector::from_string("10")), kQ01, rng);
  CHECK(outcome.to_string() == "10");
  CHECK(std::abs(post.norm() - 1.0) < 1e-12);
}

TEST_CASE("reduced density matrix of a product state") {
  Rng rng(24);
  const auto a = StateVector::random(1, rng);
  const auto b = StateVector::random(2, rng);
  const auto joint = tensor(a, b);
  const Matrix rho = reduced_density_matrix(joint, kQ0);
  const Matrix expected = a.as_eigen() * a.as_eigen().adjoint();
  CHECK((rho - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Pauli algebra") {
  const auto x = PauliString::from_string("X");
  const auto z = PauliString::from_string("Z");
  const auto y = PauliString::from_string("Y");
  CHECK((x * z).to_string() == "-iY");
  CHECK((z * x).to_string() == "+iY");
  CHECK((x * x).to_string() == "+I");
  CHECK(y.is_hermitian());
  CHECK(y.sign() == 1);
  CHECK(PauliString::from_string("-XZ").sign() == -1);
  CHECK_FALSE(x.commutes_with(z));
  CHECK(PauliString::from_string("XX").commutes_with(PauliString::from_string("ZZ")));
  CHECK((y.to_matrix() - gates::Y()).cwiseAbs().maxCoeff() < 1e-12);
  Rng rng(25);
  for (int t = 0; t < 100; ++t) {
    const PauliString p(BitVector::random(3, rng), BitVector::random(3, rng), uniform_below(4, rng));
    const PauliString q(BitVector::random(3, rng), BitVector::random(3, rng), uniform_below(4, rng));
    CHECK(((p * q).to_matrix() - p.to_matrix() * q.to_matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((p.adjoint().to_matrix() - p.to_matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    StateVector s = StateVector::random(3, rng);
    Eigen::VectorXcd expected = p.to_matrix() * s.as_eigen();
    p.apply_to(s);
    CHECK((s.as_eigen() - expected).norm() < 1e-12);
  }
}

SCENARIO("Clifford builders match their textbook matrices") {
  CHECK(equal_up_to_phase(clifford_to_unitary(CliffordElement::hadamard(1, 0)), gates::H()));
  CHECK(equal_up_to_phase(clifford_to_unitary(CliffordElement::phase(1, 0)), gates::S()));
  CHECK(equal_up_to_phase(clifford_to_unitary(CliffordElement::cnot(2, 0, 1)), gates::CNOT()));
  CHECK((clifford_to_unitary(CliffordElement(3)) - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <
        1e-12);
}

SCENARIO("clifford_conjugate_pauli") {
  GIVEN("the identity") {
    const auto p = PauliString::from_string("-XYZ");
    CHECK(clifford_conjugate_pauli(CliffordElement(3), p) == p);
  }
  GIVEN("Hadamard") {
    const auto h = CliffordElement::hadamard(1, 0);
    CHECK(clifford_conjugate_pauli(h, PauliString::from_string("X")).to_string() == "+Z");
    CHECK(clifford_conjugate_pauli(h, PauliString::from_string("Y")).to_string() == "-Y");
  }
  GIVEN("random elements against the dense oracle") {
    Rng rng(26);
    for (std::size_t n = 1; n <= 3; ++n) {
      for (int t = 0; t < 100; ++t) {
        const auto c = sample_clifford(n, rng);
        const Matrix u = clifford_to_unitary(c);
        REQUIRE(is_unitary(u));
        const PauliString p(BitVector::random(n, rng), BitVector::random(n, rng), uniform_below(4, rng));
        const auto image = clifford_conjugate_pauli(c, p);
        CHECK((u.adjoint() * p.to_matrix() * u - image.to_matrix()).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

SCENARIO("clifford_to_unitary matches the tableau on every Pauli") {
  Rng rng(27);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto c = sample_clifford(n, rng);
    const Matrix u = clifford_to_unitary(c);
    CHECK(is_unitary(u));
    const std::uint64_t count = std::uint64_t{1} << (2 * n);
    for (std::uint64_t code = 0; code < count; ++code) {
      const PauliString p(BitVector::from_uint(code, n), BitVector::from_uint(code >> n, n));
      const Matrix lhs = u.adjoint() * p.to_matrix() * u;
      REQUIRE((lhs - c.conjugate(p).to_matrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  CHECK_THROWS_AS(clifford_to_unitary(CliffordElement(7)), CapacityError);
}

SCENARIO("composition is a group action") {
  Rng rng(28);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 3;
    const auto c = sample_clifford(n, rng);
    const auto d = sample_clifford(n, rng);
    const PauliString p(BitVector::random(n, rng), BitVector::random(n, rng));
    const auto cd = compose(c, d);
    CHECK(cd.conjugate(p) == d.conjugate(c.conjugate(p)));
    CHECK(equal_up_to_phase(clifford_to_unitary(c) * clifford_to_unitary(d), clifford_to_unitary(cd)));
  }
}

SCENARIO("uniform Clifford sampling") {
  GIVEN("one qubit") {
    const auto oracle = clifford_closure({gates::H(), gates::S()});
    REQUIRE(oracle.size() == 24);
    Rng rng(29);
    std::map<std::string, std::size_t> counts;
    const std::size_t draws = 100000;
    for (std::size_t t = 0; t < draws; ++t) {
      const auto cls = phase_class(clifford_to_unitary(sample_clifford(1, rng)));
      REQUIRE(oracle.count(cls) == 1);
      ++counts[cls];
    }
    CHECK(counts.size() == 24);
    CHECK(test::chi_squared_uniform(counts, 24, draws) < test::chi_squared_critical(23, 0.001));
    const auto& all = enumerate_cliffords(1);
    std::set<std::string> enumerated;
    for (const auto& c : all) enumerated.insert(phase_class(clifford_to_unitary(c)));
    CHECK(enumerated == oracle);
  }
  GIVEN("two qubits") {
    const Matrix i2 = Matrix::Identity(2, 2);
    const auto oracle = clifford_closure({gates::kron(i2, gates::H()), gates::kron(gates::H(), i2),
                                          gates::kron(i2, gates::S()), gates::kron(gates::S(), i2),
                                          gates::CNOT()});
    REQUIRE(oracle.size() == 11520);
    const auto& all = enumerate_cliffords(2);
    REQUIRE(all.size() == 11520);
    std::set<std::string> keys;
    for (const auto& c : all) keys.insert(c.key());
    CHECK(keys.size() == 11520);
    std::set<std::string> dense;
    for (const auto& c : all) dense.insert(phase_class(clifford_to_unitary(c)));
    CHECK(dense == oracle);

    Rng rng(30);
    std::set<std::string> sampled;
    for (int t = 0; t < 100000; ++t) {
      const auto c = sample_clifford(2, rng);
      REQUIRE(keys.count(c.key()) == 1);
      sampled.insert(c.key());
      REQUIRE(c.conjugate(PauliString::from_string("XI")).is_hermitian());
    }
    // Expected distinct count is 11520 * (1 - exp(-100000 / 11520)) ~ 11518.
    CHECK(sampled.size() >= 11500);
  }
}

SCENARIO("twirl identity") {
  Rng rng(31);
  GIVEN("the textbook single-qubit instance") {
    const auto sum = twirl_sum(1, PauliString::from_string("X"), PauliString::from_string("Z"),
                               StateVector(1));
    CHECK(sum.norm() < 1e-10);
  }
  GIVEN("identity Paulis") {
    const auto psi = StateVector::random(2, rng);
    const auto sum = twirl_sum(2, PauliString(2), PauliString(2), psi);
    const Matrix expected = 11520.0 * psi.as_eigen() * psi.as_eigen().adjoint();
    CHECK((sum - expected).norm() < 1e-8);
  }
  GIVEN("random distinct pairs") {
    for (std::size_t n = 1; n <= 2; ++n) {
      for (int t = 0; t < 20; ++t) {
        const std::uint64_t a = uniform_below(std::uint64_t{1} << (2 * n), rng);
        std::uint64_t b = uniform_below(std::uint64_t{1} << (2 * n), rng);
        if (a == b) b ^= 1;
        const PauliString p1(BitVector::from_uint(a, n), BitVector::from_uint(a >> n, n));
        const PauliString p2(BitVector::from_uint(b, n), BitVector::from_uint(b >> n, n));
        CHECK(twirl_sum(n, p1, p2, StateVector::random(n, rng)).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("single-qubit Cliffords form a 1-design") {
  Rng rng(32);
  const auto& group = enumerate_cliffords(1);
  for (int t = 0; t < 100; ++t) {
    const auto psi = StateVector::random(1, rng);
    Matrix avg = Matrix::Zero(2, 2);
    for (const auto& c : group) {
      const Eigen::VectorXcd v = clifford_to_unitary(c) * psi.as_eigen();
      avg += v * v.adjoint();
    }
    avg /= static_cast<double>(group.size());
    REQUIRE((avg - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

}  // namespace qsilab::test_qsim
