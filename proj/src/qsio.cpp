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


#include "qsilab/qsio.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace qsilab::qsio {

namespace {

constexpr double kExactTolerance = 1e-9;

std::vector<std::size_t> range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> v(end - begin);
  std::iota(v.begin(), v.end(), begin);
  return v;
}

// Appends |x>|0^out_len> above the state, runs `apply`, measures X and Y,
// and returns the outcome on Y together with the remaining state block.
template <typename Apply>
Evaluation run_query(StateVector& state, const BitVector& x, std::size_t out_len, Rng& rng,
                     Apply&& apply) {
  const std::size_t nb = state.num_qubits();
  const std::size_t in_len = x.size();
  StateVector joint = state;
  joint.append(StateVector::basis(f2::concat(x, BitVector(out_len))));
  apply(joint);
  const auto xy = range(nb, nb + in_len + out_len);
  const auto m = qsim::measure(joint, xy, rng);
  const std::size_t base = static_cast<std::size_t>(m.outcome.to_uint()) << nb;
  std::vector<qsim::Complex> block(std::size_t{1} << nb);
  for (std::size_t k = 0; k < block.size(); ++k) block[k] = joint.amplitude(base + k);
  state = StateVector::from_amplitudes(std::move(block), state.cap());
  return {m.outcome.slice(in_len, out_len), m.probability >= 1.0 - kExactTolerance};
}

// Dense matrix of U on `targets` inside an n-qubit register.
Matrix embed(std::size_t n, const Matrix& u, std::span<const std::size_t> targets) {
  const std::size_t dim = std::size_t{1} << n;
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix out(d, d);
  for (std::size_t col = 0; col < dim; ++col) {
    auto v = StateVector::basis(BitVector::from_uint(col, n));
    qsim::apply_unitary(v, u, targets);
    out.col(static_cast<Eigen::Index>(col)) = v.as_eigen();
  }
  return out;
}

}  // namespace

void QuantumImplementation::check_input(const BitVector& x) const {
  if (x.size() != in_len()) throw f2::DimensionError("evaluate: input length mismatch");
}

ClassicalImplementation::ClassicalImplementation(std::size_t in_len, std::size_t out_len,
                                                 Function f)
    : in_len_(in_len), out_len_(out_len), f_(std::move(f)) {}

Evaluation ClassicalImplementation::evaluate(const BitVector& x, Rng&) {
  check_input(x);
  auto y = f_(x);
  if (y && y->size() != out_len_) throw f2::DimensionError("classical program output length");
  return {std::move(y), true};
}

DenseImplementation::DenseImplementation(StateVector state, Matrix eval, std::size_t in_len,
                                         std::size_t out_len)
    : state_(std::move(state)), eval_(std::move(eval)), in_len_(in_len), out_len_(out_len) {
  const std::size_t n = state_.num_qubits() + in_len + out_len;
  if (n > 12) throw qsim::CapacityError("DenseImplementation: more than 12 qubits");
  if (eval_.rows() != static_cast<Eigen::Index>(std::size_t{1} << n) || !qsim::is_unitary(eval_)) {
    throw std::invalid_argument("DenseImplementation: Eval must be unitary on state, X and Y");
  }
}

Evaluation DenseImplementation::evaluate(const BitVector& x, Rng& rng) {
  check_input(x);
  const std::size_t n = state_.num_qubits() + in_len_ + out_len_;
  const auto all = range(0, n);
  return run_query(state_, x, out_len_, rng,
                   [&](StateVector& joint) { qsim::apply_unitary(joint, eval_, all); });
}

DenseImplementation make_truth_table_implementation(const std::vector<BitVector>& table,
                                                    std::size_t in_len) {
  if (table.size() != (std::size_t{1} << in_len) || table.empty()) {
    throw f2::DimensionError("truth table must have 2^in_len rows");
  }
  const std::size_t out_len = table.front().size();
  const std::size_t t = table.size() * out_len;
  BitVector bits;
  for (const auto& row : table) {
    if (row.size() != out_len) throw f2::DimensionError("truth table rows differ in length");
    bits.append(row);
  }
  const std::size_t n = t + in_len + out_len;
  if (n > 12) throw qsim::CapacityError("truth table too large for a dense Eval");
  const std::size_t dim = std::size_t{1} << n;
  const std::uint64_t out_mask = (std::uint64_t{1} << out_len) - 1;
  Matrix eval = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const std::uint64_t tv = i & ((std::uint64_t{1} << t) - 1);
    const std::uint64_t xv = (i >> t) & ((std::uint64_t{1} << in_len) - 1);
    const std::uint64_t entry = (tv >> (xv * out_len)) & out_mask;
    const std::size_t j = i ^ static_cast<std::size_t>(entry << (t + in_len));
    eval(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return DenseImplementation(StateVector::basis(bits), std::move(eval), in_len, out_len);
}

std::shared_ptr<OpaqueProgram> wrap_opaque(std::unique_ptr<QuantumImplementation> impl) {
  if (!impl) throw std::invalid_argument("wrap_opaque: null implementation");
  static std::atomic<std::uint64_t> counter{0};
  const std::uint64_t token = splitmix64(counter.fetch_add(1) ^ 0x5bf03635f0b4a2c1ULL);
  return std::shared_ptr<OpaqueProgram>(new OpaqueProgram(std::move(impl), token));
}

CliffordOtpArtifact clifford_otp_obfuscate(const DenseImplementation& impl, std::size_t lambda_pad,
                                           Rng& rng) {
  const std::size_t padded = impl.state_qubits() + lambda_pad;
  if (padded > qsim::kMaxDenseClifford) {
    throw qsim::CapacityError("clifford_otp_obfuscate: padded register above 6 qubits");
  }
  CliffordOtpArtifact out;
  out.inner_qubits_ = impl.state_qubits();
  out.in_len_ = impl.in_len();
  out.out_len_ = impl.out_len();
  out.eval_ = impl.eval();
  out.u_c_ = qsim::clifford_to_unitary(qsim::sample_clifford(padded, rng));
  StateVector s = impl.state();
  s.append_zeros(lambda_pad);
  const auto pad_reg = range(0, padded);
  qsim::apply_unitary(s, out.u_c_, pad_reg);
  out.state_ = std::move(s);
  return out;
}

Evaluation CliffordOtpArtifact::evaluate(const BitVector& x, Rng& rng) {
  check_input(x);
  const std::size_t padded = state_.num_qubits();
  const auto pad_reg = range(0, padded);
  auto eval_targets = range(0, inner_qubits_);
  for (std::size_t q = padded; q < padded + in_len_ + out_len_; ++q) eval_targets.push_back(q);
  const Matrix u_dag = u_c_.adjoint();
  return run_query(state_, x, out_len_, rng, [&](StateVector& joint) {
    qsim::apply_unitary(joint, u_dag, pad_reg);
    qsim::apply_unitary(joint, eval_, eval_targets);
    qsim::apply_unitary(joint, u_c_, pad_reg);
  });
}

Matrix CliffordOtpArtifact::padded_eval() const {
  const std::size_t padded = state_.num_qubits();
  auto targets = range(0, inner_qubits_);
  for (std::size_t q = padded; q < padded + in_len_ + out_len_; ++q) targets.push_back(q);
  return embed(padded + in_len_ + out_len_, eval_, targets);
}

Matrix CliffordOtpArtifact::oracle_matrix() const {
  const std::size_t io = in_len_ + out_len_;
  const auto id = Matrix::Identity(static_cast<Eigen::Index>(std::size_t{1} << io),
                                   static_cast<Eigen::Index>(std::size_t{1} << io));
  const Matrix c = qsim::gates::kron(id, u_c_);
  return c * padded_eval() * c.adjoint();
}

double otp_mixing_distance(const DenseImplementation& impl, std::size_t lambda_pad,
                           std::size_t samples, Rng& rng) {
  const std::size_t padded = impl.state_qubits() + lambda_pad;
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << padded);
  Matrix avg = Matrix::Zero(d, d);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto art = clifford_otp_obfuscate(impl, lambda_pad, rng);
    const auto v = art.padded_state().as_eigen();
    avg += v * v.adjoint();
  }
  avg /= static_cast<double>(samples);
  avg -= Matrix::Identity(d, d) / static_cast<double>(d);
  Eigen::SelfAdjointEigenSolver<Matrix> es(avg);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::vector<BitVector> full_domain(std::size_t in_len) {
  if (in_len > 20) throw qsim::CapacityError("full_domain: more than 2^20 points");
  std::vector<BitVector> out;
  out.reserve(std::size_t{1} << in_len);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << in_len); ++v) {
    out.push_back(BitVector::from_uint(v, in_len));
  }
  return out;
}

namespace {

// One value if every sample agrees, otherwise nothing.
std::optional<std::optional<BitVector>> settled_value(QuantumImplementation& p,
                                                      const BitVector& x, Rng& rng) {
  auto first = p.evaluate(x, rng);
  if (first.exact) return first.value;
  for (std::size_t k = 1; k < kEquivalenceSamples; ++k) {
    if (p.evaluate(x, rng).value != first.value) return std::nullopt;
  }
  return first.value;
}

}  // namespace

EquivalenceReport functional_equiv(QuantumImplementation& a, QuantumImplementation& b,
                                   const std::vector<BitVector>& domain, Rng& rng) {
  if (a.in_len() != b.in_len() || a.out_len() != b.out_len()) {
    throw f2::DimensionError("functional_equiv: programs have different shapes");
  }
  for (const auto& x : domain) {
    const auto va = settled_value(a, x, rng);
    const auto vb = settled_value(b, x, rng);
    if (!va || !vb || *va != *vb) return {false, x};
  }
  return {true, std::nullopt};
}

// Purified hybrid toy -------------------------------------------------------

namespace {

using Vec16 = Eigen::Matrix<qsim::Complex, 16, 1>;
using Mat4 = Eigen::Matrix<qsim::Complex, 4, 4>;

const std::vector<Mat4>& two_qubit_clifford_unitaries() {
  static std::vector<Mat4> cache;
  static std::once_flag flag;
  std::call_once(flag, [] {
    const auto& group = qsim::enumerate_cliffords(2);
    cache.reserve(group.size());
    for (const auto& c : group) cache.emplace_back(qsim::clifford_to_unitary(c));
  });
  return cache;
}

// Block layout: index = b + 4 * rz with b = (B1, B2) on bits 0-1.
void apply_b(const Mat4& u, Vec16& v) {
  Eigen::Map<Mat4> m(v.data());
  m = (u * m).eval();
}

// Eval on (B1, R) = CNOT from B1 (bit 0) to R (bit 2), applied where B2 = 0.
void eval1(Vec16& v) {
  for (int i = 0; i < 16; ++i) {
    if ((i & 1) && !(i & 2) && !(i & 4)) std::swap(v(i), v(i | 4));
  }
}

Vec16 initial_block(const Mat4& u_c, bool b) {
  Vec16 v = Vec16::Zero();
  v(b ? 1 : 0) = 1.0;  // |b>_{B1} |0>_{B2} |00>_{RZ}
  apply_b(u_c, v);
  return v;
}

void check_adv(const Matrix& adv) {
  if (adv.rows() != 16 || adv.cols() != 16 || !qsim::is_unitary(adv)) {
    throw f2::DimensionError("adversary unitary must be 16 x 16 and unitary");
  }
}

}  // namespace

double purified_hybrid_gap(std::size_t q, const Matrix& adv_unitary, bool b) {
  check_adv(adv_unitary);
  const auto& us = two_qubit_clifford_unitaries();
  const std::size_t n = us.size();
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  const Eigen::Matrix<qsim::Complex, 16, 16> adv = adv_unitary;

  std::vector<Vec16> h2(n), h3(n);
  for (std::size_t c = 0; c < n; ++c) h2[c] = h3[c] = amp * initial_block(us[c], b);

  for (std::size_t round = 0; round < q; ++round) {
    for (std::size_t c = 0; c < n; ++c) {
      h2[c] = adv * h2[c];
      h3[c] = adv * h3[c];
      // G' = W Eval_1 W^dagger.
      apply_b(us[c].adjoint(), h2[c]);
      eval1(h2[c]);
      apply_b(us[c], h2[c]);
      apply_b(us[c].adjoint(), h3[c]);
    }
    // Eval_2 = I + (Eval - I)(|tau><tau| (x) |0><0|_{B2}).
    Vec16 tau = Vec16::Zero();
    for (const auto& v : h3) tau += v;
    tau *= amp;
    for (int i = 0; i < 16; ++i) {
      if (i & 2) tau(i) = 0.0;
    }
    Vec16 moved = tau;
    eval1(moved);
    const Vec16 delta = amp * (moved - tau);
    for (std::size_t c = 0; c < n; ++c) {
      h3[c] += delta;
      apply_b(us[c], h3[c]);
    }
  }
  double sq = 0.0;
  for (std::size_t c = 0; c < n; ++c) sq += (h2[c] - h3[c]).squaredNorm();
  return std::sqrt(sq);
}

double pauli_branch_weight(const Matrix& adv_unitary, bool b) {
  check_adv(adv_unitary);
  const auto& us = two_qubit_clifford_unitaries();
  const std::size_t n = us.size();
  const Eigen::Matrix<qsim::Complex, 16, 16> adv = adv_unitary;

  // Identity coefficient of the Pauli expansion of U over B: Tr_B(U) / 4.
  Mat4 u00 = Mat4::Zero();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      for (int bb = 0; bb < 4; ++bb) u00(r, c) += adv(bb + 4 * r, bb + 4 * c);
    }
  }
  u00 /= 4.0;
  Vec16 identity_branch = Vec16::Zero();
  for (int rz = 0; rz < 4; ++rz) identity_branch((b ? 1 : 0) + 4 * rz) = u00(rz, 0);

  double weight = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    Vec16 v = adv * initial_block(us[c], b);
    apply_b(us[c].adjoint(), v);
    v -= identity_branch;
    for (int i = 0; i < 16; ++i) {
      if (!(i & 2)) weight += std::norm(v(i));
    }
  }
  return weight / static_cast<double>(n);
}

}  // namespace qsilab::qsio
