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

#include "qsilab/qsim/statevector.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace qsilab::qsim {

namespace {

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw CapacityError("statevector of " + std::to_string(n) +
                        " qubits exceeds cap of " + std::to_string(cap));
  }
}

void check_targets(const StateVector& state, std::span<const std::size_t> targets,
                   std::size_t dim) {
  if ((std::size_t{1} << targets.size()) != dim) {
    throw std::invalid_argument("matrix dimension does not match target count");
  }
  std::uint64_t seen = 0;
  for (auto t : targets) {
    if (t >= state.num_qubits()) throw std::out_of_range("target qubit out of range");
    if ((seen >> t) & 1U) throw std::invalid_argument("repeated target qubit");
    seen |= std::uint64_t{1} << t;
  }
}

// Scatter offsets: offset[j] is the amplitude index contribution of local
// basis index j over the target qubits.
std::vector<std::size_t> local_offsets(std::span<const std::size_t> targets) {
  const std::size_t k = targets.size();
  std::vector<std::size_t> offs(std::size_t{1} << k, 0);
  for (std::size_t j = 0; j < offs.size(); ++j) {
    for (std::size_t b = 0; b < k; ++b) {
      if ((j >> b) & 1U) offs[j] |= std::size_t{1} << targets[b];
    }
  }
  return offs;
}

std::size_t target_mask(std::span<const std::size_t> targets) {
  std::size_t mask = 0;
  for (auto t : targets) mask |= std::size_t{1} << t;
  return mask;
}

}  // namespace

StateVector::StateVector(std::size_t num_qubits, std::size_t cap)
    : num_qubits_(num_qubits), cap_(cap) {
  check_cap(num_qubits, cap);
  amps_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector StateVector::basis(const BitVector& bits, std::size_t cap) {
  StateVector s(bits.size(), cap);
  std::size_t index = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits.get(i)) index |= std::size_t{1} << i;
  }
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amps, std::size_t cap) {
  if (amps.empty() || (amps.size() & (amps.size() - 1)) != 0) {
    throw std::invalid_argument("amplitude count must be a power of two");
  }
  StateVector s(0, cap);
  s.num_qubits_ = static_cast<std::size_t>(std::countr_zero(amps.size()));
  check_cap(s.num_qubits_, cap);
  s.amps_ = std::move(amps);
  if (std::abs(s.norm() - 1.0) > kUnitaryTolerance) {
    throw std::invalid_argument("amplitudes are not normalized");
  }
  return s;
}

StateVector StateVector::random(std::size_t num_qubits, Rng& rng, std::size_t cap) {
  StateVector s(num_qubits, cap);
  for (auto& a : s.amps_) a = Complex(standard_normal(rng), standard_normal(rng));
  s.renormalize();
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::renormalize() {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot renormalize the zero vector");
  for (auto& a : amps_) a /= n;
}

void StateVector::append(const StateVector& other) {
  check_cap(num_qubits_ + other.num_qubits_, cap_);
  std::vector<Complex> out(amps_.size() * other.amps_.size());
  for (std::size_t hi = 0; hi < other.amps_.size(); ++hi) {
    if (other.amps_[hi] == Complex{}) continue;
    for (std::size_t lo = 0; lo < amps_.size(); ++lo) {
      out[hi * amps_.size() + lo] = other.amps_[hi] * amps_[lo];
    }
  }
  amps_ = std::move(out);
  num_qubits_ += other.num_qubits_;
}

std::size_t StateVector::append_zeros(std::size_t count) {
  const std::size_t first = num_qubits_;
  check_cap(num_qubits_ + count, cap_);
  amps_.resize(amps_.size() << count, Complex{});
  num_qubits_ += count;
  return first;
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    acc += std::conj(a.amplitude(i)) * b.amplitude(i);
  }
  return acc;
}

StateVector tensor(const StateVector& low, const StateVector& high) {
  StateVector out = low;
  out.append(high);
  return out;
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

void apply_matrix(StateVector& state, const Matrix& m,
                  std::span<const std::size_t> targets) {
  check_targets(state, targets, static_cast<std::size_t>(m.rows()));
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  const auto offs = local_offsets(targets);
  const std::size_t mask = target_mask(targets);
  const std::size_t local = offs.size();
  auto& amps = state.amps_mut();
  if (local == 2) {
    const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    const std::size_t bit = offs[1];
    for (std::size_t base = 0; base < amps.size(); ++base) {
      if ((base & bit) != 0) continue;
      const Complex a0 = amps[base];
      const Complex a1 = amps[base | bit];
      amps[base] = m00 * a0 + m01 * a1;
      amps[base | bit] = m10 * a0 + m11 * a1;
    }
    return;
  }
  std::vector<Complex> in(local), out(local);
  for (std::size_t base = 0; base < amps.size(); ++base) {
    if ((base & mask) != 0) continue;
    for (std::size_t j = 0; j < local; ++j) in[j] = amps[base | offs[j]];
    for (std::size_t r = 0; r < local; ++r) {
      Complex acc{};
      for (std::size_t c = 0; c < local; ++c) {
        acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      }
      out[r] = acc;
    }
    for (std::size_t j = 0; j < local; ++j) amps[base | offs[j]] = out[j];
  }
}

void apply_unitary(StateVector& state, const Matrix& u,
                   std::span<const std::size_t> targets) {
  if (!is_unitary(u)) throw std::invalid_argument("apply_unitary: matrix is not unitary");
  apply_matrix(state, u, targets);
}

Measurement measure(StateVector& state, std::span<const std::size_t> qubits, Rng& rng) {
  for (auto q : qubits) {
    if (q >= state.num_qubits()) throw std::out_of_range("measured qubit out of range");
  }
  auto& amps = state.amps_mut();
  bool prefix = true;
  for (std::size_t j = 0; j < qubits.size(); ++j) prefix = prefix && qubits[j] == j;
  const std::size_t low_mask = (std::size_t{1} << qubits.size()) - 1;
  auto outcome_of = [&](std::size_t index) {
    if (prefix) return index & low_mask;
    std::size_t o = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      if ((index >> qubits[j]) & 1U) o |= std::size_t{1} << j;
    }
    return o;
  };
  std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
  for (std::size_t i = 0; i < amps.size(); ++i) probs[outcome_of(i)] += std::norm(amps[i]);

  double total = 0.0;
  for (auto p : probs) total += p;
  const double u = uniform_unit(rng) * total;
  std::size_t chosen = probs.size() - 1;
  double acc = 0.0;
  for (std::size_t o = 0; o < probs.size(); ++o) {
    acc += probs[o];
    if (u < acc) {
      chosen = o;
      break;
    }
  }
  while (probs[chosen] == 0.0 && chosen > 0) --chosen;  // guards rounding at the top end

  const double scale = 1.0 / std::sqrt(probs[chosen]);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (outcome_of(i) == chosen) {
      amps[i] *= scale;
    } else {
      amps[i] = Complex{};
    }
  }
  return {BitVector::from_uint(chosen, qubits.size()), probs[chosen] / total};
}

std::pair<BitVector, StateVector> measure_computational(
    StateVector state, std::span<const std::size_t> qubits, Rng& rng) {
  auto m = measure(state, qubits, rng);
  return {std::move(m.outcome), std::move(state)};
}

Matrix reduced_density_matrix(const StateVector& state,
                              std::span<const std::size_t> keep) {
  check_targets(state, keep, std::size_t{1} << keep.size());
  const auto offs = local_offsets(keep);
  const std::size_t mask = target_mask(keep);
  const auto d = static_cast<Eigen::Index>(offs.size());
  Matrix rho = Matrix::Zero(d, d);
  const auto amps = state.amplitudes();
  for (std::size_t base = 0; base < amps.size(); ++base) {
    if ((base & mask) != 0) continue;
    for (Eigen::Index r = 0; r < d; ++r) {
      const Complex ar = amps[base | offs[static_cast<std::size_t>(r)]];
      if (ar == Complex{}) continue;
      for (Eigen::Index c = 0; c < d; ++c) {
        rho(r, c) += ar * std::conj(amps[base | offs[static_cast<std::size_t>(c)]]);
      }
    }
  }
  return rho;
}

Matrix haar_unitary(std::size_t dim, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix g(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      g(r, c) = Complex(standard_normal(rng), standard_normal(rng));
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < d; ++c) {
    const Complex diag = r(c, c);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(c) *= diag / mag;
  }
  return q;
}

namespace gates {

Matrix I() { return Matrix::Identity(2, 2); }

Matrix X() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Matrix Y() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0, -1);
  m(1, 0) = Complex(0, 1);
  return m;
}

Matrix Z() {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = -1.0;
  return m;
}

Matrix H() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix m(2, 2);
  m << s, s, s, -s;
  return m;
}

Matrix S() {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = Complex(0, 1);
  return m;
}

Matrix CNOT() {
  // Index bit 0 is the control.
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(3, 1) = 1.0;
  m(2, 2) = 1.0;
  m(1, 3) = 1.0;
  return m;
}

Matrix kron(const Matrix& high, const Matrix& low) {
  Matrix out(high.rows() * low.rows(), high.cols() * low.cols());
  for (Eigen::Index r = 0; r < high.rows(); ++r) {
    for (Eigen::Index c = 0; c < high.cols(); ++c) {
      out.block(r * low.rows(), c * low.cols(), low.rows(), low.cols()) = high(r, c) * low;
    }
  }
  return out;
}

}  // namespace gates

}  // namespace qsilab::qsim
