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


#include "qsilab/glreduce.hpp"

#include <Eigen/Eigenvalues>
#include <numeric>
#include <stdexcept>

namespace qsilab::gl {

namespace {

constexpr double kOperatorTolerance = 1e-9;
// 2^m matrices of 4^r entries each.
constexpr std::size_t kMaxKrausBits = 22;

Eigen::Index dim_of(std::size_t qubits) {
  return static_cast<Eigen::Index>(std::size_t{1} << qubits);
}

void check_register(const MeasurementFamily& f, std::span<const std::size_t> qubits) {
  if (qubits.size() != f.register_qubits()) {
    throw f2::DimensionError("party register size does not match the family");
  }
}

// In-place Walsh-Hadamard transform over a list of matrices, scaled by 1/N.
void walsh_average(std::vector<Matrix>& ops) {
  const std::size_t n = ops.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        Matrix a = ops[j];
        ops[j] += ops[j + h];
        ops[j + h] = a - ops[j + h];
      }
    }
  }
  for (auto& m : ops) m /= static_cast<double>(n);
}

}  // namespace

MeasurementFamily::MeasurementFamily(std::size_t index_len, std::size_t register_qubits,
                                     Realize realize)
    : index_len_(index_len), register_qubits_(register_qubits), realize_(std::move(realize)) {
  if (index_len_ > kMaxGlIndexBits) throw qsim::CapacityError("GL index above 16 bits");
  if (register_qubits_ > 12) throw qsim::CapacityError("party register above 12 qubits");
}

BinaryMeasurement MeasurementFamily::realize(const BitVector& u) const {
  if (u.size() != index_len_) throw f2::DimensionError("family index length mismatch");
  auto m = realize_(u);
  if (m.unitary.rows() != dim_of(register_qubits_) || !qsim::is_unitary(m.unitary) ||
      m.output >= register_qubits_) {
    throw std::invalid_argument("family realized an ill-formed measurement");
  }
  return m;
}

Matrix MeasurementFamily::projector(const BitVector& u, bool bit) const {
  const auto m = realize(u);
  const Eigen::Index d = dim_of(register_qubits_);
  Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if ((((static_cast<std::size_t>(i) >> m.output) & 1U) != 0) == bit) diag(i) = 1.0;
  }
  return m.unitary.adjoint() * diag.asDiagonal() * m.unitary;
}

Matrix MeasurementFamily::phase_oracle(const BitVector& u) const {
  const auto m = realize(u);
  const Eigen::Index d = dim_of(register_qubits_);
  Eigen::VectorXcd z(d);
  for (Eigen::Index i = 0; i < d; ++i) z(i) = ((static_cast<std::size_t>(i) >> m.output) & 1U) ? -1.0 : 1.0;
  return m.unitary.adjoint() * z.asDiagonal() * m.unitary;
}

std::vector<Matrix> gl_kraus(const MeasurementFamily& family) {
  if (family.index_len() + 2 * family.register_qubits() > kMaxKrausBits) {
    throw qsim::CapacityError("GL Kraus table too large for this register");
  }
  const std::size_t count = std::size_t{1} << family.index_len();
  std::vector<Matrix> ops;
  ops.reserve(count);
  for (std::size_t u = 0; u < count; ++u) {
    ops.push_back(family.phase_oracle(BitVector::from_uint(u, family.index_len())));
  }
  walsh_average(ops);
  return ops;
}

std::vector<double> gl_distribution(const MeasurementFamily& family, const StateVector& state,
                                    std::span<const std::size_t> qubits) {
  check_register(family, qubits);
  const Matrix rho = qsim::reduced_density_matrix(state, qubits);
  const auto kraus = gl_kraus(family);
  std::vector<double> p(kraus.size());
  for (std::size_t w = 0; w < kraus.size(); ++w) {
    p[w] = std::max(0.0, (kraus[w] * rho * kraus[w].adjoint()).trace().real());
  }
  return p;
}

BitVector gl_extract(const MeasurementFamily& family, StateVector& state,
                     std::span<const std::size_t> qubits, Rng& rng) {
  check_register(family, qubits);
  const Matrix rho = qsim::reduced_density_matrix(state, qubits);
  const auto kraus = gl_kraus(family);
  double r = uniform_unit(rng);
  std::size_t pick = kraus.size() - 1;
  for (std::size_t w = 0; w < kraus.size(); ++w) {
    const double p = (kraus[w] * rho * kraus[w].adjoint()).trace().real();
    if (r < p) {
      pick = w;
      break;
    }
    r -= p;
  }
  qsim::apply_matrix(state, kraus[pick], qubits);
  state.renormalize();
  return BitVector::from_uint(pick, family.index_len());
}

Matrix gl_bias_operator(const MeasurementFamily& family, const BitVector& x) {
  if (x.size() != family.index_len()) throw f2::DimensionError("x length must match the index");
  const std::size_t count = std::size_t{1} << family.index_len();
  const Eigen::Index d = dim_of(family.register_qubits());
  Matrix acc = Matrix::Zero(d, d);
  for (std::size_t u = 0; u < count; ++u) {
    const auto uv = BitVector::from_uint(u, family.index_len());
    acc += family.projector(uv, uv.dot(x));
  }
  return 2.0 * acc / static_cast<double>(count) - Matrix::Identity(d, d);
}

double gl_success_formula(const MeasurementFamily& fam_a, const MeasurementFamily& fam_b,
                          const StateVector& joint, const BitVector& x,
                          std::span<const std::size_t> qubits_a,
                          std::span<const std::size_t> qubits_b) {
  if (joint.num_qubits() > 12) throw qsim::CapacityError("gl_success_formula: above 12 qubits");
  check_register(fam_a, qubits_a);
  check_register(fam_b, qubits_b);
  StateVector v = joint;
  qsim::apply_matrix(v, gl_bias_operator(fam_a, x), qubits_a);
  qsim::apply_matrix(v, gl_bias_operator(fam_b, x), qubits_b);
  const double n = v.norm();
  return n * n;
}

Matrix hermitian_abs(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return es.eigenvectors() * es.eigenvalues().cwiseAbs().asDiagonal() *
         es.eigenvectors().adjoint();
}

BitMatrix sample_Di(std::size_t i, const BitVector& x, const BitVector& r, std::size_t cols,
                    Rng& rng) {
  if (i > r.size()) throw std::invalid_argument("sample_Di: i exceeds the number of rows");
  if (x.size() != cols) throw f2::DimensionError("sample_Di: x length must equal cols");
  std::vector<BitVector> rows;
  rows.reserve(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    rows.push_back(j < i ? f2::sample_with_parity(x, r.get(j), rng) : BitVector::random(cols, rng));
  }
  return BitMatrix::from_rows(std::move(rows), cols);
}

namespace {

void check_effect(const Matrix& m) {
  if (!m.isApprox(m.adjoint(), kOperatorTolerance)) {
    throw std::invalid_argument("simult_bound_check: operator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.eigenvalues().minCoeff() < -kOperatorTolerance ||
      es.eigenvalues().maxCoeff() > 1.0 + kOperatorTolerance) {
    throw std::invalid_argument("simult_bound_check: operator outside [0, 1]");
  }
}

}  // namespace

SimultCheck simult_bound_check(const std::vector<SimultInstance>& instances, double eps) {
  if (instances.empty()) throw std::invalid_argument("simult_bound_check: no instances");
  SimultCheck out;
  for (const auto& inst : instances) {
    check_effect(inst.p);
    check_effect(inst.q);
    const auto dp = inst.p.rows();
    const auto dq = inst.q.rows();
    if (dp * dq != static_cast<Eigen::Index>(inst.psi.dim())) {
      throw f2::DimensionError("simult_bound_check: operator sizes do not match the state");
    }
    const auto psi = inst.psi.as_eigen();
    const Matrix id_p = Matrix::Identity(dp, dp);
    const Matrix id_q = Matrix::Identity(dq, dq);
    const Matrix half = qsim::gates::kron(0.5 * (id_q + inst.q), 0.5 * (id_p + inst.p));
    const Matrix both = qsim::gates::kron(inst.q, inst.p);
    out.premise += psi.dot(half * psi).real();
    out.conclusion += psi.dot(both * psi).real();
  }
  out.premise /= static_cast<double>(instances.size());
  out.conclusion /= static_cast<double>(instances.size());
  out.premise_holds = out.premise >= 0.5 + eps - 1e-12;
  out.conclusion_holds = out.conclusion >= eps * eps * eps - 1e-12;
  return out;
}

}  // namespace qsilab::gl
