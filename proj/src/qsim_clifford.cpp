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

#include "qsilab/qsim/clifford.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <mutex>

namespace qsilab::qsim {

namespace {

constexpr std::array<Complex, 4> kIPowers = {Complex(1, 0), Complex(0, 1),
                                             Complex(-1, 0), Complex(0, -1)};

unsigned overlap_parity(const BitVector& a, const BitVector& b) {
  return a.dot(b) ? 1U : 0U;
}

unsigned overlap_count(const BitVector& x, const BitVector& z) {
  std::size_t n = 0;
  for (std::size_t w = 0; w < x.words().size(); ++w) {
    n += static_cast<std::size_t>(std::popcount(x.words()[w] & z.words()[w]));
  }
  return static_cast<unsigned>(n % 4);
}

PauliString hermitian_pauli(BitVector x, BitVector z, bool negative) {
  const unsigned phase = overlap_count(x, z) + (negative ? 2U : 0U);
  return PauliString(std::move(x), std::move(z), phase);
}

PauliString single(std::size_t n, std::size_t q, char letter) {
  BitVector x(n), z(n);
  if (letter == 'X' || letter == 'Y') x.set(q, true);
  if (letter == 'Z' || letter == 'Y') z.set(q, true);
  return hermitian_pauli(std::move(x), std::move(z), false);
}

// A vector of the 2n-dimensional symplectic space, stored as (x | z).
struct SymVec {
  BitVector x;
  BitVector z;
  bool is_zero() const { return x.is_zero() && z.is_zero(); }
  SymVec& operator^=(const SymVec& o) {
    x ^= o.x;
    z ^= o.z;
    return *this;
  }
};

bool form(const SymVec& a, const SymVec& b) { return a.x.dot(b.z) != a.z.dot(b.x); }

// u + <u,w> v + <u,v> w, which is orthogonal to both v and w when <v,w> = 1.
SymVec project_off(SymVec u, const SymVec& v, const SymVec& w) {
  const bool uw = form(u, w);
  const bool uv = form(u, v);
  if (uw) u ^= v;
  if (uv) u ^= w;
  return u;
}

// Symplectic basis (a_0, b_0, a_1, b_1, ...) of the span of `vecs`, which
// must span a nondegenerate subspace.
std::vector<SymVec> symplectic_basis(std::vector<SymVec> vecs) {
  std::vector<SymVec> out;
  while (!vecs.empty()) {
    SymVec u = std::move(vecs.back());
    vecs.pop_back();
    if (u.is_zero()) continue;
    auto partner = std::find_if(vecs.begin(), vecs.end(),
                                [&](const SymVec& t) { return form(u, t); });
    if (partner == vecs.end()) {
      throw std::logic_error("symplectic_basis: degenerate span");
    }
    SymVec t = std::move(*partner);
    vecs.erase(partner);
    for (auto& s : vecs) s = project_off(std::move(s), u, t);
    out.push_back(std::move(u));
    out.push_back(std::move(t));
  }
  return out;
}

SymVec combine(const std::vector<SymVec>& basis, std::uint64_t coeffs) {
  SymVec acc{BitVector(basis.front().x.size()), BitVector(basis.front().x.size())};
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if ((coeffs >> j) & 1U) acc ^= basis[j];
  }
  return acc;
}

SymVec combine(const std::vector<SymVec>& basis, const BitVector& coeffs) {
  SymVec acc{BitVector(basis.front().x.size()), BitVector(basis.front().x.size())};
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (coeffs.get(j)) acc ^= basis[j];
  }
  return acc;
}

std::vector<SymVec> standard_basis(std::size_t n) {
  std::vector<SymVec> basis;
  for (std::size_t q = 0; q < n; ++q) {
    SymVec a{BitVector(n), BitVector(n)};
    a.x.set(q, true);
    SymVec b{BitVector(n), BitVector(n)};
    b.z.set(q, true);
    basis.push_back(std::move(a));
    basis.push_back(std::move(b));
  }
  return basis;
}

std::vector<SymVec> complement_after(const std::vector<SymVec>& basis, const SymVec& v,
                                     const SymVec& w) {
  std::vector<SymVec> projected;
  projected.reserve(basis.size());
  for (const auto& u : basis) projected.push_back(project_off(u, v, w));
  return symplectic_basis(std::move(projected));
}

CliffordElement from_pairs(const std::vector<std::pair<SymVec, SymVec>>& pairs,
                           std::uint64_t sign_bits) {
  std::vector<PauliString> xs, zs;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    xs.push_back(hermitian_pauli(pairs[q].first.x, pairs[q].first.z, (sign_bits >> (2 * q)) & 1U));
    zs.push_back(
        hermitian_pauli(pairs[q].second.x, pairs[q].second.z, (sign_bits >> (2 * q + 1)) & 1U));
  }
  return CliffordElement::from_images(std::move(xs), std::move(zs));
}

void enumerate_pairs(const std::vector<SymVec>& basis,
                     std::vector<std::pair<SymVec, SymVec>>& prefix,
                     std::vector<std::vector<std::pair<SymVec, SymVec>>>& out) {
  if (basis.empty()) {
    out.push_back(prefix);
    return;
  }
  const std::uint64_t space = std::uint64_t{1} << basis.size();
  for (std::uint64_t c = 1; c < space; ++c) {
    const SymVec v = combine(basis, c);
    for (std::uint64_t d = 0; d < space; ++d) {
      const SymVec w = combine(basis, d);
      if (!form(v, w)) continue;
      prefix.emplace_back(v, w);
      enumerate_pairs(complement_after(basis, v, w), prefix, out);
      prefix.pop_back();
    }
  }
}

}  // namespace

PauliString::PauliString(std::size_t n) : x_(n), z_(n) {}

PauliString::PauliString(BitVector x, BitVector z, unsigned phase)
    : x_(std::move(x)), z_(std::move(z)), phase_(phase % 4) {
  if (x_.size() != z_.size()) throw f2::DimensionError("PauliString: x/z length mismatch");
}

PauliString PauliString::from_string(std::string_view text) {
  unsigned extra = 0;
  if (text.starts_with("-i")) {
    extra = 3;
    text.remove_prefix(2);
  } else if (text.starts_with("+i")) {
    extra = 1;
    text.remove_prefix(2);
  } else if (text.starts_with("i")) {
    extra = 1;
    text.remove_prefix(1);
  } else if (text.starts_with("-")) {
    extra = 2;
    text.remove_prefix(1);
  } else if (text.starts_with("+")) {
    text.remove_prefix(1);
  }
  BitVector x(text.size()), z(text.size());
  unsigned ys = 0;
  for (std::size_t q = 0; q < text.size(); ++q) {
    switch (text[q]) {
      case 'I':
        break;
      case 'X':
        x.set(q, true);
        break;
      case 'Z':
        z.set(q, true);
        break;
      case 'Y':
        x.set(q, true);
        z.set(q, true);
        ++ys;
        break;
      default:
        throw std::invalid_argument("PauliString::from_string: bad letter");
    }
  }
  return PauliString(std::move(x), std::move(z), extra + ys);
}

bool PauliString::is_hermitian() const { return (phase_ + overlap_count(x_, z_)) % 2 == 0; }

int PauliString::sign() const {
  if (!is_hermitian()) throw std::logic_error("PauliString::sign: not Hermitian");
  return ((phase_ + 4 - overlap_count(x_, z_)) % 4) == 0 ? 1 : -1;
}

PauliString PauliString::adjoint() const {
  return PauliString(x_, z_, (4 - phase_) + 2 * overlap_parity(x_, z_));
}

bool PauliString::commutes_with(const PauliString& other) const {
  return !symplectic_product(*this, other);
}

Matrix PauliString::to_matrix() const {
  if (size() > 12) throw CapacityError("PauliString::to_matrix: more than 12 qubits");
  const std::size_t dim = std::size_t{1} << size();
  const std::uint64_t xm = x_.to_uint();
  const std::uint64_t zm = z_.to_uint();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    const bool neg = std::popcount(zm & b) & 1;
    m(static_cast<Eigen::Index>(b ^ xm), static_cast<Eigen::Index>(b)) =
        kIPowers[(phase_ + (neg ? 2U : 0U)) % 4];
  }
  return m;
}

void PauliString::apply_to(StateVector& state) const {
  if (state.num_qubits() != size()) throw f2::DimensionError("PauliString::apply_to");
  const std::uint64_t xm = x_.to_uint();
  const std::uint64_t zm = z_.to_uint();
  auto& amps = state.amps_mut();
  std::vector<Complex> out(amps.size());
  for (std::uint64_t b = 0; b < amps.size(); ++b) {
    const bool neg = std::popcount(zm & b) & 1;
    out[b ^ xm] = kIPowers[(phase_ + (neg ? 2U : 0U)) % 4] * amps[b];
  }
  amps = std::move(out);
}

std::string PauliString::to_string() const {
  // Rewrite as i^k times letters, with Y = iXZ.
  const unsigned k = (phase_ + 4 - overlap_count(x_, z_)) % 4;
  static constexpr std::array<const char*, 4> prefixes = {"+", "+i", "-", "-i"};
  std::string s = prefixes[k];
  for (std::size_t q = 0; q < size(); ++q) {
    const bool xb = x_.get(q);
    const bool zb = z_.get(q);
    s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return s;
}

PauliString operator*(const PauliString& a, const PauliString& b) {
  // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1.x2} X^{x1+x2} Z^{z1+z2}
  const unsigned phase = a.phase_ + b.phase_ + 2 * overlap_parity(a.z_, b.x_);
  return PauliString(a.x_ ^ b.x_, a.z_ ^ b.z_, phase);
}

bool symplectic_product(const PauliString& a, const PauliString& b) {
  return a.x().dot(b.z()) != a.z().dot(b.x());
}

CliffordElement::CliffordElement(std::size_t n) {
  for (std::size_t q = 0; q < n; ++q) {
    x_images_.push_back(single(n, q, 'X'));
    z_images_.push_back(single(n, q, 'Z'));
  }
}

CliffordElement CliffordElement::from_images(std::vector<PauliString> x_images,
                                             std::vector<PauliString> z_images) {
  const std::size_t n = x_images.size();
  if (z_images.size() != n) throw std::invalid_argument("tableau: image count mismatch");
  auto all = x_images;
  all.insert(all.end(), z_images.begin(), z_images.end());
  for (const auto& p : all) {
    if (p.size() != n) throw std::invalid_argument("tableau: image width mismatch");
    if (!p.is_hermitian()) throw std::invalid_argument("tableau: image not Hermitian");
  }
  for (std::size_t i = 0; i < 2 * n; ++i) {
    for (std::size_t j = i + 1; j < 2 * n; ++j) {
      const bool should_anticommute = j == i + n;
      if (symplectic_product(all[i], all[j]) != should_anticommute) {
        throw std::invalid_argument("tableau: commutation relations violated");
      }
    }
  }
  CliffordElement c;
  c.x_images_ = std::move(x_images);
  c.z_images_ = std::move(z_images);
  return c;
}

CliffordElement CliffordElement::hadamard(std::size_t n, std::size_t q) {
  CliffordElement c(n);
  std::swap(c.x_images_[q], c.z_images_[q]);
  return c;
}

CliffordElement CliffordElement::phase(std::size_t n, std::size_t q) {
  // S^dagger X S = -Y, S^dagger Z S = Z.
  CliffordElement c(n);
  PauliString y = single(n, q, 'Y');
  c.x_images_[q] = PauliString(y.x(), y.z(), y.phase() + 2);
  return c;
}

CliffordElement CliffordElement::cnot(std::size_t n, std::size_t control, std::size_t target) {
  CliffordElement c(n);
  c.x_images_[control] = single(n, control, 'X') * single(n, target, 'X');
  c.z_images_[target] = single(n, control, 'Z') * single(n, target, 'Z');
  return c;
}

PauliString CliffordElement::conjugate(const PauliString& p) const {
  if (p.size() != num_qubits()) throw f2::DimensionError("conjugate: qubit count mismatch");
  PauliString acc{BitVector(num_qubits()), BitVector(num_qubits()), p.phase()};
  for (std::size_t q = 0; q < num_qubits(); ++q) {
    if (p.x().get(q)) acc = acc * x_images_[q];
  }
  for (std::size_t q = 0; q < num_qubits(); ++q) {
    if (p.z().get(q)) acc = acc * z_images_[q];
  }
  return acc;
}

std::string CliffordElement::key() const {
  std::string s;
  for (const auto& p : x_images_) s += p.to_string() + ",";
  s += "|";
  for (const auto& p : z_images_) s += p.to_string() + ",";
  return s;
}

CliffordElement sample_clifford(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_clifford: n must be positive");
  std::vector<SymVec> basis = standard_basis(n);
  std::vector<std::pair<SymVec, SymVec>> pairs;
  while (!basis.empty()) {
    SymVec v;
    do {
      v = combine(basis, BitVector::random(basis.size(), rng));
    } while (v.is_zero());
    SymVec w;
    do {
      w = combine(basis, BitVector::random(basis.size(), rng));
    } while (!form(v, w));
    basis = complement_after(basis, v, w);
    pairs.emplace_back(std::move(v), std::move(w));
  }
  std::vector<PauliString> xs, zs;
  for (auto& [v, w] : pairs) {
    xs.push_back(hermitian_pauli(v.x, v.z, random_bit(rng)));
    zs.push_back(hermitian_pauli(w.x, w.z, random_bit(rng)));
  }
  return CliffordElement::from_images(std::move(xs), std::move(zs));
}

PauliString clifford_conjugate_pauli(const CliffordElement& c, const PauliString& p) {
  return c.conjugate(p);
}

CliffordElement compose(const CliffordElement& first, const CliffordElement& second) {
  std::vector<PauliString> xs, zs;
  for (std::size_t q = 0; q < first.num_qubits(); ++q) {
    xs.push_back(second.conjugate(first.x_image(q)));
    zs.push_back(second.conjugate(first.z_image(q)));
  }
  return CliffordElement::from_images(std::move(xs), std::move(zs));
}

Matrix clifford_to_unitary(const CliffordElement& c) {
  const std::size_t n = c.num_qubits();
  if (n > kMaxDenseClifford) throw CapacityError("clifford_to_unitary: more than 6 qubits");
  // W with W P W^dagger = image(P) is built column by column from the
  // stabilizer state W|0> (stabilized by the Z images); C = W^dagger.
  const std::size_t dim = std::size_t{1} << n;
  StateVector anchor(n);
  for (std::size_t b = 0; b < dim; ++b) {
    StateVector trial = StateVector::basis(BitVector::from_uint(b, n));
    for (std::size_t q = 0; q < n; ++q) {
      StateVector flipped = trial;
      c.z_image(q).apply_to(flipped);
      auto& amps = trial.amps_mut();
      for (std::size_t i = 0; i < dim; ++i) amps[i] = 0.5 * (amps[i] + flipped.amplitude(i));
    }
    if (trial.norm() > 1e-6) {
      trial.renormalize();
      anchor = std::move(trial);
      break;
    }
  }
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix w(d, d);
  for (std::size_t col = 0; col < dim; ++col) {
    StateVector v = anchor;
    for (std::size_t q = 0; q < n; ++q) {
      if ((col >> q) & 1U) c.x_image(q).apply_to(v);
    }
    w.col(static_cast<Eigen::Index>(col)) = v.as_eigen();
  }
  return w.adjoint();
}

const std::vector<CliffordElement>& enumerate_cliffords(std::size_t n) {
  if (n < 1 || n > 2) throw CapacityError("enumerate_cliffords: n must be 1 or 2");
  static std::array<std::vector<CliffordElement>, 3> cache;
  static std::array<std::once_flag, 3> flags;
  std::call_once(flags[n], [n] {
    std::vector<std::vector<std::pair<SymVec, SymVec>>> symplectic;
    std::vector<std::pair<SymVec, SymVec>> prefix;
    enumerate_pairs(standard_basis(n), prefix, symplectic);
    const std::uint64_t signs = std::uint64_t{1} << (2 * n);
    auto& out = cache[n];
    out.reserve(symplectic.size() * signs);
    for (const auto& pairs : symplectic) {
      for (std::uint64_t s = 0; s < signs; ++s) out.push_back(from_pairs(pairs, s));
    }
  });
  return cache[n];
}

Matrix twirl_sum(std::size_t n, const PauliString& p1, const PauliString& p2,
                 const StateVector& psi) {
  if (p1.size() != n || p2.size() != n || psi.num_qubits() != n) {
    throw f2::DimensionError("twirl_sum: qubit count mismatch");
  }
  const auto& group = enumerate_cliffords(n);
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix acc = Matrix::Zero(d, d);
  for (const auto& c : group) {
    StateVector left = psi;
    c.conjugate(p2).apply_to(left);
    StateVector right = psi;
    c.conjugate(p1).adjoint().apply_to(right);
    acc += left.as_eigen() * right.as_eigen().adjoint();
  }
  return acc;
}

}  // namespace qsilab::qsim
