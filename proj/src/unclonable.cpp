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


#include "qsilab/unclonable.hpp"

#include <array>
#include <numeric>

#include "qsilab/conjugate.hpp"
#include "qsilab/qsio.hpp"

namespace qsilab::ue {

namespace {

std::vector<std::size_t> all_qubits(const StateVector& s) {
  std::vector<std::size_t> v(s.num_qubits());
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

KeyParse parse_key(const SchemeParams& p, const BitVector& sk, std::size_t theta_len) {
  if (sk.size() != p.lambda) throw f2::DimensionError("key length does not match lambda");
  const std::size_t used = theta_len + p.rows * p.qubits;
  if (used > p.lambda) throw ParameterError("key too short for (theta, U)");
  KeyParse out;
  out.theta = sk.slice(0, theta_len);
  out.matrix = BitMatrix::from_row_major(sk.slice(theta_len, p.rows * p.qubits), p.rows, p.qubits);
  out.discarded = p.lambda - used;
  return out;
}

void check_params(const SchemeParams& p) {
  if (p.qubits == 0 || p.rows == 0) throw ParameterError("lambda' must be at least 1");
}

std::shared_ptr<qsio::OpaqueProgram> indicator_of(const BitVector& s) {
  return qsio::wrap_opaque(std::make_unique<qsio::ClassicalImplementation>(
      s.size(), 1, [s](const BitVector& z) { return BitVector::from_uint(z == s ? 1 : 0, 1); }));
}

bool indicator_accepts(qsio::OpaqueProgram& p, const BitVector& s, Rng& rng) {
  const auto y = p.evaluate(s, rng);
  return y && y->get(0);
}

}  // namespace

SchemeParams SchemeParams::paper_ue(std::size_t lambda) {
  const std::size_t k = crypto::lambda_prime(lambda, crypto::Variant::UE);
  if (k == 0) throw ParameterError("UE needs lambda >= 22");
  return {lambda, 11 * k, k, PadMode::Prg};
}

SchemeParams SchemeParams::paper_cue(std::size_t lambda) {
  const std::size_t k = crypto::lambda_prime(lambda, crypto::Variant::CUE);
  if (k == 0) throw ParameterError("cUE needs lambda >= 23");
  return {lambda, 11 * k, k, PadMode::Prg};
}

SchemeParams SchemeParams::toy_ue(std::size_t qubits, std::size_t rows, PadMode pad) {
  return {qubits + rows * qubits, qubits, rows, pad};
}

SchemeParams SchemeParams::toy_cue(std::size_t qubits, std::size_t rows, PadMode pad) {
  return {qubits + 1 + rows * qubits, qubits, rows, pad};
}

KeyParse parse_ue_key(const SchemeParams& p, const BitVector& sk) {
  return parse_key(p, sk, p.qubits);
}

KeyParse parse_cue_key(const SchemeParams& p, const BitVector& sk) {
  return parse_key(p, sk, p.qubits + 1);
}

BitVector pad_stream(const SchemeParams& p, const BitVector& seed, std::size_t len) {
  if (p.pad == PadMode::Direct) {
    if (len > seed.size()) throw ParameterError("direct pads need |m| <= rows");
    return seed.slice(0, len);
  }
  return crypto::prg_stretch(seed, len);
}

UeCiphertext ue_encrypt(const SchemeParams& p, const BitVector& sk, const BitVector& m, Rng& rng) {
  check_params(p);
  const auto key = parse_ue_key(p, sk);
  const auto x = BitVector::random(p.qubits, rng);
  auto pad = m ^ pad_stream(p, f2::matvec(key.matrix, x), m.size());
  return {conj::encode_bb84(x, key.theta), std::move(pad), p};
}

BitVector ue_decrypt_in_place(const SchemeParams& p, const BitVector& sk, StateVector& state,
                              std::span<const std::size_t> qubits, const BitVector& pad, Rng& rng) {
  const auto key = parse_ue_key(p, sk);
  const auto x = conj::decode_bb84_in_place(state, qubits, key.theta, rng);
  return pad ^ pad_stream(p, f2::matvec(key.matrix, x), pad.size());
}

BitVector ue_decrypt(const BitVector& sk, UeCiphertext& ct, Rng& rng) {
  const auto qs = all_qubits(ct.state);
  return ue_decrypt_in_place(ct.params, sk, ct.state, qs, ct.pad, rng);
}

CueCiphertext cue_encrypt(const SchemeParams& p, const BitVector& sk_a, const BitVector& sk_b,
                          const BitVector& m_a, const BitVector& m_b, Rng& rng) {
  check_params(p);
  const auto ka = parse_cue_key(p, sk_a);
  const auto kb = parse_cue_key(p, sk_b);
  const auto x = BitVector::random(p.qubits, rng);
  auto t = f2::sample_rank_constrained(p.qubits, p.qubits + 1, ka.theta ^ kb.theta, p.qubits, rng);
  const auto theta = f2::matvec(t, ka.theta);
  auto pad_a = m_a ^ pad_stream(p, f2::matvec(ka.matrix, x), m_a.size());
  auto pad_b = m_b ^ pad_stream(p, f2::matvec(kb.matrix, x), m_b.size());
  return {conj::encode_bb84(x, theta), std::move(t), std::move(pad_a), std::move(pad_b), p};
}

BitVector cue_decrypt_in_place(const SchemeParams& p, const BitVector& sk, const BitMatrix& t,
                               StateVector& state, std::span<const std::size_t> qubits,
                               const BitVector& pad, Rng& rng) {
  const auto key = parse_cue_key(p, sk);
  const auto x = conj::decode_bb84_in_place(state, qubits, f2::matvec(t, key.theta), rng);
  return pad ^ pad_stream(p, f2::matvec(key.matrix, x), pad.size());
}

BitVector cue_decrypt(int slot, const BitVector& sk, CueCiphertext& ct, Rng& rng) {
  const auto qs = all_qubits(ct.state);
  return cue_decrypt_in_place(ct.params, sk, ct.t, ct.state, qs, slot == 0 ? ct.pad_a : ct.pad_b,
                              rng);
}

RandomnessSample unclonable_randomness_sample(std::size_t n, std::size_t lambda, Rng& rng) {
  const std::size_t len = 10 * n + lambda;
  if (len > qsim::kDefaultQubitCap) throw qsim::CapacityError("10n + lambda above the qubit cap");
  RandomnessSample out;
  out.x = BitVector::random(len, rng);
  out.theta = BitVector::random(len, rng);
  out.u = BitMatrix::random(n, len, rng);
  out.v = BitMatrix::random(n, len, rng);
  out.r1 = f2::matvec(out.u, out.x);
  out.s1 = f2::matvec(out.v, out.x);
  out.state = conj::encode_bb84(out.x, out.theta);
  return out;
}

KeyTestedUe::KeyTestedUe(SchemeParams inner, std::size_t key_len)
    : inner_(inner), key_len_(key_len) {
  check_params(inner_);
}

KeyTestedUeCiphertext KeyTestedUe::encrypt(const BitVector& s, const BitVector& m, Rng& rng) const {
  if (s.size() != key_len_) throw f2::DimensionError("outer key length mismatch");
  auto a = BitMatrix::random(inner_.lambda, key_len_, rng);
  auto inner = ue_encrypt(inner_, f2::matvec(a, s), m, rng);
  return {std::move(a), std::move(inner), indicator_of(s)};
}

bool KeyTestedUe::test(const BitVector& s, KeyTestedUeCiphertext& ct, Rng& rng) const {
  return indicator_accepts(*ct.indicator, s, rng);
}

BitVector KeyTestedUe::decrypt(const BitVector& s, KeyTestedUeCiphertext& ct, Rng& rng) const {
  return ue_decrypt(f2::matvec(ct.a, s), ct.inner, rng);
}

KeyTestedCue::KeyTestedCue(SchemeParams inner, std::size_t key_len)
    : inner_(inner), key_len_(key_len) {
  check_params(inner_);
}

KeyTestedCueCiphertext KeyTestedCue::encrypt(const BitVector& s_a, const BitVector& s_b,
                                             const BitVector& m_a, const BitVector& m_b,
                                             Rng& rng) const {
  if (s_a.size() != key_len_ || s_b.size() != key_len_) {
    throw f2::DimensionError("outer key length mismatch");
  }
  auto a = BitMatrix::random(inner_.lambda, key_len_, rng);
  auto inner = cue_encrypt(inner_, f2::matvec(a, s_a), f2::matvec(a, s_b), m_a, m_b, rng);
  return {std::move(a), std::move(inner), indicator_of(s_a), indicator_of(s_b)};
}

std::optional<int> KeyTestedCue::test(const BitVector& s, KeyTestedCueCiphertext& ct,
                                      Rng& rng) const {
  if (indicator_accepts(*ct.indicator_a, s, rng)) return 0;
  if (indicator_accepts(*ct.indicator_b, s, rng)) return 1;
  return std::nullopt;
}

BitVector KeyTestedCue::decrypt(int slot, const BitVector& s, KeyTestedCueCiphertext& ct,
                                Rng& rng) const {
  return cue_decrypt(slot, f2::matvec(ct.a, s), ct.inner, rng);
}

KeyTestedUe compile_key_testing(const SchemeParams& ue_params, std::optional<std::size_t> key_len) {
  return KeyTestedUe(ue_params, key_len.value_or(3 * ue_params.lambda));
}

KeyTestedCue compile_key_testing_cue(const SchemeParams& cue_params,
                                     std::optional<std::size_t> key_len) {
  return KeyTestedCue(cue_params, key_len.value_or(3 * cue_params.lambda));
}

// Byte layout -----------------------------------------------------------------

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'Q', 'S', 'C', 'T'};
constexpr std::uint8_t kVersion = 1;

void put16(std::vector<std::uint8_t>& out, std::size_t v) {
  if (v > 0xffff) throw std::invalid_argument("serialize_classical: field above 16 bits");
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_bits(std::vector<std::uint8_t>& out, const BitVector& v) {
  const auto packed = crypto::pack_bits(v);
  out.insert(out.end(), packed.begin(), packed.end());
}

void put_matrix(std::vector<std::uint8_t>& out, const BitMatrix& m) {
  put16(out, m.rows());
  put16(out, m.cols());
  put_bits(out, m.to_row_major());
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : bytes_(b) {}
  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::size_t u16() {
    const std::size_t lo = u8();
    return lo | (static_cast<std::size_t>(u8()) << 8);
  }
  BitVector bits(std::size_t len) {
    const std::size_t n = (len + 7) / 8;
    need(n);
    auto v = crypto::unpack_bits(bytes_.subspan(pos_, n), len);
    // Padding bits of the last byte must be zero.
    if (len % 8 != 0 && (bytes_[pos_ + n - 1] >> (len % 8)) != 0) fail();
    pos_ += n;
    return v;
  }
  BitMatrix matrix() {
    const std::size_t rows = u16();
    const std::size_t cols = u16();
    return BitMatrix::from_row_major(bits(rows * cols), rows, cols);
  }
  bool done() const { return pos_ == bytes_.size(); }
  [[noreturn]] static void fail() { throw std::invalid_argument("parse_classical: malformed bytes"); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) fail();
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_classical(const ClassicalParts& parts) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.push_back(kVersion);
  out.push_back(static_cast<std::uint8_t>((parts.t ? 1 : 0) | (parts.a ? 2 : 0)));
  if (parts.t) put_matrix(out, *parts.t);
  if (parts.a) put_matrix(out, *parts.a);
  if (parts.pads.size() > 255) throw std::invalid_argument("serialize_classical: too many pads");
  out.push_back(static_cast<std::uint8_t>(parts.pads.size()));
  for (const auto& p : parts.pads) {
    put16(out, p.size());
    put_bits(out, p);
  }
  return out;
}

ClassicalParts parse_classical(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  for (const auto m : kMagic) {
    if (r.u8() != m) Reader::fail();
  }
  if (r.u8() != kVersion) Reader::fail();
  const std::uint8_t flags = r.u8();
  if (flags & ~3U) Reader::fail();
  ClassicalParts out;
  if (flags & 1U) out.t = r.matrix();
  if (flags & 2U) out.a = r.matrix();
  const std::size_t count = r.u8();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t len = r.u16();
    out.pads.push_back(r.bits(len));
  }
  if (!r.done()) Reader::fail();
  return out;
}

ClassicalParts classical_parts(const UeCiphertext& ct) { return {std::nullopt, std::nullopt, {ct.pad}}; }

ClassicalParts classical_parts(const CueCiphertext& ct) {
  return {ct.t, std::nullopt, {ct.pad_a, ct.pad_b}};
}

ClassicalParts classical_parts(const KeyTestedUeCiphertext& ct) {
  auto p = classical_parts(ct.inner);
  p.a = ct.a;
  return p;
}

ClassicalParts classical_parts(const KeyTestedCueCiphertext& ct) {
  auto p = classical_parts(ct.inner);
  p.a = ct.a;
  return p;
}

}  // namespace qsilab::ue
