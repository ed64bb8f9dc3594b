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


#include "qsilab/crypto.hpp"

#include <sodium.h>

#include <array>
#include <stdexcept>
#include <string_view>

namespace qsilab::crypto {

namespace {

constexpr std::string_view kDomain = "qsilab-prg-v1";

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw std::runtime_error("libsodium failed to initialize");
}

BitVector prefix(const BitVector& v, std::size_t len) { return v.slice(0, len); }

}  // namespace

std::vector<std::uint8_t> pack_bits(const BitVector& v) {
  std::vector<std::uint8_t> out((v.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v.get(i)) out[i / 8] |= static_cast<std::uint8_t>(1U << (i % 8));
  }
  return out;
}

BitVector unpack_bits(std::span<const std::uint8_t> bytes, std::size_t len) {
  if (bytes.size() * 8 < len) throw f2::DimensionError("unpack_bits: not enough bytes");
  BitVector out(len);
  for (std::size_t i = 0; i < len; ++i) out.set(i, (bytes[i / 8] >> (i % 8)) & 1U);
  return out;
}

BitVector chacha_expand(const BitVector& seed) {
  ensure_sodium();
  std::vector<std::uint8_t> msg(kDomain.begin(), kDomain.end());
  const std::uint64_t len = seed.size();
  for (int i = 0; i < 8; ++i) msg.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
  const auto packed = pack_bits(seed);
  msg.insert(msg.end(), packed.begin(), packed.end());

  std::array<std::uint8_t, crypto_stream_chacha20_KEYBYTES> key{};
  crypto_generichash(key.data(), key.size(), msg.data(), msg.size(), nullptr, 0);
  const std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> nonce{};
  const std::size_t out_bits = 2 * seed.size();
  std::vector<std::uint8_t> stream((out_bits + 7) / 8);
  crypto_stream_chacha20(stream.data(), stream.size(), nonce.data(), key.data());
  sodium_memzero(key.data(), key.size());
  return unpack_bits(stream, out_bits);
}

PrgFamily::PrgFamily() : expander_(chacha_expand) {}

PrgFamily::PrgFamily(Expander expander) : expander_(std::move(expander)) {
  if (!expander_) throw std::invalid_argument("PrgFamily: empty expander");
}

BitVector PrgFamily::expand(const BitVector& seed) const {
  auto out = expander_(seed);
  if (out.size() != 2 * seed.size()) {
    throw f2::DimensionError("PrgFamily: expander must double the seed length");
  }
  return out;
}

BitVector PrgFamily::stretch(const BitVector& seed, std::size_t out_len) const {
  if (seed.empty()) throw std::invalid_argument("prg_stretch: empty seed");
  const std::size_t k = seed.size();
  if (out_len <= k) return prefix(seed, out_len);
  BitVector out;
  BitVector state = seed;
  while (out.size() < out_len) {
    const auto e = expand(state);
    state = e.slice(0, k);
    out.append(e.slice(k, std::min(k, out_len - out.size())));
  }
  return out;
}

BitVector prg_stretch(const BitVector& seed, std::size_t out_len) {
  static const PrgFamily family;
  return family.stretch(seed, out_len);
}

std::size_t lambda_prime(std::size_t lambda, Variant variant) {
  const std::size_t extra = variant == Variant::CUE ? 1 : 0;
  std::size_t k = 0;
  while (11 * (k + 1) * (k + 1) + 11 * (k + 1) + extra <= lambda) ++k;
  return k;
}

GgmKey GgmKey::generate(std::size_t input_len, std::size_t output_len, Rng& rng,
                        std::size_t seed_len) {
  if (seed_len == 0) throw std::invalid_argument("GgmKey: seed length must be positive");
  return GgmKey{BitVector::random(seed_len, rng), input_len, output_len};
}

namespace {

BitVector descend(const BitVector& start, const BitVector& x, std::size_t from) {
  static const PrgFamily family;
  BitVector s = start;
  const std::size_t k = s.size();
  for (std::size_t d = from; d < x.size(); ++d) {
    s = family.expand(s).slice(x.get(d) ? k : 0, k);
  }
  return s;
}

}  // namespace

BitVector ggm_eval(const GgmKey& key, const BitVector& x) {
  if (x.size() != key.input_len) throw f2::DimensionError("ggm_eval: input length mismatch");
  return prg_stretch(descend(key.seed, x, 0), key.output_len);
}

std::optional<BitVector> PuncturedKey::eval(const BitVector& x) const {
  if (x.size() != input_len_) throw f2::DimensionError("PuncturedKey: input length mismatch");
  if (punctured_.count(x) != 0) return std::nullopt;
  for (std::size_t d = 1; d <= input_len_; ++d) {
    const auto it = nodes_.find(x.slice(0, d));
    if (it != nodes_.end()) return prg_stretch(descend(it->second, x, d), output_len_);
  }
  throw std::logic_error("PuncturedKey: no co-path node covers an unpunctured input");
}

PuncturedKey ggm_puncture(const GgmKey& key, const std::set<BitVector>& points) {
  if (points.empty()) throw std::invalid_argument("ggm_puncture: empty set");
  static const PrgFamily family;
  PuncturedKey out;
  out.input_len_ = key.input_len;
  out.output_len_ = key.output_len;
  out.punctured_ = points;

  std::set<BitVector> on_path;
  for (const auto& p : points) {
    if (p.size() != key.input_len) throw f2::DimensionError("ggm_puncture: point length");
    for (std::size_t d = 0; d <= p.size(); ++d) on_path.insert(p.slice(0, d));
  }
  const std::size_t k = key.seed.size();
  for (const auto& p : points) {
    BitVector s = key.seed;
    for (std::size_t d = 0; d < p.size(); ++d) {
      const auto e = family.expand(s);
      BitVector sibling = p.slice(0, d + 1);
      sibling.flip(d);
      if (on_path.count(sibling) == 0) {
        out.nodes_.emplace(std::move(sibling), e.slice(p.get(d) ? 0 : k, k));
      }
      s = e.slice(p.get(d) ? k : 0, k);
    }
  }
  return out;
}

BitVector serialize_ggm_key(const GgmKey& key) {
  if (key.input_len > 255 || key.output_len > 255 || key.seed.size() > 255) {
    throw std::invalid_argument("serialize_ggm_key: field exceeds 8 bits");
  }
  auto bits = BitVector::from_uint(key.input_len, 8);
  bits.append(BitVector::from_uint(key.output_len, 8));
  bits.append(BitVector::from_uint(key.seed.size(), 8));
  bits.append(key.seed);
  return bits;
}

std::optional<GgmKey> parse_ggm_key(const BitVector& bits) {
  if (bits.size() < 24) return std::nullopt;
  GgmKey key;
  key.input_len = bits.slice(0, 8).to_uint();
  key.output_len = bits.slice(8, 8).to_uint();
  const std::size_t seed_len = bits.slice(16, 8).to_uint();
  if (seed_len == 0 || bits.size() != 24 + seed_len) return std::nullopt;
  key.seed = bits.slice(24, seed_len);
  return key;
}

bool mac_verify(const GgmKey& key, const BitVector& x, const std::optional<BitVector>& y) {
  return y.has_value() && *y == ggm_eval(key, x);
}

}  // namespace qsilab::crypto
