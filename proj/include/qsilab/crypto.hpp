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


#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "qsilab/f2linalg.hpp"

namespace qsilab::crypto {

using f2::BitVector;

/// Bits packed least significant first: bit i is (byte[i / 8] >> (i % 8)) & 1.
std::vector<std::uint8_t> pack_bits(const BitVector& v);
BitVector unpack_bits(std::span<const std::uint8_t> bytes, std::size_t len);

/// Deterministic map from a seed to exactly 2 * len(seed) bits.
using Expander = std::function<BitVector(const BitVector&)>;

/// Default expander: the first 2|s| bits of the ChaCha20 keystream (zero
/// nonce) keyed by BLAKE2b-256("qsilab-prg-v1" || le64(|s|) || pack(s)).
BitVector chacha_expand(const BitVector& seed);

class PrgFamily {
 public:
  PrgFamily();
  explicit PrgFamily(Expander expander);

  /// E(seed), checked for length.
  BitVector expand(const BitVector& seed) const;

  /// PRG_{|s|, out_len}. For out_len <= |s| the seed prefix. Otherwise the
  /// chain (s_i, o_i) = halves of E(s_{i-1}) emits o_1 || o_2 || ...,
  /// truncated; outputs are prefix-consistent within each of the two
  /// regimes.
  BitVector stretch(const BitVector& seed, std::size_t out_len) const;

 private:
  Expander expander_;
};

/// stretch() under the default family.
BitVector prg_stretch(const BitVector& seed, std::size_t out_len);

enum class Variant { UE, CUE };

/// Largest k with 11k^2 + 11k (+ 1 for CUE) <= lambda; may be 0.
std::size_t lambda_prime(std::size_t lambda, Variant variant);

inline constexpr std::size_t kDefaultGgmSeedLen = 16;

struct GgmKey {
  BitVector seed;
  std::size_t input_len = 0;
  std::size_t output_len = 0;

  static GgmKey generate(std::size_t input_len, std::size_t output_len, Rng& rng,
                         std::size_t seed_len = kDefaultGgmSeedLen);
  friend bool operator==(const GgmKey&, const GgmKey&) = default;
};

/// Tree walk: E(seed) splits into (left, right) halves and bit x_d picks
/// right when set, bit 0 first. The leaf seed is stretched to output_len.
BitVector ggm_eval(const GgmKey& key, const BitVector& x);

class PuncturedKey {
 public:
  /// Value at x, or nothing when x is punctured.
  std::optional<BitVector> eval(const BitVector& x) const;

  const std::set<BitVector>& punctured() const { return punctured_; }
  /// Co-path nodes, keyed by tree prefix.
  const std::map<BitVector, BitVector>& nodes() const { return nodes_; }
  std::size_t input_len() const { return input_len_; }
  std::size_t output_len() const { return output_len_; }

 private:
  friend PuncturedKey ggm_puncture(const GgmKey& key, const std::set<BitVector>& points);

  std::size_t input_len_ = 0;
  std::size_t output_len_ = 0;
  std::set<BitVector> punctured_;
  std::map<BitVector, BitVector> nodes_;
};

/// Keeps the sibling seed of every punctured path node that is not itself
/// on a punctured path. Throws for an empty set or mislengthed points.
PuncturedKey ggm_puncture(const GgmKey& key, const std::set<BitVector>& points);

/// [input_len:8][output_len:8][seed_len:8][seed], fields least significant
/// bit first.
BitVector serialize_ggm_key(const GgmKey& key);
std::optional<GgmKey> parse_ggm_key(const BitVector& bits);

/// Toy MAC: tag = ggm_eval(key, x); verification recomputes it.
inline BitVector mac_tag(const GgmKey& key, const BitVector& x) { return ggm_eval(key, x); }
bool mac_verify(const GgmKey& key, const BitVector& x, const std::optional<BitVector>& y);

}  // namespace qsilab::crypto
