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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsilab/random.hpp"

namespace qsilab::f2 {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fixed-length vector over F2, packed into 64-bit words.
/// Bit i lives in word i / 64 at position i % 64; unused high bits stay zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t len);

  /// Parses "0110..." with character 0 as bit 0.
  static BitVector from_string(std::string_view bits);
  /// Low `len` bits of `value`, bit 0 = least significant.
  static BitVector from_uint(std::uint64_t value, std::size_t len);
  static BitVector random(std::size_t len, Rng& rng);

  std::size_t size() const { return len_; }
  bool empty() const { return len_ == 0; }

  bool get(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  bool operator[](std::size_t i) const { return get(i); }
  void set(std::size_t i, bool v);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  /// Inner product over F2.
  bool dot(const BitVector& other) const;
  bool is_zero() const;
  std::size_t popcount() const;
  std::optional<std::size_t> first_set() const;

  BitVector slice(std::size_t begin, std::size_t len) const;
  void append(const BitVector& tail);
  std::uint64_t to_uint() const;
  std::string to_string() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;
  /// Lexicographic with bit 0 most significant, as for the strings.
  friend bool operator<(const BitVector& a, const BitVector& b);

 private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

BitVector concat(const BitVector& head, const BitVector& tail);

/// Dense matrix over F2 stored as packed rows.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  static BitMatrix random(std::size_t rows, std::size_t cols, Rng& rng);
  static BitMatrix from_rows(std::vector<BitVector> rows, std::size_t cols);
  /// Row-major parse of `bits`, which must hold rows * cols bits.
  static BitMatrix from_row_major(const BitVector& bits, std::size_t rows,
                                  std::size_t cols);
  static BitMatrix from_strings(std::initializer_list<std::string_view> rows);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool v) { rows_[r].set(c, v); }
  const BitVector& row(std::size_t r) const { return rows_[r]; }
  BitVector& row(std::size_t r) { return rows_[r]; }
  BitVector column(std::size_t c) const;

  BitMatrix transpose() const;
  BitVector to_row_major() const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

/// (Mx)_i = <row_i, x>.
BitVector matvec(const BitMatrix& m, const BitVector& x);
BitMatrix multiply(const BitMatrix& a, const BitMatrix& b);

std::size_t rank(const BitMatrix& m);
/// Basis of {v : Mv = 0}, one vector per free column of the reduced form.
std::vector<BitVector> kernel_basis(const BitMatrix& m);
/// Some z with Mz = b, or nothing if the system is inconsistent.
std::optional<BitVector> solve(const BitMatrix& m, const BitVector& b);

struct RankSample {
  BitMatrix matrix;
  std::size_t attempts = 0;
};

/// Uniform over rows x cols matrices of rank `target_rank` with M * d = 0.
/// A missing or zero `annihilated` leaves only the rank constraint.
/// Rejection sampling: rows are drawn uniformly from d^perp and the draw is
/// kept when the rank matches. Throws std::invalid_argument when the
/// constraints cannot be met and std::runtime_error when `max_attempts` runs
/// out.
RankSample sample_rank_constrained_counted(
    std::size_t rows, std::size_t cols,
    const std::optional<BitVector>& annihilated, std::size_t target_rank,
    Rng& rng, std::size_t max_attempts = 1'000'000);

BitMatrix sample_rank_constrained(std::size_t rows, std::size_t cols,
                                  const std::optional<BitVector>& annihilated,
                                  std::size_t target_rank, Rng& rng);

/// Uniform vector from {u : u.x = bit}. Throws when x = 0 and bit = 1.
BitVector sample_with_parity(const BitVector& x, bool bit, Rng& rng);

}  // namespace qsilab::f2
