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

#include "qsilab/f2linalg.hpp"

#include <algorithm>
#include <bit>

namespace qsilab::f2 {

namespace {

std::size_t word_count(std::size_t len) { return (len + 63) / 64; }

void check_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

struct Echelon {
  BitMatrix reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

// Gauss-Jordan elimination. Rows [0, pivots.size()) of the result are the
// nonzero rows, each with a 1 in its pivot column and 0 in every other pivot
// column.
Echelon reduce(BitMatrix m) {
  Echelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && !m.get(p, c)) ++p;
    if (p == m.rows()) continue;
    std::swap(m.row(p), m.row(r));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i != r && m.get(i, c)) m.row(i) ^= m.row(r);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

}  // namespace

BitVector::BitVector(std::size_t len) : len_(len), words_(word_count(len), 0) {}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i, true);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("BitVector::from_string: bad character");
    }
  }
  return v;
}

BitVector BitVector::from_uint(std::uint64_t value, std::size_t len) {
  BitVector v(len);
  for (std::size_t i = 0; i < len && i < 64; ++i) v.set(i, (value >> i) & 1U);
  return v;
}

BitVector BitVector::random(std::size_t len, Rng& rng) {
  BitVector v(len);
  for (auto& w : v.words_) w = rng();
  if (len % 64 != 0 && !v.words_.empty()) {
    v.words_.back() &= (std::uint64_t{1} << (len % 64)) - 1;
  }
  return v;
}

void BitVector::set(std::size_t i, bool v) {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (v) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

BitVector& BitVector::operator^=(const BitVector& other) {
  check_same_size(len_, other.len_, "BitVector xor");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

bool BitVector::dot(const BitVector& other) const {
  check_same_size(len_, other.len_, "BitVector dot");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
  return std::popcount(acc) & 1;
}

bool BitVector::is_zero() const {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

std::size_t BitVector::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::optional<std::size_t> BitVector::first_set() const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] != 0) {
      return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
    }
  }
  return std::nullopt;
}

BitVector BitVector::slice(std::size_t begin, std::size_t len) const {
  if (begin + len > len_) throw DimensionError("BitVector::slice out of range");
  BitVector out(len);
  for (std::size_t i = 0; i < len; ++i) out.set(i, get(begin + i));
  return out;
}

void BitVector::append(const BitVector& tail) {
  const std::size_t old = len_;
  len_ += tail.len_;
  words_.resize(word_count(len_), 0);
  for (std::size_t i = 0; i < tail.len_; ++i) set(old + i, tail.get(i));
}

std::uint64_t BitVector::to_uint() const {
  if (len_ > 64) throw DimensionError("BitVector::to_uint: more than 64 bits");
  return words_.empty() ? 0 : words_[0];
}

std::string BitVector::to_string() const {
  std::string s(len_, '0');
  for (std::size_t i = 0; i < len_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

bool operator<(const BitVector& a, const BitVector& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.get(i) != b.get(i)) return b.get(i);
  }
  return a.size() < b.size();
}

BitVector concat(const BitVector& head, const BitVector& tail) {
  BitVector out = head;
  out.append(tail);
  return out;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::random(std::size_t rows, std::size_t cols, Rng& rng) {
  BitMatrix m(rows, cols);
  for (auto& r : m.rows_) r = BitVector::random(cols, rng);
  return m;
}

BitMatrix BitMatrix::from_rows(std::vector<BitVector> rows, std::size_t cols) {
  for (const auto& r : rows) check_same_size(r.size(), cols, "BitMatrix::from_rows");
  BitMatrix m;
  m.cols_ = cols;
  m.rows_ = std::move(rows);
  return m;
}

BitMatrix BitMatrix::from_row_major(const BitVector& bits, std::size_t rows,
                                    std::size_t cols) {
  check_same_size(bits.size(), rows * cols, "BitMatrix::from_row_major");
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) m.rows_[r] = bits.slice(r * cols, cols);
  return m;
}

BitMatrix BitMatrix::from_strings(std::initializer_list<std::string_view> rows) {
  std::vector<BitVector> parsed;
  for (auto s : rows) parsed.push_back(BitVector::from_string(s));
  const std::size_t cols = parsed.empty() ? 0 : parsed.front().size();
  return from_rows(std::move(parsed), cols);
}

BitVector BitMatrix::column(std::size_t c) const {
  BitVector out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out.set(r, get(r, c));
  return out;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (get(r, c)) t.set(c, r, true);
    }
  }
  return t;
}

BitVector BitMatrix::to_row_major() const {
  BitVector out;
  for (const auto& r : rows_) out.append(r);
  return out;
}

BitVector matvec(const BitMatrix& m, const BitVector& x) {
  check_same_size(m.cols(), x.size(), "matvec");
  BitVector out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (m.row(r).dot(x)) out.set(r, true);
  }
  return out;
}

BitMatrix multiply(const BitMatrix& a, const BitMatrix& b) {
  check_same_size(a.cols(), b.rows(), "multiply");
  BitMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a.get(r, k)) out.row(r) ^= b.row(k);
    }
  }
  return out;
}

std::size_t rank(const BitMatrix& m) { return reduce(m).pivots.size(); }

std::vector<BitVector> kernel_basis(const BitMatrix& m) {
  const Echelon e = reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<BitVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    BitVector v(m.cols());
    v.set(free, true);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      if (e.reduced.get(r, free)) v.set(e.pivots[r], true);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<BitVector> solve(const BitMatrix& m, const BitVector& b) {
  check_same_size(m.rows(), b.size(), "solve");
  BitMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    aug.row(r) = concat(m.row(r), BitVector::from_uint(b.get(r), 1));
  }
  const Echelon e = reduce(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  BitVector z(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    z.set(e.pivots[r], e.reduced.get(r, m.cols()));
  }
  return z;
}

BitVector sample_with_parity(const BitVector& x, bool bit, Rng& rng) {
  BitVector u = BitVector::random(x.size(), rng);
  if (u.dot(x) != bit) {
    const auto pos = x.first_set();
    if (!pos) throw std::invalid_argument("sample_with_parity: x = 0 with parity 1");
    // Flipping a coordinate in the support of x is a bijection between the
    // two parity classes, so the result stays uniform.
    u.flip(*pos);
  }
  return u;
}

RankSample sample_rank_constrained_counted(
    std::size_t rows, std::size_t cols,
    const std::optional<BitVector>& annihilated, std::size_t target_rank,
    Rng& rng, std::size_t max_attempts) {
  const bool constrained = annihilated && !annihilated->is_zero();
  if (annihilated) check_same_size(annihilated->size(), cols, "sample_rank_constrained");
  if (target_rank > std::min(rows, cols) || (constrained && target_rank + 1 > cols)) {
    throw std::invalid_argument("sample_rank_constrained: infeasible constraints");
  }
  const BitVector zero(cols);
  const BitVector& d = constrained ? *annihilated : zero;
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) m.row(r) = sample_with_parity(d, false, rng);
    if (rank(m) == target_rank) return {std::move(m), attempt};
  }
  throw std::runtime_error("sample_rank_constrained: attempt budget exhausted");
}

BitMatrix sample_rank_constrained(std::size_t rows, std::size_t cols,
                                  const std::optional<BitVector>& annihilated,
                                  std::size_t target_rank, Rng& rng) {
  return sample_rank_constrained_counted(rows, cols, annihilated, target_rank, rng)
      .matrix;
}

}  // namespace qsilab::f2
