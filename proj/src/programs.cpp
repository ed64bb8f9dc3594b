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


#include "qsilab/programs.hpp"

#include <stdexcept>

namespace qsilab::programs {

ClassicalFunction ggm_function(const crypto::GgmKey& key) {
  return {key.input_len, key.output_len,
          [key](const BitVector& x) -> std::optional<BitVector> { return crypto::ggm_eval(key, x); }};
}

ClassicalFunction punctured_function(const crypto::PuncturedKey& key) {
  return {key.input_len(), key.output_len(),
          [key](const BitVector& x) { return key.eval(x); }};
}

PlainProgram::PlainProgram(ClassicalFunction f, Kind kind) : f_(std::move(f)), kind_(kind) {
  if (!f_.f) throw std::invalid_argument("PlainProgram: empty function");
}

qsio::Evaluation PlainProgram::evaluate(const BitVector& x, Rng&) {
  check_input(x);
  return {f_(x), true};
}

std::unique_ptr<PlainProgram> make_plain(ClassicalFunction f) {
  return std::make_unique<PlainProgram>(std::move(f));
}

std::unique_ptr<PlainProgram> make_point(const std::set<BitVector>& points, std::size_t in_len) {
  for (const auto& p : points) {
    if (p.size() != in_len) throw f2::DimensionError("make_point: point length mismatch");
  }
  ClassicalFunction f{in_len, 1, [points](const BitVector& x) -> std::optional<BitVector> {
                        return BitVector::from_uint(points.count(x), 1);
                      }};
  return std::make_unique<PlainProgram>(std::move(f), Kind::Point);
}

PatchedProgram::PatchedProgram(ClassicalFunction g, ue::KeyTestedCue scheme,
                               ue::KeyTestedCueCiphertext sigma, bool tilde)
    : g_(std::move(g)), scheme_(std::move(scheme)), sigma_(std::move(sigma)), tilde_(tilde) {
  if (g_.in_len != scheme_.key_len()) {
    throw f2::DimensionError("patched program: g input length differs from the key length");
  }
  const std::size_t expect = tilde_ ? g_.in_len : g_.out_len;
  if (sigma_.inner.pad_a.size() != expect || sigma_.inner.pad_b.size() != expect) {
    throw f2::DimensionError("patched program: plaintext length mismatch");
  }
}

qsio::Evaluation PatchedProgram::evaluate(const BitVector& z, Rng& rng) {
  check_input(z);
  const auto r = scheme_.test(z, sigma_, rng);
  if (!r) return {g_(z), true};
  auto y = scheme_.decrypt(*r, z, sigma_, rng);
  if (tilde_) return {g_(y), false};
  return {std::move(y), false};
}

std::unique_ptr<PatchedProgram> make_patched(ClassicalFunction g, const ue::KeyTestedCue& scheme,
                                             ue::KeyTestedCueCiphertext sigma) {
  return std::make_unique<PatchedProgram>(std::move(g), scheme, std::move(sigma), false);
}

std::unique_ptr<PatchedProgram> make_tilde_patched(ClassicalFunction g,
                                                   const ue::KeyTestedCue& scheme,
                                                   ue::KeyTestedCueCiphertext sigma) {
  return std::make_unique<PatchedProgram>(std::move(g), scheme, std::move(sigma), true);
}

SearchPatchedProgram::SearchPatchedProgram(ClassicalFunction f, ue::KeyTestedUe scheme,
                                           ue::KeyTestedUeCiphertext sigma, std::size_t prefix_len)
    : f_(std::move(f)), scheme_(std::move(scheme)), sigma_(std::move(sigma)),
      prefix_len_(prefix_len) {
  if (f_.in_len != scheme_.key_len()) {
    throw f2::DimensionError("search program: f input length differs from the key length");
  }
}

qsio::Evaluation SearchPatchedProgram::evaluate(const BitVector& z, Rng& rng) {
  check_input(z);
  if (!scheme_.test(z, sigma_, rng)) return {f_(z), true};
  const auto m = scheme_.decrypt(z, sigma_, rng);
  if (m.size() < prefix_len_ || !m.slice(0, prefix_len_).is_zero()) return {std::nullopt, false};
  const auto g = crypto::parse_ggm_key(m.slice(prefix_len_, m.size() - prefix_len_));
  if (!g || g->input_len != f_.in_len || g->output_len != f_.out_len) return {std::nullopt, false};
  return {crypto::ggm_eval(*g, z), false};
}

std::unique_ptr<SearchPatchedProgram> make_search_patched(ClassicalFunction f,
                                                          const ue::KeyTestedUe& scheme,
                                                          ue::KeyTestedUeCiphertext sigma,
                                                          std::size_t prefix_len) {
  return std::make_unique<SearchPatchedProgram>(std::move(f), scheme, std::move(sigma),
                                                prefix_len);
}

BitVector search_message(const crypto::GgmKey& key, std::size_t prefix_len) {
  return f2::concat(BitVector(prefix_len), crypto::serialize_ggm_key(key));
}

std::pair<BitVector, BitVector> coset_pair(const BitMatrix& t, const BitVector& w) {
  if (t.cols() != t.rows() + 1 || f2::rank(t) != t.rows()) {
    throw ue::ParameterError("coset_pair: T must have rank rows = cols - 1");
  }
  const auto p = f2::solve(t, w);
  if (!p) throw ue::ParameterError("coset_pair: w outside the image of T");
  const auto k = f2::kernel_basis(t);
  BitVector a = *p;
  BitVector b = *p ^ k.at(0);
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

std::size_t first_difference(const BitVector& x0, const BitVector& x1) {
  if (x0.size() != x1.size()) throw f2::DimensionError("first_difference: length mismatch");
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (x0.get(i) != x1.get(i)) return i;
  }
  throw std::invalid_argument("first_difference: equal strings");
}

const BitVector& x_of(bool c, const BitVector& x0, const BitVector& x1) {
  return x0.get(first_difference(x0, x1)) == c ? x0 : x1;
}

PointCosetProgram::PointCosetProgram(BitMatrix t, ue::KeyTestedUe scheme,
                                     ue::KeyTestedUeCiphertext sigma)
    : t_(std::move(t)), scheme_(std::move(scheme)), sigma_(std::move(sigma)) {
  if (t_.cols() != t_.rows() + 1 || f2::rank(t_) != t_.rows()) {
    throw ue::ParameterError("P_T: T must have rank rows = cols - 1");
  }
  if (scheme_.key_len() != t_.rows()) {
    throw f2::DimensionError("P_T: key length must equal the rows of T");
  }
  if (sigma_.inner.pad.size() != 1) throw f2::DimensionError("P_T: sigma must encrypt one bit");
}

qsio::Evaluation PointCosetProgram::evaluate(const BitVector& z, Rng& rng) {
  check_input(z);
  const auto w = f2::matvec(t_, z);
  if (!scheme_.test(w, sigma_, rng)) return {BitVector(1), true};
  const auto [x0, x1] = coset_pair(t_, w);
  const bool c = scheme_.decrypt(w, sigma_, rng).get(0);
  return {BitVector::from_uint(x_of(c, x0, x1) == z ? 1 : 0, 1), false};
}

std::unique_ptr<PointCosetProgram> make_point_coset(BitMatrix t, const ue::KeyTestedUe& scheme,
                                                    ue::KeyTestedUeCiphertext sigma) {
  return std::make_unique<PointCosetProgram>(std::move(t), scheme, std::move(sigma));
}

ue::KeyTestedUe point_coset_scheme(std::size_t lambda) {
  return ue::compile_key_testing(ue::SchemeParams::toy_ue(2, 1, ue::PadMode::Direct), lambda);
}

}  // namespace qsilab::programs
