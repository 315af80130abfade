// Copyright 2026 The xroute Authors
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

// Jordan-Wigner encoding of second-quantized fermionic operators.

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xroute/circuit.hpp"
#include "xroute/error.hpp"
#include "xroute/pauli.hpp"

namespace xroute {

struct LadderOp {
  int mode = 0;
  bool create = false;
};

struct FermionTerm {
  double coefficient = 0.0;
  std::vector<LadderOp> ops;  // applied as written, leftmost outermost
};

/// One term per line: `coeff p+ q+ r- s-`, `+` creates and `-` annihilates.
inline std::vector<FermionTerm> parse_fermion_terms(std::string_view text) {
  std::vector<FermionTerm> terms;
  detail::for_each_line(text, [&](int lineno, std::string_view raw) {
    auto toks = detail::split_ws(detail::strip_comment(raw));
    if (toks.empty()) return;
    FermionTerm t;
    t.coefficient = detail::parse_real(toks[0], lineno);
    for (std::size_t i = 1; i < toks.size(); ++i) {
      std::string_view tok = toks[i];
      if (tok.size() < 2 || (tok.back() != '+' && tok.back() != '-'))
        throw InputError("line " + std::to_string(lineno) + ": expected mode index followed by + or -, got '" +
                         std::string(tok) + "'");
      LadderOp op;
      op.create = tok.back() == '+';
      op.mode = detail::parse_int(tok.substr(0, tok.size() - 1), lineno);
      if (op.mode < 0) throw InputError("line " + std::to_string(lineno) + ": negative mode index");
      t.ops.push_back(op);
    }
    terms.push_back(std::move(t));
  });
  return terms;
}

namespace detail {

using cplx = std::complex<double>;
using PauliSum = std::map<std::string, cplx>;

/// a*b for single-qubit Paulis: phase and resulting operator.
inline std::pair<cplx, char> pauli_product(char a, char b) {
  if (a == 'I') return {1.0, b};
  if (b == 'I') return {1.0, a};
  if (a == b) return {1.0, 'I'};
  const cplx i(0.0, 1.0);
  // XY = iZ, YZ = iX, ZX = iY; reversed order flips the sign.
  if (a == 'X' && b == 'Y') return {i, 'Z'};
  if (a == 'Y' && b == 'X') return {-i, 'Z'};
  if (a == 'Y' && b == 'Z') return {i, 'X'};
  if (a == 'Z' && b == 'Y') return {-i, 'X'};
  if (a == 'Z' && b == 'X') return {i, 'Y'};
  return {-i, 'Y'};  // X*Z
}

inline PauliSum multiply(const PauliSum& lhs, const PauliSum& rhs) {
  PauliSum out;
  for (const auto& [sa, ca] : lhs)
    for (const auto& [sb, cb] : rhs) {
      cplx phase = ca * cb;
      std::string s(sa.size(), 'I');
      for (std::size_t k = 0; k < sa.size(); ++k) {
        auto [ph, c] = pauli_product(sa[k], sb[k]);
        phase *= ph;
        s[k] = c;
      }
      out[s] += phase;
    }
  return out;
}

/// Z on modes below j, (X -/+ iY)/2 on j, identity above.
inline PauliSum ladder(const LadderOp& op, int num_modes) {
  std::string base(static_cast<std::size_t>(num_modes), 'I');
  for (int k = 0; k < op.mode; ++k) base[static_cast<std::size_t>(k)] = 'Z';
  std::string x = base, y = base;
  x[static_cast<std::size_t>(op.mode)] = 'X';
  y[static_cast<std::size_t>(op.mode)] = 'Y';
  const cplx half_i(0.0, op.create ? -0.5 : 0.5);
  return {{x, 0.5}, {y, half_i}};
}

}  // namespace detail

/// Encodes the sum of the terms. Like terms are combined, terms below
/// 1e-12 in magnitude dropped, and the result sorted by operator string
/// (I < X < Y < Z). Throws InputError if a surviving coefficient keeps an
/// imaginary part, which means the input was not Hermitian.
inline std::vector<PauliString> jw_encode(const std::vector<FermionTerm>& terms, int num_modes) {
  if (num_modes < 0) throw InputError("mode count must be non-negative");
  detail::PauliSum total;
  for (const auto& t : terms) {
    for (const auto& op : t.ops)
      if (op.mode >= num_modes)
        throw InputError("mode index " + std::to_string(op.mode) + " exceeds mode count " + std::to_string(num_modes));
    detail::PauliSum acc{{std::string(static_cast<std::size_t>(num_modes), 'I'), t.coefficient}};
    for (const auto& op : t.ops) acc = detail::multiply(acc, detail::ladder(op, num_modes));
    for (const auto& [s, c] : acc) total[s] += c;
  }
  std::vector<PauliString> out;
  for (const auto& [s, c] : total) {
    if (std::abs(c) < 1e-12) continue;
    if (std::abs(c.imag()) > 1e-9)
      throw InputError("operator is not Hermitian: term " + s + " has imaginary coefficient " + detail::format_real(c.imag()));
    out.push_back(PauliString::parse(s, c.real()));
  }
  return out;
}

}  // namespace xroute
