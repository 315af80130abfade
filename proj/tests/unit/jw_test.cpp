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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"

namespace xroute {
namespace {

using testing::Rng;
using testing::fermion_matrix;
using testing::max_abs_diff;
using testing::pauli_matrix;

TEST(JordanWigner, NumberOperator) {
  auto out = jw_encode(parse_fermion_terms("1.0 0+ 0-\n"), 1);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].str(), "I");
  EXPECT_NEAR(out[0].coefficient, 0.5, 1e-12);
  EXPECT_EQ(out[1].str(), "Z");
  EXPECT_NEAR(out[1].coefficient, -0.5, 1e-12);
}

TEST(JordanWigner, EmptyAndInvalidInput) {
  EXPECT_TRUE(jw_encode({}, 3).empty());
  EXPECT_THROW(jw_encode(parse_fermion_terms("1.0 0+\n"), 1), InputError);
  EXPECT_THROW(jw_encode(parse_fermion_terms("1.0 3+ 3-\n"), 2), InputError);
  EXPECT_THROW(parse_fermion_terms("1.0 0*\n"), InputError);
  EXPECT_THROW(parse_fermion_terms("1.0 -1+\n"), InputError);
}

TEST(JordanWigner, H2FixtureGivesFifteenStrings) {
  auto out = jw_encode(parse_fermion_terms(testing::fixture("h2.ferm")), 4);
  std::set<std::string> got;
  for (const auto& p : out) got.insert(p.str());
  const std::set<std::string> want{"IIII", "ZIII", "IZII", "IIZI", "IIIZ", "ZZII", "ZIZI", "IZZI",
                                   "ZIIZ", "IZIZ", "IIZZ", "YYXX", "XYYX", "YXXY", "XXYY"};
  EXPECT_EQ(got, want);
  EXPECT_EQ(out.size(), 15u);
  // Output is sorted with I < X < Y < Z.
  for (std::size_t i = 1; i < out.size(); ++i) {
    auto rank = [](const std::string& s) {
      std::string r;
      for (char c : s) r.push_back(static_cast<char>('0' + std::string("IXYZ").find(c)));
      return r;
    };
    EXPECT_LT(rank(out[i - 1].str()), rank(out[i].str()));
  }
}

TEST(JordanWigner, H2MatchesDenseOracle) {
  auto terms = parse_fermion_terms(testing::fixture("h2.ferm"));
  EXPECT_LT(max_abs_diff(fermion_matrix(terms, 4), pauli_matrix(jw_encode(terms, 4), 4)), 1e-9);
}

TEST(JordanWignerProperty, RandomHermitianOperatorsMatchDenseOracle) {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testing::uniform_int(rng, 2, 3);
    std::vector<FermionTerm> terms;
    for (int k = testing::uniform_int(rng, 1, 4); k > 0; --k) {
      FermionTerm t;
      t.coefficient = testing::uniform_real(rng, -1.0, 1.0);
      for (int j = testing::uniform_int(rng, 1, 4); j > 0; --j)
        t.ops.push_back({testing::uniform_int(rng, 0, n - 1), testing::coin(rng, 0.5)});
      FermionTerm adj{t.coefficient, {}};
      for (auto it = t.ops.rbegin(); it != t.ops.rend(); ++it) adj.ops.push_back({it->mode, !it->create});
      terms.push_back(t);
      terms.push_back(adj);
    }
    auto enc = jw_encode(terms, n);
    ASSERT_LT(max_abs_diff(fermion_matrix(terms, n), pauli_matrix(enc, n)), 1e-9) << "trial " << trial;
  }
}

}  // namespace
}  // namespace xroute
