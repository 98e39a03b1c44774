// Copyright 2026 The IRPS Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "irps/stats.h"

#include <gtest/gtest.h>

#include <cmath>

#include "irps/error.h"

namespace irps {
namespace {

TEST(WilcoxonTest, HandRankedExample) {
  const std::vector<double> x = {1, -2, 3, -4, 5};
  const std::vector<double> y(5, 0.0);
  const WilcoxonResult r = WilcoxonSignedRank(x, y);
  EXPECT_EQ(r.n, 5);
  EXPECT_DOUBLE_EQ(r.w_plus, 9.0);
  EXPECT_DOUBLE_EQ(r.w_minus, 6.0);
  EXPECT_DOUBLE_EQ(r.statistic, 6.0);
}

TEST(WilcoxonTest, AllPositiveTwenty) {
  std::vector<double> y(20), x(20);
  for (int i = 0; i < 20; ++i) {
    y[i] = i * 0.37;
    x[i] = y[i] + 100 + i;
  }
  const WilcoxonResult r = WilcoxonSignedRank(x, y);
  EXPECT_DOUBLE_EQ(r.w_minus, 0.0);
  EXPECT_DOUBLE_EQ(r.w_plus, 210.0);
  // z = (0 - 105) / sqrt(20 * 21 * 41 / 24).
  EXPECT_NEAR(r.z, -105.0 / std::sqrt(20.0 * 21 * 41 / 24), 1e-12);
  EXPECT_LT(r.p, 0.001);
}

TEST(WilcoxonTest, IdenticalSamplesAreAnError) {
  const std::vector<double> x = {1, 2, 3, 4, 5, 6};
  EXPECT_THROW(WilcoxonSignedRank(x, x), Error);
  const std::vector<double> shorter = {1, 2};
  EXPECT_THROW(WilcoxonSignedRank(x, shorter), Error);
}

TEST(WilcoxonTest, SymmetricUnderSwap) {
  const std::vector<double> x = {0.3, 1.2, -0.4, 2.2, 0.9, 1.1, -0.1};
  const std::vector<double> y = {0.1, 0.2, 0.4, 0.2, 0.1, 0.5, 0.3};
  const WilcoxonResult a = WilcoxonSignedRank(x, y);
  const WilcoxonResult b = WilcoxonSignedRank(y, x);
  EXPECT_DOUBLE_EQ(a.w_plus, b.w_minus);
  EXPECT_NEAR(a.p, b.p, 1e-15);
}

TEST(RanksTest, TiesGetAverageRanks) {
  const std::vector<double> xs = {3, 1, 3, 2};
  const std::vector<double> r = AverageRanks(xs);
  EXPECT_DOUBLE_EQ(r[0], 3.5);
  EXPECT_DOUBLE_EQ(r[1], 1.0);
  EXPECT_DOUBLE_EQ(r[2], 3.5);
  EXPECT_DOUBLE_EQ(r[3], 2.0);
}

TEST(BonferroniTest, ScalesAndCaps) {
  const std::vector<double> p = {0.01, 0.2, 0.5};
  const std::vector<double> adj = Bonferroni(p);
  EXPECT_DOUBLE_EQ(adj[0], 0.03);
  EXPECT_DOUBLE_EQ(adj[1], 0.6000000000000001);
  EXPECT_DOUBLE_EQ(adj[2], 1.0);
}

TEST(CiTest, NormalCiMatchesFormula) {
  const std::vector<double> xs = {1, 2, 3, 4};
  const MeanCi ci = NormalMeanCi(xs);
  EXPECT_DOUBLE_EQ(ci.mean, 2.5);
  const double sd = std::sqrt(((1.5 * 1.5) * 2 + (0.5 * 0.5) * 2) / 3);
  EXPECT_NEAR(ci.half_width, 1.959963984540054 * sd / 2.0, 1e-12);
}

TEST(CiTest, BootstrapIsSeededAndCentred) {
  std::vector<double> xs;
  for (int i = 0; i < 50; ++i) xs.push_back(i % 7);
  const MeanCi a = BootstrapMeanCi(xs, 500, 3);
  const MeanCi b = BootstrapMeanCi(xs, 500, 3);
  EXPECT_EQ(a.half_width, b.half_width);
  EXPECT_NEAR(a.mean, 2.94, 1e-12);
  EXPECT_GT(a.half_width, 0.0);
  EXPECT_LT(a.half_width, 1.5);
}

TEST(NormalCdfTest, KnownValues) {
  EXPECT_NEAR(NormalCdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(NormalCdf(1.959963984540054), 0.975, 1e-12);
}

}  // namespace
}  // namespace irps
