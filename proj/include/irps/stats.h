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

// Small statistics toolkit: confidence intervals and paired rank tests.

#ifndef IRPS_STATS_H_
#define IRPS_STATS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace irps {

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;  // 95%
};

// Normal approximation: 1.96 * s / sqrt(n) with the n-1 sample deviation.
// A single observation has half-width 0. Throws Error when empty.
MeanCi NormalMeanCi(std::span<const double> xs);

// Percentile bootstrap of the mean; half-width is half the 2.5..97.5 span.
MeanCi BootstrapMeanCi(std::span<const double> xs, int resamples, std::uint64_t seed);

// Standard normal CDF.
double NormalCdf(double z);

// Average ranks (1-based) of xs; tied values share the mean of their ranks.
std::vector<double> AverageRanks(std::span<const double> xs);

struct WilcoxonResult {
  int n = 0;  // nonzero differences
  double w_plus = 0.0;
  double w_minus = 0.0;
  double statistic = 0.0;  // min(W+, W-)
  double z = 0.0;
  double p = 1.0;  // two-sided, normal approximation
};

// Signed-rank test on x - y. Zero differences are dropped; ties in |d|
// share average ranks and the variance carries the usual tie correction.
// Throws Error on length mismatch or fewer than 5 nonzero differences.
WilcoxonResult WilcoxonSignedRank(std::span<const double> x, std::span<const double> y);

// min(1, p * m) for each p, m = number of tests.
std::vector<double> Bonferroni(std::span<const double> p_values);

}  // namespace irps

#endif  // IRPS_STATS_H_
