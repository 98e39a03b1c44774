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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "irps/error.h"
#include "irps/rng.h"

namespace irps {
namespace {

constexpr double kZ95 = 1.959963984540054;

double Mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

MeanCi NormalMeanCi(std::span<const double> xs) {
  if (xs.empty()) throw Error("confidence interval of an empty sample");
  MeanCi ci;
  ci.mean = Mean(xs);
  if (xs.size() < 2) return ci;
  double ss = 0.0;
  for (double x : xs) ss += (x - ci.mean) * (x - ci.mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  ci.half_width = kZ95 * sd / std::sqrt(static_cast<double>(xs.size()));
  return ci;
}

MeanCi BootstrapMeanCi(std::span<const double> xs, int resamples, std::uint64_t seed) {
  if (xs.empty()) throw Error("confidence interval of an empty sample");
  if (resamples < 1) throw Error("bootstrap needs at least one resample");
  Rng rng(seed);
  const int n = static_cast<int>(xs.size());
  std::vector<double> means(resamples);
  for (double& m : means) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += xs[rng.UniformInt(n)];
    m = s / n;
  }
  std::sort(means.begin(), means.end());
  auto quantile = [&](double q) {
    const double pos = q * (resamples - 1);
    const int lo = static_cast<int>(std::floor(pos));
    const int hi = std::min(lo + 1, resamples - 1);
    return means[lo] + (pos - lo) * (means[hi] - means[lo]);
  };
  MeanCi ci;
  ci.mean = Mean(xs);
  ci.half_width = 0.5 * (quantile(0.975) - quantile(0.025));
  return ci;
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<double> AverageRanks(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

WilcoxonResult WilcoxonSignedRank(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error("wilcoxon: samples differ in length (" + std::to_string(x.size()) + " vs " +
                std::to_string(y.size()) + ")");
  }
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) d.push_back(x[i] - y[i]);
  }
  if (d.size() < 5) {
    throw Error("wilcoxon: need at least 5 nonzero differences, got " +
                std::to_string(d.size()));
  }
  std::vector<double> mags(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) mags[i] = std::fabs(d[i]);
  const std::vector<double> ranks = AverageRanks(mags);

  WilcoxonResult r;
  r.n = static_cast<int>(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    (d[i] > 0 ? r.w_plus : r.w_minus) += ranks[i];
  }
  r.statistic = std::min(r.w_plus, r.w_minus);

  const double n = r.n;
  double tie_term = 0.0;
  std::vector<double> sorted = mags;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double mean = n * (n + 1) / 4.0;
  const double var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0;
  r.z = var > 0 ? (r.statistic - mean) / std::sqrt(var) : 0.0;
  r.p = std::min(1.0, 2.0 * NormalCdf(-std::fabs(r.z)));
  return r;
}

std::vector<double> Bonferroni(std::span<const double> p_values) {
  const double m = static_cast<double>(p_values.size());
  std::vector<double> out;
  out.reserve(p_values.size());
  for (double p : p_values) out.push_back(std::min(1.0, p * m));
  return out;
}

}  // namespace irps
