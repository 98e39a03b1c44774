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


#include "irps/kernels.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "irps/dsl/builtins.h"
#include "irps/error.h"
#include "irps/objective.h"
#include "irps/rng.h"
#include "test_util.h"

namespace irps::kernels {
namespace {

TEST(KernelsTest, BackendNamesAndOverride) {
  EXPECT_EQ(BackendName(Backend::kScalar), "scalar");
  SetBackendOverride(Backend::kScalar);
  EXPECT_EQ(ActiveBackend(), Backend::kScalar);
  SetBackendOverride(std::nullopt);
  EXPECT_EQ(ActiveBackend(), Avx2Available() ? Backend::kAvx2 : Backend::kScalar);
}

TEST(KernelsTest, TangentOpsMatchScalarReference) {
  if (!Avx2Available()) GTEST_SKIP() << "no AVX2 on this machine";
  Rng rng(5);
  for (int width : {4, 8, 12}) {
    for (TangentOp op : {TangentOp::kScale, TangentOp::kAxpy, TangentOp::kAxpby}) {
      for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(width), y(width), d0(width);
        for (int i = 0; i < width; ++i) {
          x[i] = rng.Normal();
          y[i] = rng.Normal();
          d0[i] = rng.Normal();
        }
        const double a = rng.Normal(), b = rng.Normal();
        std::vector<double> ds = d0, dv = d0;
        ApplyTangent(Backend::kScalar, op, width, ds.data(), a, x.data(), b, y.data());
        ApplyTangent(Backend::kAvx2, op, width, dv.data(), a, x.data(), b, y.data());
        for (int i = 0; i < width; ++i) {
          EXPECT_NEAR(ds[i], dv[i], 1e-13 * (1 + std::abs(ds[i])));
        }
      }
    }
  }
}

TEST(KernelsTest, RejectsUnsupportedWidth) {
  double d[3] = {0, 0, 0};
  EXPECT_THROW(ApplyTangent(Backend::kScalar, TangentOp::kScale, 3, d, 1.0, d, 0.0, d),
               ContractViolation);
}

TEST(KernelsTest, GradientsAgreeAcrossBackends) {
  if (!Avx2Available()) GTEST_SKIP() << "no AVX2 on this machine";
  const std::vector<GameTrajectory> games = testing::RandomGames(4, 80, 31);
  Rng rng(7);
  std::vector<std::string> specs = {"csewa"};
  for (const std::string& n : dsl::BuiltinNames()) specs.push_back("builtin:" + n);
  for (const std::string& spec : specs) {
    const Model m = Model::FromSpec(spec);
    std::vector<double> theta(m.param_count());
    for (double& v : theta) v = 0.5 * rng.Normal();
    const NllGrad s = NllAndGradient(m, theta, games, {}, Backend::kScalar);
    const NllGrad v = NllAndGradient(m, theta, games, {}, Backend::kAvx2);
    EXPECT_NEAR(s.nll, v.nll, 1e-9 * std::abs(s.nll)) << spec;
    ASSERT_EQ(s.grad.size(), v.grad.size());
    for (std::size_t i = 0; i < s.grad.size(); ++i) {
      EXPECT_NEAR(s.grad[i], v.grad[i], 1e-9 * (1 + std::abs(s.grad[i]))) << spec;
    }
  }
}

}  // namespace
}  // namespace irps::kernels
