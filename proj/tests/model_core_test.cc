// Copyright 2026 The actlab Authors
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

#include "core/model_core.h"

#include <cmath>
#include <vector>

#include "core/errors.h"
#include "core/quadrature.h"
#include "doctest.h"
#include "oracles.h"

namespace actlab {
namespace {

ModelParams Params(DistributionSpec spec, double y = 0.0, double q = 0.5,
                   std::optional<double> bias = std::nullopt) {
  return ModelParams(y, q, BeliefDistribution::Make(spec), bias);
}

TEST_CASE("quadrature integrates polynomials and kinks") {
  CHECK(IntegrateAdaptive([](double x) { return x * x; }, 0, 1).value ==
        doctest::Approx(1.0 / 3).epsilon(1e-14));
  auto kink = [](double x) { return std::fabs(x - 0.3); };
  CHECK(IntegrateAdaptive(kink, 0, 1).value ==
        doctest::Approx(0.045 + 0.245).epsilon(1e-12));
  CHECK(IntegrateAdaptive([](double) { return 1.0; }, 0.5, 0.5).value == 0.0);
}

TEST_CASE("distribution means") {
  CHECK(BeliefDistribution::Make(UniformSpec{0, 1}).mean() ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(BeliefDistribution::Make(
            DiscreteGridSpec{{{0.2, 0.5}, {0.8, 0.5}}})
            .mean() == doctest::Approx(0.5).epsilon(1e-15));
  auto beta = BeliefDistribution::Make(BetaSpec{2, 2});
  const double empirical = oracle::EmpiricalBetaMean(2, 2, 1000000, 17);
  CHECK(std::fabs(beta.mean() - empirical) < 1e-3);
  CHECK(std::fabs(beta.Expect([](double) { return 1.0; }) - 1.0) < 1e-10);
}

TEST_CASE("distribution mass and mean match an independent Simpson oracle") {
  const std::vector<std::pair<double, double>> shapes = {
      {2, 5}, {5, 2}, {0.7, 1.3}, {3, 3}, {1, 1}, {0.5, 0.5}, {3, 0.5}};
  for (auto [a, b] : shapes) {
    CAPTURE(a);
    CAPTURE(b);
    auto dist = BeliefDistribution::Make(BetaSpec{a, b});
    CHECK(std::fabs(dist.Expect([](double) { return 1.0; }) - 1.0) < 1e-10);
    CHECK(dist.mean() == doctest::Approx(a / (a + b)).epsilon(1e-10));
    if (a >= 1 && b >= 1) {
      const double sq = oracle::Simpson(
          [&](double x) { return x * x * oracle::BetaDensity(x, a, b); }, 0,
          1, 200000);
      CHECK(dist.Expect([](double x) { return x * x; }) ==
            doctest::Approx(sq).epsilon(1e-9));
    }
  }
  auto pw = BeliefDistribution::Make(
      PiecewiseConstantSpec{{0.0, 0.3, 1.0}, {2.0, 0.5}});
  // Raw masses 0.6 and 0.35 rescale to 0.6/0.95 and 0.35/0.95.
  const double mean = (0.6 * 0.15 + 0.35 * 0.65) / 0.95;
  CHECK(pw.mean() == doctest::Approx(mean).epsilon(1e-12));
  CHECK(pw.Density(0.1) == doctest::Approx(2.0 / 0.95).epsilon(1e-12));
}

TEST_CASE("discrete priors normalize and merge atoms") {
  auto dist = BeliefDistribution::Make(
      DiscreteGridSpec{{{0.8, 1.0}, {0.2, 2.0}, {0.8, 1.0}}});
  CHECK(dist.AtomMass(0.2) == doctest::Approx(0.5));
  CHECK(dist.AtomMass(0.8) == doctest::Approx(0.5));
  CHECK(dist.AtomMass(0.5) == 0.0);
  CHECK(dist.mean() == doctest::Approx(0.5));
  CHECK(dist.support_lo() == 0.2);
  CHECK(dist.support_hi() == 0.8);
}

TEST_CASE("invalid distributions are rejected") {
  auto code = [](const DistributionSpec& spec) {
    try {
      BeliefDistribution::Make(spec);
    } catch (const ModelError& e) {
      return e.code();
    }
    return ErrorCode::kOk;
  };
  CHECK(code(UniformSpec{-0.1, 0.5}) == ErrorCode::kInvalidArgument);
  CHECK(code(UniformSpec{0.5, 0.5}) == ErrorCode::kInvalidArgument);
  CHECK(code(UniformSpec{0.2, 1.1}) == ErrorCode::kInvalidArgument);
  CHECK(code(BetaSpec{0, 1}) == ErrorCode::kInvalidArgument);
  CHECK(code(DiscreteGridSpec{{{0.5, 0.0}}}) == ErrorCode::kInvalidArgument);
  CHECK(code(DiscreteGridSpec{{{0.0, 1.0}}}) == ErrorCode::kInvalidArgument);
  CHECK(code(DiscreteGridSpec{{{0.5, -1.0}, {0.2, 2.0}}}) ==
        ErrorCode::kInvalidArgument);
  CHECK(code(PiecewiseConstantSpec{{0.0, 0.5}, {1.0, 2.0}}) ==
        ErrorCode::kInvalidArgument);
  CHECK(code(PiecewiseConstantSpec{{0.0, 0.5, 0.4}, {1.0, 2.0}}) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("params validation and bias classification") {
  auto dist = BeliefDistribution::Make(UniformSpec{0, 1});
  CHECK_THROWS_AS(ModelParams(-0.1, 0.5, dist), ModelError);
  CHECK_THROWS_AS(ModelParams(0.5, 0.0, dist), ModelError);
  CHECK_THROWS_AS(ModelParams(0.5, 1.0, dist), ModelError);
  CHECK_THROWS_AS(ModelParams(0.5, 0.5, dist, 1.0), ModelError);
  CHECK(ModelParams(0.5, 0.5, dist).bias() == doctest::Approx(0.5));
  CHECK(ModelParams(0.5, 0.5, dist).bias_kind() == BiasKind::kActionNeutral);
  CHECK(ModelParams(0.5, 0.5, dist, 0.3).bias_kind() == BiasKind::kProAction);
  CHECK(ModelParams(0.5, 0.5, dist, 0.7).bias_kind() ==
        BiasKind::kAgainstAction);
  CHECK(ModelParams(0.5, 0.5, dist, 0.5 + 1e-13).bias_kind() ==
        BiasKind::kActionNeutral);
}

TEST_CASE("voter utility values") {
  auto neutral = Params(UniformSpec{0, 1});
  CHECK(VoterUtility(PolicyChoice::kAct, State::kBad, neutral) ==
        doctest::Approx(0.5));
  CHECK(VoterUtility(PolicyChoice::kAct, State::kGood, neutral) ==
        doctest::Approx(0.5));
  CHECK(VoterUtility(PolicyChoice::kNotAct, State::kBad, neutral) == 0.0);
  CHECK(VoterUtility(PolicyChoice::kNotAct, State::kGood, neutral) == 1.0);

  auto pro = Params(UniformSpec{0, 1}, 0.0, 0.5, 0.25);
  CHECK(VoterUtility(PolicyChoice::kNotAct, State::kGood, pro) ==
        doctest::Approx(2.0));
  CHECK(VoterUtility(PolicyChoice::kAct, State::kBad, pro) ==
        doctest::Approx(1.5));
  CHECK(VoterUtility(PolicyChoice::kNotAct, State::kBad, pro) == 0.0);
}

TEST_CASE("neutral utility equals the unbiased form for many priors") {
  const std::vector<DistributionSpec> specs = {
      UniformSpec{0.1, 0.7}, BetaSpec{2, 5}, BetaSpec{5, 2},
      DiscreteGridSpec{{{0.1, 1}, {0.6, 3}}}};
  for (const auto& spec : specs) {
    auto params = Params(spec);
    const double p = params.mean();
    for (State s : {State::kBad, State::kGood}) {
      CHECK(VoterUtility(PolicyChoice::kAct, s, params) == 1.0 - p);
    }
    CHECK(VoterUtility(PolicyChoice::kNotAct, State::kGood, params) == 1.0);
    CHECK(VoterUtility(PolicyChoice::kNotAct, State::kBad, params) == 0.0);
  }
}

TEST_CASE("point belief at the cutoff leaves the voter indifferent") {
  for (double bias : {0.05, 0.2, 0.5, 0.61, 0.9}) {
    auto params = Params(BetaSpec{2, 3}, 0.0, 0.5, bias);
    const double act = ExpectedVoterUtility(PolicyChoice::kAct, bias, params);
    const double stay =
        ExpectedVoterUtility(PolicyChoice::kNotAct, bias, params);
    CHECK(std::fabs(act - stay) <= 1e-12);
  }
}

TEST_CASE("strategies evaluate as documented") {
  auto th = CompetentStrategy::Threshold(0.4, 0.25);
  CHECK(th(0.39) == 0.0);
  CHECK(th(0.4) == 0.25);
  CHECK(th(0.41) == 1.0);

  auto lin = CompetentStrategy::Tabulated({0, 1}, {0, 1}, Interpolation::kLinear);
  CHECK(lin(0.3) == doctest::Approx(0.3));

  auto step = CompetentStrategy::Tabulated({0, 0.5, 1}, {1, 0, 0},
                                           Interpolation::kStep);
  CHECK(step(0.49) == 1.0);
  CHECK(step(0.5) == 0.0);
  CHECK(step(1.0) == 0.0);

  CHECK_THROWS_AS(CompetentStrategy::Tabulated({0.1, 1}, {0, 1},
                                               Interpolation::kLinear),
                  ModelError);
  CHECK_THROWS_AS(CompetentStrategy::Tabulated({0, 0.5, 0.5, 1}, {0, 1, 1, 1},
                                               Interpolation::kLinear),
                  ModelError);
  CHECK_THROWS_AS(CompetentStrategy::Tabulated({0, 1}, {0, 1.5},
                                               Interpolation::kLinear),
                  ModelError);
  CHECK_THROWS_AS(CompetentStrategy::Threshold(0.5, -0.1), ModelError);
  CHECK_THROWS_AS(StrategyProfile::Make(CompetentStrategy::Constant(1), 2.0),
                  ModelError);
}

TEST_CASE("atoms at a threshold receive the mixing weight") {
  auto dist = BeliefDistribution::Make(
      DiscreteGridSpec{{{0.25, 0.5}, {0.5, 0.25}, {0.75, 0.25}}});
  auto th = CompetentStrategy::Threshold(0.5, 0.2);
  CHECK(dist.Expect([&](double p) { return th(p); }) ==
        doctest::Approx(0.25 * 0.2 + 0.25));
}

TEST_CASE("enum names") {
  CHECK(std::string(ToString(State::kBad)) == "B");
  CHECK(std::string(ToString(PolicyChoice::kNotAct)) == "not_act");
  CHECK(std::string(ToString(VoterKind::kForwardLooking)) == "forward");
  CHECK(std::string(ToString(BiasKind::kAgainstAction)) == "against_action");
}

}  // namespace
}  // namespace actlab
