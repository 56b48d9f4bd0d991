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

#include "core/belief_engine.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "core/errors.h"
#include "doctest.h"
#include "oracles.h"

namespace actlab {
namespace {

BeliefDistribution Uniform() {
  return BeliefDistribution::Make(UniformSpec{0, 1});
}

ModelParams Params(BeliefDistribution dist, double q = 0.5, double y = 0.0) {
  return ModelParams(y, q, std::move(dist));
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ModelError& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

// Random step strategy on [0,1] with monotone values; `direction` +1 for
// non-decreasing, -1 for non-increasing.
CompetentStrategy RandomMonotoneStep(std::mt19937_64& gen, int direction) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = 1 + static_cast<int>(gen() % 6);
  std::vector<double> cuts(k);
  for (double& c : cuts) c = u(gen);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> points = {0.0};
  for (double c : cuts) {
    if (c > points.back() + 1e-6 && c < 1.0 - 1e-6) points.push_back(c);
  }
  points.push_back(1.0);
  std::vector<double> values(points.size());
  for (double& v : values) v = u(gen);
  std::sort(values.begin(), values.end());
  if (direction < 0) std::reverse(values.begin(), values.end());
  return CompetentStrategy::Tabulated(points, values, Interpolation::kStep);
}

TEST_CASE("unrevealed state posterior examples") {
  auto uniform = Uniform();
  for (double pi_nc : {0.0, 0.3, 1.0}) {
    auto profile =
        StrategyProfile::Make(CompetentStrategy::Constant(0.7), pi_nc);
    CHECK(PosteriorStateUnrevealed(profile, Params(uniform)) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  // pi_c(p') = p', pi_nc = 0: the incompetent never acts, so q drops out and
  // the posterior is E[p'^2] / E[p'] = 2/3.
  auto linear = StrategyProfile::Make(
      CompetentStrategy::Tabulated({0, 1}, {0, 1}, Interpolation::kLinear), 0);
  const double num = oracle::Simpson([](double x) { return x * x; }, 0, 1);
  const double den = oracle::Simpson([](double x) { return x; }, 0, 1);
  for (double q : {0.1, 0.5, 0.99}) {
    const double p_el = PosteriorStateUnrevealed(linear, Params(uniform, q));
    CHECK(p_el == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(p_el == doctest::Approx(num / den).epsilon(1e-12));
  }
  auto never = StrategyProfile::Make(CompetentStrategy::Constant(0), 0);
  CHECK(CodeOf([&] { PosteriorStateUnrevealed(never, Params(uniform)); }) ==
        ErrorCode::kZeroActProbability);
}

TEST_CASE("strategy state covariance examples") {
  auto uniform = Uniform();
  auto up = CompetentStrategy::Threshold(0.5);
  CHECK(StrategyStateCovariance(up, uniform) ==
        doctest::Approx(1.0 / 8).epsilon(1e-12));
  CHECK(std::fabs(StrategyStateCovariance(CompetentStrategy::Constant(0.3),
                                          uniform)) < 1e-15);
  auto down = CompetentStrategy::Tabulated({0, 0.5, 1}, {1, 0, 0},
                                           Interpolation::kStep);
  CHECK(StrategyStateCovariance(down, uniform) ==
        doctest::Approx(-1.0 / 8).epsilon(1e-12));
  // Oracle: Simpson split at the jump.
  const double e_pp = oracle::PiecewiseSimpson(
      [](double x) { return x < 0.5 ? x : 0.0; }, 0, 1, {0.5});
  const double e_p = oracle::PiecewiseSimpson(
      [](double x) { return x < 0.5 ? 1.0 : 0.0; }, 0, 1, {0.5});
  CHECK(StrategyStateCovariance(down, uniform) ==
        doctest::Approx(e_pp - 0.5 * e_p).epsilon(1e-10));
}

TEST_CASE("competence posterior examples") {
  auto uniform = Uniform();
  auto pool = StrategyProfile::Make(CompetentStrategy::Constant(1), 1);
  CHECK(PosteriorCompetence(pool, Params(uniform, 0.3), PolicyChoice::kAct) ==
        doctest::Approx(0.3).epsilon(1e-14));
  auto third = StrategyProfile::Make(CompetentStrategy::Threshold(1.0 / 3), 1);
  CHECK(PosteriorCompetence(third, Params(uniform), PolicyChoice::kAct) ==
        doctest::Approx(0.4).epsilon(1e-12));
  // With pi_nc = 1 the incompetent never reaches NotAct.
  CHECK(PosteriorCompetence(third, Params(uniform), PolicyChoice::kNotAct) ==
        doctest::Approx(1.0).epsilon(1e-14));
  auto only_c = StrategyProfile::Make(CompetentStrategy::Threshold(0.5), 0);
  CHECK(PosteriorCompetence(only_c, Params(uniform), PolicyChoice::kAct) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(CodeOf([&] {
          PosteriorCompetence(pool, Params(uniform), PolicyChoice::kNotAct);
        }) == ErrorCode::kOffPath);

  auto report = ComputePosteriors(pool, Params(uniform));
  CHECK(report.q_a.has_value());
  CHECK_FALSE(report.q_na.has_value());
  CHECK(report.prob_act == doctest::Approx(1.0));
}

TEST_CASE("vote rules") {
  CHECK(BackwardVote(1.0, 0.5, PolicyChoice::kAct) == 1.0);
  CHECK(BackwardVote(0.5, 0.5, PolicyChoice::kAct) == 0.5);
  CHECK(BackwardVote(0.5, 0.5, PolicyChoice::kNotAct) == 0.5);
  CHECK(BackwardVote(0.5 + 5e-13, 0.5, PolicyChoice::kNotAct) == 0.5);
  CHECK(BackwardVote(0.0, 0.5, PolicyChoice::kAct) == 0.0);
  CHECK(BackwardVote(0.0, 0.5, PolicyChoice::kNotAct) == 1.0);
  CHECK(BackwardVote(1.0, 0.5, PolicyChoice::kNotAct) == 0.0);

  CHECK(ForwardVote(0.4, 0.5, 1.0) == 0.0);
  CHECK(ForwardVote(0.5, 0.5, 0.5) == 0.5);
  CHECK(ForwardVote(0.5 - 5e-13, 0.5, 1.0) == 1.0);
  CHECK(ForwardVote(1.0, 0.5, 1.0) == 1.0);
}

TEST_CASE("monotone strategies move the posterior in their direction") {
  std::mt19937_64 gen(20260501);
  const std::vector<BeliefDistribution> dists = {
      Uniform(), BeliefDistribution::Make(BetaSpec{2, 5}),
      BeliefDistribution::Make(
          DiscreteGridSpec{{{0.1, 1}, {0.3, 2}, {0.55, 1}, {0.9, 1}}})};
  int checked = 0;
  for (const auto& dist : dists) {
    for (int i = 0; i < 200; ++i) {
      const int direction = i % 2 ? 1 : -1;
      auto strategy = RandomMonotoneStep(gen, direction);
      const double cov = StrategyStateCovariance(strategy, dist);
      if (std::fabs(cov) <= 1e-8) continue;
      auto profile = StrategyProfile::Make(strategy, 0.4);
      auto params = Params(dist, 0.6);
      const double diff = PosteriorStateUnrevealed(profile, params) - dist.mean();
      CHECK((diff > 0 ? 1 : -1) == direction);
      CHECK((diff > 0) == (cov > 0));
      ++checked;
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("posterior sign does not depend on the incompetent weight") {
  std::mt19937_64 gen(7);
  auto dist = BeliefDistribution::Make(BetaSpec{2, 5});
  for (int i = 0; i < 50; ++i) {
    auto strategy = RandomMonotoneStep(gen, i % 2 ? 1 : -1);
    if (std::fabs(StrategyStateCovariance(strategy, dist)) <= 1e-8) continue;
    int sign = 0;
    for (double pi_nc : {0.1, 0.5, 1.0}) {
      auto profile = StrategyProfile::Make(strategy, pi_nc);
      const double d =
          PosteriorStateUnrevealed(profile, Params(dist)) - dist.mean();
      const int s = d > 0 ? 1 : -1;
      if (sign == 0) sign = s;
      CHECK(s == sign);
    }
  }
}

TEST_CASE("competence posteriors average back to the prior") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto dist = BeliefDistribution::Make(BetaSpec{5, 2});
  for (int i = 0; i < 200; ++i) {
    std::vector<double> values(5);
    for (double& v : values) v = 0.05 + 0.9 * u(gen);
    auto strategy = CompetentStrategy::Tabulated({0, 0.2, 0.5, 0.8, 1}, values,
                                                 Interpolation::kLinear);
    const double q = 0.05 + 0.9 * u(gen);
    auto profile = StrategyProfile::Make(strategy, 0.05 + 0.9 * u(gen));
    auto r = ComputePosteriors(profile, Params(dist, q));
    REQUIRE(r.q_a.has_value());
    REQUIRE(r.q_na.has_value());
    CHECK(std::fabs(r.prob_act * *r.q_a + (1 - r.prob_act) * *r.q_na - q) <=
          1e-12);
  }
}

}  // namespace
}  // namespace actlab
