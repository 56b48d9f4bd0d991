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

#include "core/equilibrium_solver.h"

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

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ModelError& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

// Worst competent deviation gain over a midpoint grid of types, computed
// straight from the reelection formula with a known r_a.
double OracleCompetentResidual(const CompetentStrategy& s, double y,
                               double r_a, int grid) {
  double worst = 0.0;
  for (int k = 0; k <= grid; ++k) {
    const double p = static_cast<double>(k) / grid;
    worst = std::max(worst, oracle::CompetentGain(p, s(p), y, r_a));
  }
  return worst;
}

TEST_CASE("reelection payoffs") {
  auto ctx = ReelectionContext::Backward(0.0, 1.0);
  CHECK(ExpectedReelectionCompetent(0.8, 1, ctx) == doctest::Approx(0.8));
  CHECK(ExpectedReelectionCompetent(0.8, 0, ctx) == doctest::Approx(0.2));
  auto never_revealed = ReelectionContext::Backward(1.0, 1.0);
  for (double p : {0.0, 0.3, 1.0}) {
    CHECK(ExpectedReelectionCompetent(p, 1, never_revealed) == 1.0);
  }
  CHECK(ExpectedReelectionIncompetent(0.5, 1, ctx) == doctest::Approx(0.5));
  CHECK(ExpectedReelectionIncompetent(0.5, 0, ctx) == doctest::Approx(0.5));
  CHECK(ExpectedReelectionIncompetent(
            0.3, 1, ReelectionContext::Backward(0.5, 1.0)) ==
        doctest::Approx(0.65));
}

TEST_CASE("payoff is affine in the mixing weight") {
  for (double y : {0.0, 0.2, 0.7, 1.0}) {
    for (double r_a : {0.0, 0.5, 1.0}) {
      auto ctx = ReelectionContext::Backward(y, r_a);
      for (double p : {0.0, 0.15, 0.5, 0.93}) {
        const double lo = ExpectedReelectionCompetent(p, 0, ctx);
        const double hi = ExpectedReelectionCompetent(p, 1, ctx);
        const double mid = ExpectedReelectionCompetent(p, 0.3, ctx);
        CHECK(mid == doctest::Approx(0.7 * lo + 0.3 * hi).epsilon(1e-14));
      }
    }
    const double t = BackwardThreshold(y);
    auto ctx = ReelectionContext::Backward(y, 1.0);
    CHECK(std::fabs(ExpectedReelectionCompetent(t, 1, ctx) -
                    ExpectedReelectionCompetent(t, 0, ctx)) <= 1e-12);
  }
}

TEST_CASE("closed-form thresholds") {
  auto uniform = Uniform();
  auto r0 = BackwardClosedForm(ModelParams(0.0, 0.5, uniform));
  REQUIRE(r0.profile.competent.threshold() != nullptr);
  CHECK(r0.profile.competent.threshold()->threshold == 0.5);
  CHECK(r0.profile.incompetent == 0.5);
  CHECK(r0.regime == Regime::kThreshold);
  CHECK(r0.residual <= 1e-9);

  auto r5 = BackwardClosedForm(ModelParams(0.5, 0.5, uniform));
  CHECK(r5.profile.competent.threshold()->threshold ==
        doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(r5.profile.incompetent == 1.0);
  CHECK(r5.r_a == 1.0);
  CHECK(r5.residual <= 1e-9);

  auto r1 = BackwardClosedForm(ModelParams(1.0, 0.5, uniform));
  CHECK(r1.profile.competent.threshold()->threshold == 0.0);
  CHECK(r1.profile.competent(0.0) < 1.0);
  CHECK_FALSE(r1.notes.empty());
}

TEST_CASE("closed form with an atom at zero survives full concealment") {
  auto dist = BeliefDistribution::Make(
      DiscreteGridSpec{{{0, 1}, {0.25, 1}, {0.5, 1}, {0.75, 1}, {1, 1}}});
  auto r = BackwardClosedForm(ModelParams(1.0, 0.5, dist));
  CHECK(r.regime == Regime::kThreshold);
  CHECK(r.residual <= 1e-9);
  CHECK(*r.posteriors.p_el_unrevealed > dist.mean());
}

TEST_CASE("atomless priors tie the unrevealed posterior at full concealment") {
  // Everybody acts, so acting carries no information and the vote is a coin
  // flip; low types then prefer not to act.
  auto r = BackwardClosedForm(ModelParams(1.0, 0.5, Uniform()));
  CHECK(r.regime == Regime::kUnresolved);
  CHECK(r.r_a == 0.5);
  CHECK(r.residual == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("closed-form residual matches a brute-force oracle") {
  auto uniform = Uniform();
  for (double y : {0.0, 0.1, 0.25, 0.5, 0.8, 0.95}) {
    CAPTURE(y);
    auto r = BackwardClosedForm(ModelParams(y, 0.5, uniform));
    CHECK(r.residual <= 1e-9);
    CHECK(OracleCompetentResidual(r.profile.competent, y, 1.0, 997) <= 1e-12);
    CHECK(*r.posteriors.p_el_unrevealed > uniform.mean());
  }
}

TEST_CASE("perturbed threshold is rejected") {
  auto params = ModelParams(0.0, 0.5, Uniform());
  auto profile = StrategyProfile::Make(CompetentStrategy::Threshold(0.4), 0.5);
  auto report = VerifyEquilibrium(profile, params, VoterKind::kBackwardLooking,
                                  std::nullopt);
  CHECK(report.residual >= 0.09);
  CHECK(report.worst_type == doctest::Approx(0.4).epsilon(1e-6));
  const double oracle = OracleCompetentResidual(profile.competent, 0.0, 1.0,
                                                100000);
  CHECK(report.residual == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("assumed vote mismatch is a belief inconsistency") {
  auto params = ModelParams(0.5, 0.5, Uniform());
  auto eq = BackwardClosedForm(params);
  VerifyOptions opts;
  opts.assumed_r_a = 0.0;
  CHECK(CodeOf([&] {
          VerifyEquilibrium(eq.profile, params, VoterKind::kBackwardLooking,
                            eq.off_path, opts);
        }) == ErrorCode::kBeliefInconsistent);
}

TEST_CASE("forward pooling equilibria") {
  auto params = ModelParams(0.3, 0.5, BeliefDistribution::Make(
                                          UniformSpec{0.0, 0.8}));
  CHECK(params.mean() == doctest::Approx(0.4));
  auto act = ForwardPooling(params, PoolingChoice::kPoolAct);
  CHECK(act.regime == Regime::kPoolAct);
  CHECK(act.residual <= 1e-9);
  REQUIRE(act.off_path.has_value());
  CHECK(act.off_path->for_choice == PolicyChoice::kNotAct);
  CHECK(act.off_path->q_c == 0.0);
  CHECK(act.r_a == 0.5);

  auto ctx = ImpliedContext(act.profile, params, VoterKind::kForwardLooking,
                            act.off_path);
  // Type 0 keeps y r_a = 0.15 by acting; deviating is screened to zero.
  CHECK(ctx.ActPayoff(0.0) == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(ctx.NotActPayoff(0.0) == 0.0);
  // The unrevealed part of the act payoff is the same for every type.
  for (double p : {0.0, 0.2, 0.5, 0.8}) {
    CHECK(std::fabs(ctx.ActPayoff(p) - p * (1 - params.y()) -
                    params.y() * 0.5) <= 1e-12);
  }

  auto stay = ForwardPooling(params, PoolingChoice::kPoolNotAct);
  CHECK(stay.regime == Regime::kPoolNotAct);
  CHECK(stay.residual <= 1e-9);
  auto ctx2 = ImpliedContext(stay.profile, params, VoterKind::kForwardLooking,
                             stay.off_path);
  for (double p : {0.0, 0.4, 1.0}) CHECK(ctx2.ActPayoff(p) == 0.0);
}

TEST_CASE("missing off-path beliefs are reported") {
  auto params = ModelParams(0.3, 0.5, Uniform());
  auto pool = StrategyProfile::Make(CompetentStrategy::Constant(1), 1);
  CHECK(CodeOf([&] {
          VerifyEquilibrium(pool, params, VoterKind::kForwardLooking,
                            std::nullopt);
        }) == ErrorCode::kMissingOffPath);
  auto never = StrategyProfile::Make(CompetentStrategy::Constant(0), 0);
  CHECK(CodeOf([&] {
          VerifyEquilibrium(never, params, VoterKind::kBackwardLooking,
                            std::nullopt);
        }) == ErrorCode::kMissingOffPath);
}

TEST_CASE("non-pooling profiles fail under the forward voter") {
  std::mt19937_64 gen(424242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0;
  const int total = 100;
  for (int i = 0; i < total; ++i) {
    auto params = ModelParams(u(gen), 0.1 + 0.8 * u(gen), Uniform());
    const double pi_nc = i % 3 == 0 ? 0.05 + 0.9 * u(gen)
                                    : static_cast<double>(i % 2);
    auto strategy = CompetentStrategy::Threshold(0.1 + 0.8 * u(gen));
    auto profile = StrategyProfile::Make(strategy, pi_nc);
    try {
      auto rep = VerifyEquilibrium(profile, params,
                                   VoterKind::kForwardLooking, std::nullopt);
      if (rep.residual > 1e-6) ++failures;
    } catch (const ModelError& e) {
      if (e.code() == ErrorCode::kBeliefInconsistent) ++failures;
    }
  }
  CHECK(failures == total);
}

TEST_CASE("against-action regimes") {
  auto uniform = Uniform();
  auto a = AgainstActionSolve(ModelParams(0.5, 0.5, uniform, 0.55));
  REQUIRE(a.size() == 1);
  CHECK(a[0].regime == Regime::kThreshold);
  CHECK(*a[0].posteriors.p_el_unrevealed ==
        doctest::Approx(17.0 / 30).epsilon(1e-10));
  CHECK(a[0].residual <= 1e-9);

  auto b = AgainstActionSolve(ModelParams(0.5, 0.5, uniform, 0.9));
  REQUIRE(b.size() == 1);
  CHECK(b[0].regime == Regime::kHighThreshold);
  CHECK(b[0].profile.incompetent == 0.0);
  CHECK(*b[0].posteriors.p_el_unrevealed ==
        doctest::Approx(5.0 / 6).epsilon(1e-10));
  CHECK(b[0].residual <= 1e-9);

  auto none = AgainstActionSolve(ModelParams(0.5, 0.5, uniform, 0.7));
  REQUIRE(none.size() == 1);
  CHECK(none[0].regime == Regime::kUnresolved);
  REQUIRE(none[0].margins.size() == 2);
  CHECK(*none[0].margins[0].p_el == doctest::Approx(17.0 / 30).epsilon(1e-10));
  CHECK(*none[0].margins[1].p_el == doctest::Approx(5.0 / 6).epsilon(1e-10));
  CHECK(none[0].margins[0].margin < 0);
  CHECK(none[0].margins[1].margin < 0);

  // Oracle for 17/30: Simpson over the acting region of the threshold-1/3
  // profile, incompetent always acting.
  const double num = 0.5 * oracle::Simpson([](double x) { return x; }, 1.0 / 3,
                                           1) +
                     0.5 * 0.5;
  const double den = 0.5 * (2.0 / 3) + 0.5;
  CHECK(num / den == doctest::Approx(17.0 / 30).epsilon(1e-12));

  CHECK(CodeOf([&] { AgainstActionSolve(ModelParams(0.5, 0.5, uniform)); }) ==
        ErrorCode::kBiasRegime);
  CHECK(CodeOf([&] {
          BackwardClosedForm(ModelParams(0.5, 0.5, uniform, 0.7));
        }) == ErrorCode::kBiasRegime);
}

TEST_CASE("solve dispatch") {
  auto uniform = Uniform();
  CHECK(SolveAll(ModelParams(0.5, 0.5, uniform), VoterKind::kForwardLooking)
            .size() == 2);
  CHECK(SolveAll(ModelParams(0.5, 0.5, uniform), VoterKind::kBackwardLooking)
            .front()
            .regime == Regime::kThreshold);
  CHECK(SolveAll(ModelParams(0.5, 0.5, uniform, 0.9),
                 VoterKind::kBackwardLooking)
            .front()
            .regime == Regime::kHighThreshold);
}

}  // namespace
}  // namespace actlab
