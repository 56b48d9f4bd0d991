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

#include "core/errors.h"

namespace actlab {

StrategyMoments ComputeMoments(const CompetentStrategy& strategy,
                               const BeliefDistribution& dist) {
  const std::vector<double> breaks = strategy.Breakpoints();
  StrategyMoments m;
  m.mean_act = dist.Expect([&](double p) { return strategy(p); }, breaks);
  m.mean_p_act = dist.Expect([&](double p) { return p * strategy(p); }, breaks);
  return m;
}

double ActProbability(const StrategyProfile& profile,
                      const ModelParams& params) {
  const StrategyMoments m = ComputeMoments(profile.competent, params.dist());
  return params.q() * m.mean_act + (1.0 - params.q()) * profile.incompetent;
}

double PosteriorStateUnrevealed(const StrategyProfile& profile,
                                const ModelParams& params) {
  const StrategyMoments m = ComputeMoments(profile.competent, params.dist());
  const double q = params.q();
  const double denom = q * m.mean_act + (1.0 - q) * profile.incompetent;
  if (denom <= kOffPathTolerance) {
    Fail(ErrorCode::kZeroActProbability,
         "the profile never acts; Bayes' rule does not pin down the "
         "unrevealed-state posterior");
  }
  const double numer =
      q * m.mean_p_act + (1.0 - q) * params.mean() * profile.incompetent;
  return std::clamp(numer / denom, 0.0, 1.0);
}

double StrategyStateCovariance(const CompetentStrategy& strategy,
                               const BeliefDistribution& dist) {
  const StrategyMoments m = ComputeMoments(strategy, dist);
  return m.mean_p_act - dist.mean() * m.mean_act;
}

double PosteriorCompetence(const StrategyProfile& profile,
                           const ModelParams& params, PolicyChoice choice) {
  const StrategyMoments m = ComputeMoments(profile.competent, params.dist());
  const double q = params.q();
  const double competent_mass =
      choice == PolicyChoice::kAct ? q * m.mean_act : q * (1.0 - m.mean_act);
  const double incompetent_mass =
      choice == PolicyChoice::kAct ? (1.0 - q) * profile.incompetent
                                   : (1.0 - q) * (1.0 - profile.incompetent);
  const double denom = competent_mass + incompetent_mass;
  if (denom <= kOffPathTolerance) {
    Fail(ErrorCode::kOffPath, std::string("choice '") + ToString(choice) +
                                  "' has zero probability under the profile");
  }
  return std::clamp(competent_mass / denom, 0.0, 1.0);
}

PosteriorReport ComputePosteriors(const StrategyProfile& profile,
                                  const ModelParams& params) {
  const StrategyMoments m = ComputeMoments(profile.competent, params.dist());
  const double q = params.q();
  const double pi_nc = profile.incompetent;
  PosteriorReport report;
  const double act_c = q * m.mean_act;
  const double act_nc = (1.0 - q) * pi_nc;
  report.prob_act = act_c + act_nc;
  if (report.prob_act > kOffPathTolerance) {
    const double numer = q * m.mean_p_act + (1.0 - q) * params.mean() * pi_nc;
    report.p_el_unrevealed = std::clamp(numer / report.prob_act, 0.0, 1.0);
    report.q_a = std::clamp(act_c / report.prob_act, 0.0, 1.0);
  }
  const double not_c = q * (1.0 - m.mean_act);
  const double not_nc = (1.0 - q) * (1.0 - pi_nc);
  if (not_c + not_nc > kOffPathTolerance) {
    report.q_na = std::clamp(not_c / (not_c + not_nc), 0.0, 1.0);
  }
  return report;
}

double BackwardVote(double p_el, double bias, PolicyChoice choice) {
  if (std::abs(p_el - bias) <= kTieTolerance) return 0.5;
  const bool act_was_right = p_el > bias;
  if (choice == PolicyChoice::kAct) return act_was_right ? 1.0 : 0.0;
  return act_was_right ? 0.0 : 1.0;
}

double ForwardVote(double q_c, double q, double r_bl) {
  return q_c < q - kTieTolerance ? 0.0 : r_bl;
}

}  // namespace actlab
