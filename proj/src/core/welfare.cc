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

#include "core/welfare.h"

#include "core/errors.h"

namespace actlab {

double CompetentUtility(const CompetentStrategy& strategy,
                        const ModelParams& params) {
  return params.dist().Expect(
      [&](double p) {
        const double pi = strategy(p);
        return pi * ExpectedVoterUtility(PolicyChoice::kAct, p, params) +
               (1.0 - pi) * ExpectedVoterUtility(PolicyChoice::kNotAct, p,
                                                 params);
      },
      strategy.Breakpoints());
}

double IncompetentUtility(double pi_nc, const ModelParams& params) {
  const double p = params.mean();
  return pi_nc * ExpectedVoterUtility(PolicyChoice::kAct, p, params) +
         (1.0 - pi_nc) * ExpectedVoterUtility(PolicyChoice::kNotAct, p, params);
}

double ProfileUtility(const StrategyProfile& profile,
                      const ModelParams& params) {
  const double q = params.q();
  return q * CompetentUtility(profile.competent, params) +
         (1.0 - q) * IncompetentUtility(profile.incompetent, params);
}

EquilibriumResult SelectBackwardEquilibrium(const ModelParams& params) {
  if (params.bias_kind() != BiasKind::kAgainstAction) {
    return BackwardClosedForm(params);
  }
  std::vector<EquilibriumResult> candidates = AgainstActionSolve(params);
  if (candidates.front().regime == Regime::kUnresolved) {
    Fail(ErrorCode::kUnresolved,
         "no self-consistent backward equilibrium for this against-action "
         "voter; welfare is undefined");
  }
  return std::move(candidates.front());
}

double CompetentBackwardUtility(const ModelParams& params) {
  return CompetentUtility(SelectBackwardEquilibrium(params).profile.competent,
                          params);
}

WelfareReport ComputeWelfare(const ModelParams& params,
                             PoolingChoice forward_regime) {
  const EquilibriumResult eq = SelectBackwardEquilibrium(params);
  WelfareReport report;
  report.threshold = eq.profile.competent.threshold()->threshold;
  report.backward_regime = eq.regime;
  report.forward_regime = forward_regime;
  report.u_c = CompetentUtility(eq.profile.competent, params);
  report.u_nc = IncompetentUtility(eq.profile.incompetent, params);
  const double q = params.q();
  report.U_b = q * report.u_c + (1.0 - q) * report.u_nc;
  report.U_f = IncompetentUtility(
      forward_regime == PoolingChoice::kPoolAct ? 1.0 : 0.0, params);
  report.gap = report.U_b - report.U_f;
  return report;
}

}  // namespace actlab
