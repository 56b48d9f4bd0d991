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

#ifndef ACTLAB_CORE_WELFARE_H_
#define ACTLAB_CORE_WELFARE_H_

#include "core/equilibrium_solver.h"
#include "core/model_core.h"

namespace actlab {

struct WelfareReport {
  double u_c = 0.0;   // backward voter, competent incumbent
  double u_nc = 0.0;  // backward voter, incompetent incumbent
  double U_b = 0.0;
  double U_f = 0.0;
  double gap = 0.0;   // U_b - U_f
  double threshold = 0.0;
  Regime backward_regime = Regime::kThreshold;
  PoolingChoice forward_regime = PoolingChoice::kPoolAct;
};

// Voter's expected utility when the competent incumbent plays `strategy`,
// integrated over the prior (split at the strategy's kinks).
double CompetentUtility(const CompetentStrategy& strategy,
                        const ModelParams& params);
double IncompetentUtility(double pi_nc, const ModelParams& params);
// q * CompetentUtility + (1 - q) * IncompetentUtility.
double ProfileUtility(const StrategyProfile& profile, const ModelParams& params);

// The backward-voter equilibrium welfare is evaluated under: the closed-form
// threshold profile when bias <= mean, otherwise the first self-consistent
// against-action candidate. Throws kUnresolved if there is none.
EquilibriumResult SelectBackwardEquilibrium(const ModelParams& params);

double CompetentBackwardUtility(const ModelParams& params);

WelfareReport ComputeWelfare(const ModelParams& params,
                             PoolingChoice forward_regime);

}  // namespace actlab

#endif  // ACTLAB_CORE_WELFARE_H_
