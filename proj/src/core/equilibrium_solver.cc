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
#include <sstream>

#include "core/errors.h"

namespace actlab {
namespace {

std::string Num(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

double TieAwareStep(double value, double cutoff) {
  if (value > cutoff + kTieTolerance) return 1.0;
  if (value < cutoff - kTieTolerance) return 0.0;
  return 0.5;
}

// Deviation-check types: the uniform grid, every strategy kink with its
// +-1e-9 neighbours, clipped to the support hull. Discrete priors are checked
// on their atoms only.
std::vector<double> TypesToCheck(const CompetentStrategy& strategy,
                                 const BeliefDistribution& dist, int grid) {
  std::vector<double> types;
  if (dist.is_discrete()) {
    for (const Atom& a : std::get<DiscreteGridSpec>(dist.spec()).atoms) {
      types.push_back(a.point);
    }
    return types;
  }
  const double lo = dist.support_lo();
  const double hi = dist.support_hi();
  for (int k = 0; k <= grid; ++k) types.push_back(static_cast<double>(k) / grid);
  types.push_back(lo);
  types.push_back(hi);
  for (double b : strategy.Breakpoints()) {
    types.push_back(b);
    types.push_back(b - 1e-9);
    types.push_back(b + 1e-9);
  }
  std::erase_if(types, [&](double p) { return p < lo || p > hi; });
  std::sort(types.begin(), types.end());
  types.erase(std::unique(types.begin(), types.end()), types.end());
  return types;
}

std::optional<OffPathBelief> BeliefFor(
    PolicyChoice choice, const std::optional<OffPathBelief>& off_path) {
  if (off_path && off_path->for_choice == choice) return off_path;
  return std::nullopt;
}

}  // namespace

ReelectionContext ReelectionContext::Backward(double y, double r_a) {
  ReelectionContext ctx;
  ctx.y = y;
  ctx.r_a = r_a;
  return ctx;
}

double ReelectionContext::ActPayoff(double p) const {
  return (1.0 - y) * (p * act_bad + (1.0 - p) * act_good) + y * r_a;
}

double ReelectionContext::NotActPayoff(double p) const {
  return p * not_act_bad + (1.0 - p) * not_act_good;
}

double ExpectedReelectionCompetent(double p_prime, double pi,
                                   const ReelectionContext& ctx) {
  return pi * ctx.ActPayoff(p_prime) + (1.0 - pi) * ctx.NotActPayoff(p_prime);
}

double ExpectedReelectionIncompetent(double mean, double pi_nc,
                                     const ReelectionContext& ctx) {
  return pi_nc * ctx.ActPayoff(mean) + (1.0 - pi_nc) * ctx.NotActPayoff(mean);
}

double BackwardThreshold(double y) { return (1.0 - y) / (2.0 - y); }

double HighThreshold(double y) { return 1.0 / (2.0 - y); }

const char* ToString(Regime regime) {
  switch (regime) {
    case Regime::kThreshold: return "threshold";
    case Regime::kPoolAct: return "pool_act";
    case Regime::kPoolNotAct: return "pool_not_act";
    case Regime::kHighThreshold: return "high_threshold";
    case Regime::kUnresolved: return "unresolved";
  }
  return "unknown";
}

ReelectionContext ImpliedContext(const StrategyProfile& profile,
                                 const ModelParams& params, VoterKind voter,
                                 const std::optional<OffPathBelief>& off_path) {
  const PosteriorReport post = ComputePosteriors(profile, params);
  const bool forward = voter == VoterKind::kForwardLooking;

  double p_el_act = 0.0;
  double q_act = params.q();
  if (post.q_a) {
    p_el_act = *post.p_el_unrevealed;
    q_act = *post.q_a;
  } else if (auto belief = BeliefFor(PolicyChoice::kAct, off_path)) {
    p_el_act = belief->p_el;
    q_act = belief->q_c;
  } else {
    Fail(ErrorCode::kMissingOffPath,
         "acting is off-path under the profile; an off-path belief for 'act' "
         "is required");
  }

  double q_not_act = params.q();
  if (post.q_na) {
    q_not_act = *post.q_na;
  } else if (auto belief = BeliefFor(PolicyChoice::kNotAct, off_path)) {
    q_not_act = belief->q_c;
  } else if (forward) {
    Fail(ErrorCode::kMissingOffPath,
         "not acting is off-path under the profile; a forward-looking voter "
         "needs an off-path competence belief for 'not_act'");
  }

  const double bias = params.bias();
  ReelectionContext ctx;
  ctx.y = params.y();
  ctx.r_a = BackwardVote(p_el_act, bias, PolicyChoice::kAct);
  ctx.act_bad = BackwardVote(1.0, bias, PolicyChoice::kAct);
  ctx.act_good = BackwardVote(0.0, bias, PolicyChoice::kAct);
  ctx.not_act_bad = BackwardVote(1.0, bias, PolicyChoice::kNotAct);
  ctx.not_act_good = BackwardVote(0.0, bias, PolicyChoice::kNotAct);
  if (forward) {
    const double q = params.q();
    ctx.r_a = ForwardVote(q_act, q, ctx.r_a);
    ctx.act_bad = ForwardVote(q_act, q, ctx.act_bad);
    ctx.act_good = ForwardVote(q_act, q, ctx.act_good);
    ctx.not_act_bad = ForwardVote(q_not_act, q, ctx.not_act_bad);
    ctx.not_act_good = ForwardVote(q_not_act, q, ctx.not_act_good);
  }
  return ctx;
}

VerificationReport VerifyEquilibrium(
    const StrategyProfile& profile, const ModelParams& params, VoterKind voter,
    const std::optional<OffPathBelief>& off_path,
    const VerifyOptions& options) {
  Require(options.grid >= 1, "deviation grid needs at least one cell");
  VerificationReport report;
  report.posteriors = ComputePosteriors(profile, params);
  report.context = ImpliedContext(profile, params, voter, off_path);
  const ReelectionContext& ctx = report.context;

  if (options.assumed_r_a &&
      std::abs(*options.assumed_r_a - ctx.r_a) > kTieTolerance) {
    Fail(ErrorCode::kBeliefInconsistent,
         "profile assumes unrevealed reelection probability " +
             Num(*options.assumed_r_a) + " but its posteriors imply " +
             Num(ctx.r_a));
  }

  const std::vector<double> types =
      TypesToCheck(profile.competent, params.dist(), options.grid);
  report.types_checked = static_cast<int>(types.size());
  for (double p : types) {
    const double pi = profile.competent(p);
    const double act = ctx.ActPayoff(p);
    const double not_act = ctx.NotActPayoff(p);
    const double gain =
        std::max(act, not_act) - ExpectedReelectionCompetent(p, pi, ctx);
    if (gain > report.competent_gain) {
      report.competent_gain = gain;
      report.worst_type = p;
    }
    if (std::abs(act - not_act) <= kTieTolerance && (pi == 0.0 || pi == 1.0)) {
      ++report.indifferent_types;
    }
  }
  const double mean = params.mean();
  report.incompetent_gain =
      std::max(ctx.ActPayoff(mean), ctx.NotActPayoff(mean)) -
      ExpectedReelectionIncompetent(mean, profile.incompetent, ctx);
  report.residual = std::max(report.competent_gain, report.incompetent_gain);
  return report;
}

namespace {

StrategyProfile ThresholdProfile(double threshold, double mean) {
  return StrategyProfile::Make(CompetentStrategy::Threshold(threshold, 0.5),
                               TieAwareStep(mean, threshold));
}

// Fills posteriors, residual and regime for a backward-voter threshold
// candidate built around `assumed_r_a`.
void Finalize(EquilibriumResult& result, const ModelParams& params,
              Regime candidate, double assumed_r_a, int grid) {
  VerifyOptions options;
  options.grid = grid;
  const VerificationReport report = VerifyEquilibrium(
      result.profile, params, result.voter, result.off_path, options);
  result.posteriors = report.posteriors;
  result.r_a = report.context.r_a;
  result.residual = report.residual;
  const bool consistent = std::abs(report.context.r_a - assumed_r_a) <= kTieTolerance;
  if (consistent && report.residual <= kResidualTolerance) {
    result.regime = candidate;
    return;
  }
  result.regime = Regime::kUnresolved;
  if (!consistent) {
    result.notes.push_back(
        "unrevealed posterior does not reproduce the assumed vote " +
        Num(assumed_r_a) + " (implied " + Num(report.context.r_a) + ")");
  }
  if (report.residual > kResidualTolerance) {
    result.notes.push_back("best-response residual " + Num(report.residual) +
                           " at p'=" + Num(report.worst_type));
  }
}

}  // namespace

EquilibriumResult BackwardClosedForm(const ModelParams& params, int grid) {
  if (params.bias_kind() == BiasKind::kAgainstAction) {
    Fail(ErrorCode::kBiasRegime,
         "voter bias " + Num(params.bias()) + " exceeds the prior mean " +
             Num(params.mean()) + "; use the against-action solver");
  }
  const double y = params.y();
  const double t = BackwardThreshold(y);
  EquilibriumResult result{ThresholdProfile(t, params.mean())};
  result.voter = VoterKind::kBackwardLooking;
  if (y == 1.0) {
    result.notes.push_back(
        "never-revealed case: threshold 0, competent mixes 1/2 at p'=0");
  }
  if (result.profile.incompetent == 0.5) {
    result.notes.push_back(
        "prior mean sits on the threshold; incompetent mixes 1/2");
  }
  const PosteriorReport post = ComputePosteriors(result.profile, params);
  if (!post.q_a) {
    // Only types below the threshold carry mass: acting is off-path. The
    // belief that only high-risk types act keeps the threshold optimal.
    result.off_path = OffPathBelief{PolicyChoice::kAct, params.q(), 1.0};
    result.notes.push_back(
        "acting is off-path; off-path state belief p_el=1 attached");
  }
  Finalize(result, params, Regime::kThreshold, 1.0, grid);
  const double p_el = post.p_el_unrevealed.value_or(1.0);
  result.margins.push_back({Regime::kThreshold, p_el - params.bias(), p_el});
  return result;
}

EquilibriumResult ForwardPooling(const ModelParams& params, PoolingChoice which,
                                 int grid) {
  const bool act = which == PoolingChoice::kPoolAct;
  const double pi = act ? 1.0 : 0.0;
  EquilibriumResult result{
      StrategyProfile::Make(CompetentStrategy::Constant(pi), pi)};
  result.voter = VoterKind::kForwardLooking;
  result.off_path = OffPathBelief{
      act ? PolicyChoice::kNotAct : PolicyChoice::kAct, 0.0, params.mean()};
  VerifyOptions options;
  options.grid = grid;
  const VerificationReport report = VerifyEquilibrium(
      result.profile, params, result.voter, result.off_path, options);
  result.posteriors = report.posteriors;
  result.r_a = report.context.r_a;
  result.residual = report.residual;
  result.regime = report.residual <= kResidualTolerance
                      ? (act ? Regime::kPoolAct : Regime::kPoolNotAct)
                      : Regime::kUnresolved;
  if (report.indifferent_types > 0) {
    result.notes.push_back(std::to_string(report.indifferent_types) +
                           " checked type(s) indifferent between actions");
  }
  return result;
}

std::vector<EquilibriumResult> AgainstActionSolve(const ModelParams& params,
                                                  int grid) {
  if (params.bias_kind() != BiasKind::kAgainstAction) {
    Fail(ErrorCode::kBiasRegime,
         "against-action solver needs bias > mean (bias " + Num(params.bias()) +
             ", mean " + Num(params.mean()) + ")");
  }
  const double y = params.y();
  const double bias = params.bias();

  // Candidate A: low threshold, acting rewarded when unrevealed.
  EquilibriumResult low{ThresholdProfile(BackwardThreshold(y), params.mean())};
  low.voter = VoterKind::kBackwardLooking;
  const PosteriorReport post_low = ComputePosteriors(low.profile, params);
  if (!post_low.q_a) {
    low.off_path = OffPathBelief{PolicyChoice::kAct, params.q(), 1.0};
  }
  const double p_el_low = post_low.p_el_unrevealed.value_or(1.0);
  const ConsistencyMargin margin_low{Regime::kThreshold, p_el_low - bias,
                                     p_el_low};

  // Candidate B: high threshold, acting punished when unrevealed.
  EquilibriumResult high{ThresholdProfile(HighThreshold(y), params.mean())};
  high.voter = VoterKind::kBackwardLooking;
  const PosteriorReport post_high = ComputePosteriors(high.profile, params);
  if (!post_high.q_a) {
    high.off_path = OffPathBelief{PolicyChoice::kAct, params.q(), 0.0};
  }
  const double p_el_high = post_high.p_el_unrevealed.value_or(0.0);
  const ConsistencyMargin margin_high{Regime::kHighThreshold, bias - p_el_high,
                                      p_el_high};

  std::vector<EquilibriumResult> out;
  if (margin_low.margin > kTieTolerance) {
    Finalize(low, params, Regime::kThreshold, 1.0, grid);
    low.margins = {margin_low, margin_high};
    out.push_back(std::move(low));
  }
  if (margin_high.margin > kTieTolerance) {
    Finalize(high, params, Regime::kHighThreshold, 0.0, grid);
    high.margins = {margin_low, margin_high};
    if (!post_high.q_a) {
      high.notes.push_back(
          "acting is off-path; off-path state belief p_el=0 attached");
    }
    out.push_back(std::move(high));
  }
  if (out.empty()) {
    Finalize(low, params, Regime::kUnresolved, 1.0, grid);
    low.regime = Regime::kUnresolved;
    low.margins = {margin_low, margin_high};
    low.notes.push_back(
        "neither threshold candidate is self-consistent: low threshold gives "
        "p_el=" + Num(p_el_low) + ", high threshold gives p_el=" +
        Num(p_el_high) + ", bias " + Num(bias));
    out.push_back(std::move(low));
  }
  return out;
}

std::vector<EquilibriumResult> SolveAll(const ModelParams& params,
                                        VoterKind voter, int grid) {
  if (voter == VoterKind::kForwardLooking) {
    return {ForwardPooling(params, PoolingChoice::kPoolAct, grid),
            ForwardPooling(params, PoolingChoice::kPoolNotAct, grid)};
  }
  if (params.bias_kind() == BiasKind::kAgainstAction) {
    return AgainstActionSolve(params, grid);
  }
  return {BackwardClosedForm(params, grid)};
}

}  // namespace actlab
