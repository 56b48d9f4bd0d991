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

#include "actlab/actlab.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "core/belief_engine.h"
#include "core/equilibrium_solver.h"
#include "core/errors.h"
#include "core/model_core.h"
#include "core/montecarlo.h"
#include "core/welfare.h"

struct actlab_distribution {
  actlab::BeliefDistribution value;
};

struct actlab_params {
  actlab::ModelParams value;
};

struct actlab_profile {
  actlab::StrategyProfile value;
};

struct actlab_equilibria {
  std::vector<actlab::EquilibriumResult> results;
};

struct actlab_simulation {
  actlab::SimulationOutcome outcome;
};

namespace {

using actlab::ErrorCode;
using actlab::ModelError;

thread_local std::string g_last_error;

actlab_status Record(ErrorCode code, const std::string& message) {
  g_last_error = message;
  return static_cast<actlab_status>(code);
}

// Runs `body`, translating exceptions into status codes.
template <typename Fn>
actlab_status Guard(Fn&& body) {
  try {
    body();
    return ACTLAB_OK;
  } catch (const ModelError& e) {
    return Record(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return Record(ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return Record(ErrorCode::kInternal, e.what());
  }
}

void RequireNonNull(const void* p, const char* what) {
  if (p == nullptr) actlab::Fail(ErrorCode::kInvalidArgument,
                                 std::string(what) + " must not be NULL");
}

actlab::PolicyChoice ToChoice(actlab_choice c) {
  return c == ACTLAB_ACT ? actlab::PolicyChoice::kAct
                         : actlab::PolicyChoice::kNotAct;
}

actlab_choice FromChoice(actlab::PolicyChoice c) {
  return c == actlab::PolicyChoice::kAct ? ACTLAB_ACT : ACTLAB_NOT_ACT;
}

actlab::VoterKind ToVoter(actlab_voter v) {
  return v == ACTLAB_VOTER_FORWARD ? actlab::VoterKind::kForwardLooking
                                   : actlab::VoterKind::kBackwardLooking;
}

actlab::PoolingChoice ToPooling(actlab_pooling p) {
  return p == ACTLAB_POOL_ACT ? actlab::PoolingChoice::kPoolAct
                              : actlab::PoolingChoice::kPoolNotAct;
}

std::optional<actlab::OffPathBelief> ToOffPath(const actlab_off_path* off) {
  if (off == nullptr || !off->present) return std::nullopt;
  actlab::Require(off->q_c >= 0.0 && off->q_c <= 1.0 && off->p_el >= 0.0 &&
                      off->p_el <= 1.0,
                  "off-path beliefs must lie in [0,1]");
  return actlab::OffPathBelief{ToChoice(off->for_choice), off->q_c, off->p_el};
}

actlab_off_path FromOffPath(const std::optional<actlab::OffPathBelief>& off) {
  actlab_off_path out{};
  if (off) {
    out.present = 1;
    out.for_choice = FromChoice(off->for_choice);
    out.q_c = off->q_c;
    out.p_el = off->p_el;
  }
  return out;
}

actlab_posteriors FromPosteriors(const actlab::PosteriorReport& r) {
  actlab_posteriors out{};
  out.has_p_el = r.p_el_unrevealed.has_value();
  out.p_el = r.p_el_unrevealed.value_or(0.0);
  out.has_q_a = r.q_a.has_value();
  out.q_a = r.q_a.value_or(0.0);
  out.has_q_na = r.q_na.has_value();
  out.q_na = r.q_na.value_or(0.0);
  out.prob_act = r.prob_act;
  return out;
}

actlab_profile_summary Describe(const actlab::StrategyProfile& profile) {
  actlab_profile_summary out{};
  if (const auto* t = profile.competent.threshold()) {
    out.is_threshold = 1;
    out.threshold = t->threshold;
    out.mix_at_threshold = t->mix_at_threshold;
  }
  out.pi_nc = profile.incompetent;
  return out;
}

actlab_regime FromRegime(actlab::Regime r) {
  return static_cast<actlab_regime>(static_cast<int>(r));
}

int GridOrDefault(int grid) {
  return grid > 0 ? grid : actlab::kDefaultDeviationGrid;
}

actlab_zscore FromScore(const actlab::ZScore& s) {
  return {s.empirical, s.expected, s.std_error, s.z, s.flagged ? 1 : 0};
}

void FillCrosscheck(const actlab::CrosscheckReport& r, actlab_crosscheck* out) {
  *out = actlab_crosscheck{};
  out->reelect = FromScore(r.scores[0]);
  out->reelect_competent = FromScore(r.scores[1]);
  out->reelect_incompetent = FromScore(r.scores[2]);
  out->act = FromScore(r.scores[3]);
  out->utility = FromScore(r.scores[4]);
  for (const actlab::ZScore& s : r.bin_scores) {
    out->max_abs_bin_z = std::max(out->max_abs_bin_z, std::abs(s.z));
  }
  out->bins_compared = r.bin_scores.size();
  out->max_abs_z = r.max_abs_z;
  out->any_flagged = r.any_flagged ? 1 : 0;
}

}  // namespace

extern "C" {

const char* actlab_last_error(void) { return g_last_error.c_str(); }

const char* actlab_status_name(actlab_status status) {
  return actlab::ErrorCodeName(static_cast<ErrorCode>(status));
}

const char* actlab_regime_name(actlab_regime regime) {
  return actlab::ToString(static_cast<actlab::Regime>(regime));
}

const char* actlab_version(void) { return "1.0.0"; }

actlab_status actlab_distribution_uniform(double lo, double hi,
                                          actlab_distribution** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    *out = new actlab_distribution{
        actlab::BeliefDistribution::Make(actlab::UniformSpec{lo, hi})};
  });
}

actlab_status actlab_distribution_beta(double alpha, double beta,
                                       actlab_distribution** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    *out = new actlab_distribution{
        actlab::BeliefDistribution::Make(actlab::BetaSpec{alpha, beta})};
  });
}

actlab_status actlab_distribution_discrete(const double* points,
                                           const double* weights, size_t count,
                                           actlab_distribution** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    actlab::Require(count > 0 && points && weights,
                    "discrete prior needs at least one atom");
    actlab::DiscreteGridSpec spec;
    for (size_t i = 0; i < count; ++i) {
      spec.atoms.push_back({points[i], weights[i]});
    }
    *out = new actlab_distribution{actlab::BeliefDistribution::Make(spec)};
  });
}

actlab_status actlab_distribution_piecewise(const double* breakpoints,
                                            size_t count,
                                            const double* densities,
                                            actlab_distribution** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    actlab::Require(count >= 2 && breakpoints && densities,
                    "piecewise prior needs at least two breakpoints");
    actlab::PiecewiseConstantSpec spec;
    spec.breakpoints.assign(breakpoints, breakpoints + count);
    spec.densities.assign(densities, densities + count - 1);
    *out = new actlab_distribution{actlab::BeliefDistribution::Make(spec)};
  });
}

void actlab_distribution_free(actlab_distribution* dist) { delete dist; }

double actlab_distribution_mean(const actlab_distribution* dist) {
  return dist ? dist->value.mean() : 0.0;
}

actlab_status actlab_distribution_expect(const actlab_distribution* dist,
                                         double (*g)(double, void*), void* user,
                                         const double* breaks,
                                         size_t break_count, double* out) {
  return Guard([&] {
    RequireNonNull(dist, "dist");
    RequireNonNull(reinterpret_cast<const void*>(g), "g");
    RequireNonNull(out, "out");
    std::vector<double> cuts;
    if (breaks) cuts.assign(breaks, breaks + break_count);
    *out = dist->value.Expect([&](double p) { return g(p, user); }, cuts);
  });
}

actlab_status actlab_params_create(double y, double q,
                                   const actlab_distribution* dist,
                                   int has_bias, double bias,
                                   actlab_params** out) {
  return Guard([&] {
    RequireNonNull(dist, "dist");
    RequireNonNull(out, "out");
    std::optional<double> b;
    if (has_bias) b = bias;
    *out = new actlab_params{actlab::ModelParams(y, q, dist->value, b)};
  });
}

void actlab_params_free(actlab_params* params) { delete params; }

double actlab_params_mean(const actlab_params* params) {
  return params ? params->value.mean() : 0.0;
}

double actlab_params_bias(const actlab_params* params) {
  return params ? params->value.bias() : 0.0;
}

actlab_bias_kind actlab_params_bias_kind(const actlab_params* params) {
  switch (params->value.bias_kind()) {
    case actlab::BiasKind::kProAction: return ACTLAB_BIAS_PRO_ACTION;
    case actlab::BiasKind::kActionNeutral: return ACTLAB_BIAS_NEUTRAL;
    case actlab::BiasKind::kAgainstAction: return ACTLAB_BIAS_AGAINST_ACTION;
  }
  return ACTLAB_BIAS_NEUTRAL;
}

actlab_status actlab_voter_utility(actlab_choice choice, actlab_state state,
                                   const actlab_params* params, double* out) {
  return Guard([&] {
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    *out = actlab::VoterUtility(
        ToChoice(choice),
        state == ACTLAB_STATE_BAD ? actlab::State::kBad : actlab::State::kGood,
        params->value);
  });
}

actlab_status actlab_profile_threshold(double threshold,
                                       double mix_at_threshold, double pi_nc,
                                       actlab_profile** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    *out = new actlab_profile{actlab::StrategyProfile::Make(
        actlab::CompetentStrategy::Threshold(threshold, mix_at_threshold),
        pi_nc)};
  });
}

actlab_status actlab_profile_tabulated(const double* points,
                                       const double* values, size_t count,
                                       actlab_interpolation interpolation,
                                       double pi_nc, actlab_profile** out) {
  return Guard([&] {
    RequireNonNull(out, "out");
    actlab::Require(points && values, "tabulated strategy needs data");
    *out = new actlab_profile{actlab::StrategyProfile::Make(
        actlab::CompetentStrategy::Tabulated(
            std::vector<double>(points, points + count),
            std::vector<double>(values, values + count),
            interpolation == ACTLAB_INTERP_STEP
                ? actlab::Interpolation::kStep
                : actlab::Interpolation::kLinear),
        pi_nc)};
  });
}

void actlab_profile_free(actlab_profile* profile) { delete profile; }

double actlab_profile_competent_act(const actlab_profile* profile,
                                    double p_prime) {
  return profile->value.competent(p_prime);
}

double actlab_profile_incompetent_act(const actlab_profile* profile) {
  return profile->value.incompetent;
}

void actlab_profile_describe(const actlab_profile* profile,
                             actlab_profile_summary* out) {
  *out = Describe(profile->value);
}

actlab_status actlab_posteriors_compute(const actlab_profile* profile,
                                        const actlab_params* params,
                                        actlab_posteriors* out) {
  return Guard([&] {
    RequireNonNull(profile, "profile");
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    *out = FromPosteriors(
        actlab::ComputePosteriors(profile->value, params->value));
  });
}

actlab_status actlab_posterior_state_unrevealed(const actlab_profile* profile,
                                                const actlab_params* params,
                                                double* out) {
  return Guard([&] {
    RequireNonNull(profile, "profile");
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    *out = actlab::PosteriorStateUnrevealed(profile->value, params->value);
  });
}

actlab_status actlab_posterior_competence(const actlab_profile* profile,
                                          const actlab_params* params,
                                          actlab_choice choice, double* out) {
  return Guard([&] {
    RequireNonNull(profile, "profile");
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    *out = actlab::PosteriorCompetence(profile->value, params->value,
                                       ToChoice(choice));
  });
}

actlab_status actlab_strategy_covariance(const actlab_profile* profile,
                                         const actlab_distribution* dist,
                                         double* out) {
  return Guard([&] {
    RequireNonNull(profile, "profile");
    RequireNonNull(dist, "dist");
    RequireNonNull(out, "out");
    *out = actlab::StrategyStateCovariance(profile->value.competent,
                                           dist->value);
  });
}

double actlab_backward_vote(double p_el, double bias, actlab_choice choice) {
  return actlab::BackwardVote(p_el, bias, ToChoice(choice));
}

double actlab_forward_vote(double q_c, double q, double r_bl) {
  return actlab::ForwardVote(q_c, q, r_bl);
}

double actlab_expected_reelection_competent(double p_prime, double pi, double y,
                                            double r_a) {
  return actlab::ExpectedReelectionCompetent(
      p_prime, pi, actlab::ReelectionContext::Backward(y, r_a));
}

double actlab_expected_reelection_incompetent(double mean, double pi_nc,
                                              double y, double r_a) {
  return actlab::ExpectedReelectionIncompetent(
      mean, pi_nc, actlab::ReelectionContext::Backward(y, r_a));
}

actlab_status actlab_verify(const actlab_profile* profile,
                            const actlab_params* params, actlab_voter voter,
                            const actlab_off_path* off_path, int grid,
                            const double* assumed_r_a,
                            actlab_verification* out) {
  return Guard([&] {
    RequireNonNull(profile, "profile");
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    actlab::VerifyOptions options;
    options.grid = GridOrDefault(grid);
    if (assumed_r_a) options.assumed_r_a = *assumed_r_a;
    const actlab::VerificationReport r =
        actlab::VerifyEquilibrium(profile->value, params->value,
                                  ToVoter(voter), ToOffPath(off_path), options);
    *out = actlab_verification{};
    out->residual = r.residual;
    out->competent_gain = r.competent_gain;
    out->worst_type = r.worst_type;
    out->incompetent_gain = r.incompetent_gain;
    out->types_checked = r.types_checked;
    out->indifferent_types = r.indifferent_types;
    out->r_a = r.context.r_a;
    out->act_bad = r.context.act_bad;
    out->act_good = r.context.act_good;
    out->not_act_bad = r.context.not_act_bad;
    out->not_act_good = r.context.not_act_good;
    out->posteriors = FromPosteriors(r.posteriors);
  });
}

actlab_status actlab_solve(const actlab_params* params, actlab_voter voter,
                           int grid, actlab_equilibria** out) {
  return Guard([&] {
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    *out = new actlab_equilibria{
        actlab::SolveAll(params->value, ToVoter(voter), GridOrDefault(grid))};
  });
}

actlab_status actlab_solve_backward(const actlab_params* params, int grid,
                                    actlab_equilibria** out) {
  return Guard([&] {
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    *out = new actlab_equilibria{
        {actlab::BackwardClosedForm(params->value, GridOrDefault(grid))}};
  });
}

actlab_status actlab_forward_pooling(const actlab_params* params,
                                     actlab_pooling which, int grid,
                                     actlab_equilibria** out) {
  return Guard([&] {
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    *out = new actlab_equilibria{{actlab::ForwardPooling(
        params->value, ToPooling(which), GridOrDefault(grid))}};
  });
}

actlab_status actlab_against_action_solve(const actlab_params* params,
                                          int grid, actlab_equilibria** out) {
  return Guard([&] {
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    *out = new actlab_equilibria{
        actlab::AgainstActionSolve(params->value, GridOrDefault(grid))};
  });
}

void actlab_equilibria_free(actlab_equilibria* set) { delete set; }

size_t actlab_equilibria_count(const actlab_equilibria* set) {
  return set ? set->results.size() : 0;
}

actlab_status actlab_equilibria_info(const actlab_equilibria* set,
                                     size_t index,
                                     actlab_equilibrium_info* out) {
  return Guard([&] {
    RequireNonNull(set, "set");
    RequireNonNull(out, "out");
    actlab::Require(index < set->results.size(), "equilibrium index out of range");
    const actlab::EquilibriumResult& r = set->results[index];
    *out = actlab_equilibrium_info{};
    out->regime = FromRegime(r.regime);
    out->voter = r.voter == actlab::VoterKind::kForwardLooking
                     ? ACTLAB_VOTER_FORWARD
                     : ACTLAB_VOTER_BACKWARD;
    out->r_a = r.r_a;
    out->residual = r.residual;
    out->profile = Describe(r.profile);
    out->off_path = FromOffPath(r.off_path);
    out->posteriors = FromPosteriors(r.posteriors);
    for (const actlab::ConsistencyMargin& m : r.margins) {
      if (m.regime == actlab::Regime::kThreshold) {
        out->has_threshold_margin = 1;
        out->threshold_margin = m.margin;
        out->threshold_p_el = m.p_el.value_or(0.0);
      } else if (m.regime == actlab::Regime::kHighThreshold) {
        out->has_high_margin = 1;
        out->high_margin = m.margin;
        out->high_p_el = m.p_el.value_or(0.0);
      }
    }
    out->note_count = r.notes.size();
  });
}

const char* actlab_equilibria_note(const actlab_equilibria* set, size_t index,
                                   size_t note) {
  if (!set || index >= set->results.size()) return nullptr;
  const auto& notes = set->results[index].notes;
  return note < notes.size() ? notes[note].c_str() : nullptr;
}

actlab_status actlab_equilibria_profile(const actlab_equilibria* set,
                                        size_t index, actlab_profile** out) {
  return Guard([&] {
    RequireNonNull(set, "set");
    RequireNonNull(out, "out");
    actlab::Require(index < set->results.size(), "equilibrium index out of range");
    *out = new actlab_profile{set->results[index].profile};
  });
}

actlab_status actlab_welfare_report(const actlab_params* params,
                                    actlab_pooling forward_regime,
                                    actlab_welfare* out) {
  return Guard([&] {
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    const actlab::WelfareReport r =
        actlab::ComputeWelfare(params->value, ToPooling(forward_regime));
    *out = actlab_welfare{r.u_c, r.u_nc, r.U_b, r.U_f, r.gap, r.threshold,
                          FromRegime(r.backward_regime), forward_regime};
  });
}

actlab_status actlab_competent_backward_utility(const actlab_params* params,
                                                double* out) {
  return Guard([&] {
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    *out = actlab::CompetentBackwardUtility(params->value);
  });
}

actlab_status actlab_profile_utility(const actlab_profile* profile,
                                     const actlab_params* params, double* out) {
  return Guard([&] {
    RequireNonNull(profile, "profile");
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    *out = actlab::ProfileUtility(profile->value, params->value);
  });
}

actlab_status actlab_simulate(const actlab_profile* profile,
                              const actlab_params* params, actlab_voter voter,
                              const actlab_off_path* off_path, uint64_t n,
                              uint64_t seed, int bins, int jobs,
                              actlab_simulation** out) {
  return Guard([&] {
    RequireNonNull(profile, "profile");
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    actlab::SimulationOptions options;
    options.bins = bins > 0 ? bins : 20;
    options.jobs = jobs > 0 ? jobs : 1;
    *out = new actlab_simulation{
        actlab::Simulate(profile->value, params->value, ToVoter(voter),
                         ToOffPath(off_path), n, seed, options)};
  });
}

void actlab_simulation_free(actlab_simulation* sim) { delete sim; }

void actlab_simulation_describe(const actlab_simulation* sim,
                                actlab_simulation_summary* out) {
  const actlab::SimulationOutcome& o = sim->outcome;
  *out = actlab_simulation_summary{
      o.n,          o.seed,           o.fingerprint,
      o.reelect_freq, o.reelect_competent, o.reelect_incompetent,
      o.n_competent, o.n_incompetent, o.act_freq,
      o.mean_utility, o.se_reelect,   o.se_reelect_competent,
      o.se_reelect_incompetent, o.se_act, o.se_utility,
      o.competent_bins.size()};
}

actlab_status actlab_simulation_bin(const actlab_simulation* sim, size_t index,
                                    actlab_bin* out) {
  return Guard([&] {
    RequireNonNull(sim, "sim");
    RequireNonNull(out, "out");
    actlab::Require(index < sim->outcome.competent_bins.size(),
                    "bin index out of range");
    const actlab::BinStat& b = sim->outcome.competent_bins[index];
    *out = actlab_bin{b.lo, b.hi, b.count, b.reelected};
  });
}

actlab_status actlab_crosscheck_analytic(const actlab_simulation* sim,
                                         const actlab_profile* profile,
                                         const actlab_params* params,
                                         actlab_voter voter,
                                         const actlab_off_path* off_path,
                                         actlab_crosscheck* out) {
  return Guard([&] {
    RequireNonNull(sim, "sim");
    RequireNonNull(profile, "profile");
    RequireNonNull(params, "params");
    RequireNonNull(out, "out");
    const actlab::AnalyticExpectations analytic = actlab::ComputeAnalytic(
        profile->value, params->value, ToVoter(voter), ToOffPath(off_path),
        static_cast<int>(sim->outcome.competent_bins.size()));
    FillCrosscheck(actlab::Crosscheck(sim->outcome, analytic), out);
  });
}

actlab_status actlab_crosscheck_runs(const actlab_simulation* sim,
                                     const actlab_simulation* reference,
                                     actlab_crosscheck* out) {
  return Guard([&] {
    RequireNonNull(sim, "sim");
    RequireNonNull(reference, "reference");
    RequireNonNull(out, "out");
    FillCrosscheck(actlab::Crosscheck(sim->outcome, reference->outcome), out);
  });
}

}  // extern "C"
