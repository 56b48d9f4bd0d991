/* Copyright 2026 The actlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the actlab library: posteriors, equilibria, welfare and
 * Monte Carlo simulation for the incumbent-under-threat election game.
 *
 * Conventions:
 *  - Every fallible call returns an actlab_status; results go through out
 *    parameters. On failure, actlab_last_error() describes the problem (the
 *    message is thread-local and valid until the next failing call on that
 *    thread).
 *  - Objects are opaque handles returned through out parameters and released
 *    by the matching _free function. Handles are immutable once created and
 *    may be shared across threads.
 *  - Probabilities are doubles in [0,1].
 */

#ifndef ACTLAB_ACTLAB_H_
#define ACTLAB_ACTLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ACTLAB_BUILDING_LIBRARY)
#    define ACTLAB_API __declspec(dllexport)
#  else
#    define ACTLAB_API __declspec(dllimport)
#  endif
#else
#  define ACTLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum actlab_status {
  ACTLAB_OK = 0,
  ACTLAB_ERR_INVALID_ARGUMENT = 1,
  ACTLAB_ERR_ZERO_ACT_PROBABILITY = 2,
  ACTLAB_ERR_OFF_PATH = 3,
  ACTLAB_ERR_BIAS_REGIME = 4,
  ACTLAB_ERR_BELIEF_INCONSISTENT = 5,
  ACTLAB_ERR_MISSING_OFF_PATH = 6,
  ACTLAB_ERR_INVALID_SAMPLE_COUNT = 7,
  ACTLAB_ERR_CONFIG_MISMATCH = 8,
  ACTLAB_ERR_UNRESOLVED = 9,
  ACTLAB_ERR_INTERNAL = 10
} actlab_status;

typedef enum actlab_choice { ACTLAB_ACT = 0, ACTLAB_NOT_ACT = 1 } actlab_choice;
typedef enum actlab_state { ACTLAB_STATE_BAD = 0, ACTLAB_STATE_GOOD = 1 } actlab_state;
typedef enum actlab_voter {
  ACTLAB_VOTER_BACKWARD = 0,
  ACTLAB_VOTER_FORWARD = 1
} actlab_voter;
typedef enum actlab_bias_kind {
  ACTLAB_BIAS_PRO_ACTION = 0,
  ACTLAB_BIAS_NEUTRAL = 1,
  ACTLAB_BIAS_AGAINST_ACTION = 2
} actlab_bias_kind;
typedef enum actlab_regime {
  ACTLAB_REGIME_THRESHOLD = 0,      /* threshold (1-y)/(2-y), r_a = 1 */
  ACTLAB_REGIME_POOL_ACT = 1,
  ACTLAB_REGIME_POOL_NOT_ACT = 2,
  ACTLAB_REGIME_HIGH_THRESHOLD = 3, /* threshold 1/(2-y), r_a = 0 */
  ACTLAB_REGIME_UNRESOLVED = 4
} actlab_regime;
typedef enum actlab_pooling {
  ACTLAB_POOL_ACT = 0,
  ACTLAB_POOL_NOT_ACT = 1
} actlab_pooling;
typedef enum actlab_interpolation {
  ACTLAB_INTERP_LINEAR = 0,
  ACTLAB_INTERP_STEP = 1
} actlab_interpolation;

typedef struct actlab_distribution actlab_distribution;
typedef struct actlab_params actlab_params;
typedef struct actlab_profile actlab_profile;
typedef struct actlab_equilibria actlab_equilibria;
typedef struct actlab_simulation actlab_simulation;

/* ---- errors ------------------------------------------------------------ */

ACTLAB_API const char* actlab_last_error(void);
ACTLAB_API const char* actlab_status_name(actlab_status status);
ACTLAB_API const char* actlab_regime_name(actlab_regime regime);
ACTLAB_API const char* actlab_version(void);

/* ---- priors over p' ----------------------------------------------------- */

ACTLAB_API actlab_status actlab_distribution_uniform(double lo, double hi,
                                                     actlab_distribution** out);
ACTLAB_API actlab_status actlab_distribution_beta(double alpha, double beta,
                                                  actlab_distribution** out);
ACTLAB_API actlab_status actlab_distribution_discrete(
    const double* points, const double* weights, size_t count,
    actlab_distribution** out);
/* `densities` has count - 1 entries for `count` breakpoints. */
ACTLAB_API actlab_status actlab_distribution_piecewise(
    const double* breakpoints, size_t count, const double* densities,
    actlab_distribution** out);
ACTLAB_API void actlab_distribution_free(actlab_distribution* dist);
ACTLAB_API double actlab_distribution_mean(const actlab_distribution* dist);
/* E_f[g(p')], integration split at the optional `breaks`. */
ACTLAB_API actlab_status actlab_distribution_expect(
    const actlab_distribution* dist, double (*g)(double, void*), void* user,
    const double* breaks, size_t break_count, double* out);

/* ---- environment --------------------------------------------------------- */

/* has_bias == 0 selects the action-neutral voter (cutoff at the prior mean). */
ACTLAB_API actlab_status actlab_params_create(double y, double q,
                                              const actlab_distribution* dist,
                                              int has_bias, double bias,
                                              actlab_params** out);
ACTLAB_API void actlab_params_free(actlab_params* params);
ACTLAB_API double actlab_params_mean(const actlab_params* params);
ACTLAB_API double actlab_params_bias(const actlab_params* params);
ACTLAB_API actlab_bias_kind actlab_params_bias_kind(const actlab_params* params);

ACTLAB_API actlab_status actlab_voter_utility(actlab_choice choice,
                                              actlab_state state,
                                              const actlab_params* params,
                                              double* out);

/* ---- strategies ---------------------------------------------------------- */

ACTLAB_API actlab_status actlab_profile_threshold(double threshold,
                                                  double mix_at_threshold,
                                                  double pi_nc,
                                                  actlab_profile** out);
ACTLAB_API actlab_status actlab_profile_tabulated(
    const double* points, const double* values, size_t count,
    actlab_interpolation interpolation, double pi_nc, actlab_profile** out);
ACTLAB_API void actlab_profile_free(actlab_profile* profile);
ACTLAB_API double actlab_profile_competent_act(const actlab_profile* profile,
                                               double p_prime);
ACTLAB_API double actlab_profile_incompetent_act(const actlab_profile* profile);

typedef struct actlab_profile_summary {
  int is_threshold;
  double threshold;        /* valid when is_threshold */
  double mix_at_threshold; /* valid when is_threshold */
  double pi_nc;
} actlab_profile_summary;

ACTLAB_API void actlab_profile_describe(const actlab_profile* profile,
                                        actlab_profile_summary* out);

/* ---- beliefs ------------------------------------------------------------- */

typedef struct actlab_posteriors {
  int has_p_el;
  double p_el; /* S = B given act and no revelation */
  int has_q_a;
  double q_a;
  int has_q_na;
  double q_na;
  double prob_act;
} actlab_posteriors;

ACTLAB_API actlab_status actlab_posteriors_compute(const actlab_profile* profile,
                                                   const actlab_params* params,
                                                   actlab_posteriors* out);
ACTLAB_API actlab_status actlab_posterior_state_unrevealed(
    const actlab_profile* profile, const actlab_params* params, double* out);
ACTLAB_API actlab_status actlab_posterior_competence(
    const actlab_profile* profile, const actlab_params* params,
    actlab_choice choice, double* out);
ACTLAB_API actlab_status actlab_strategy_covariance(
    const actlab_profile* profile, const actlab_distribution* dist,
    double* out);
ACTLAB_API double actlab_backward_vote(double p_el, double bias,
                                       actlab_choice choice);
ACTLAB_API double actlab_forward_vote(double q_c, double q, double r_bl);

/* ---- equilibria ---------------------------------------------------------- */

typedef struct actlab_off_path {
  int present;
  actlab_choice for_choice;
  double q_c;
  double p_el;
} actlab_off_path;

ACTLAB_API double actlab_expected_reelection_competent(double p_prime,
                                                       double pi, double y,
                                                       double r_a);
ACTLAB_API double actlab_expected_reelection_incompetent(double mean,
                                                         double pi_nc, double y,
                                                         double r_a);

typedef struct actlab_verification {
  double residual;
  double competent_gain;
  double worst_type;
  double incompetent_gain;
  int types_checked;
  int indifferent_types;
  double r_a;
  double act_bad, act_good, not_act_bad, not_act_good;
  actlab_posteriors posteriors;
} actlab_verification;

/* assumed_r_a may be NULL. grid <= 0 selects the default (1000). */
ACTLAB_API actlab_status actlab_verify(const actlab_profile* profile,
                                       const actlab_params* params,
                                       actlab_voter voter,
                                       const actlab_off_path* off_path,
                                       int grid, const double* assumed_r_a,
                                       actlab_verification* out);

typedef struct actlab_equilibrium_info {
  actlab_regime regime;
  actlab_voter voter;
  double r_a;
  double residual;
  actlab_profile_summary profile;
  actlab_off_path off_path;
  actlab_posteriors posteriors;
  int has_threshold_margin;
  double threshold_margin; /* p_el - bias under the (1-y)/(2-y) profile */
  double threshold_p_el;
  int has_high_margin;
  double high_margin; /* bias - p_el under the 1/(2-y) profile */
  double high_p_el;
  size_t note_count;
} actlab_equilibrium_info;

ACTLAB_API actlab_status actlab_solve(const actlab_params* params,
                                      actlab_voter voter, int grid,
                                      actlab_equilibria** out);
ACTLAB_API actlab_status actlab_solve_backward(const actlab_params* params,
                                               int grid,
                                               actlab_equilibria** out);
ACTLAB_API actlab_status actlab_forward_pooling(const actlab_params* params,
                                                actlab_pooling which, int grid,
                                                actlab_equilibria** out);
ACTLAB_API actlab_status actlab_against_action_solve(
    const actlab_params* params, int grid, actlab_equilibria** out);
ACTLAB_API void actlab_equilibria_free(actlab_equilibria* set);
ACTLAB_API size_t actlab_equilibria_count(const actlab_equilibria* set);
ACTLAB_API actlab_status actlab_equilibria_info(const actlab_equilibria* set,
                                                size_t index,
                                                actlab_equilibrium_info* out);
/* Returns NULL when out of range. Valid while `set` lives. */
ACTLAB_API const char* actlab_equilibria_note(const actlab_equilibria* set,
                                              size_t index, size_t note);
/* New profile handle (caller frees) holding equilibrium `index`. */
ACTLAB_API actlab_status actlab_equilibria_profile(const actlab_equilibria* set,
                                                   size_t index,
                                                   actlab_profile** out);

/* ---- welfare ------------------------------------------------------------- */

typedef struct actlab_welfare {
  double u_c;
  double u_nc;
  double U_b;
  double U_f;
  double gap;
  double threshold;
  actlab_regime backward_regime;
  actlab_pooling forward_regime;
} actlab_welfare;

ACTLAB_API actlab_status actlab_welfare_report(const actlab_params* params,
                                               actlab_pooling forward_regime,
                                               actlab_welfare* out);
ACTLAB_API actlab_status actlab_competent_backward_utility(
    const actlab_params* params, double* out);
ACTLAB_API actlab_status actlab_profile_utility(const actlab_profile* profile,
                                                const actlab_params* params,
                                                double* out);

/* ---- Monte Carlo --------------------------------------------------------- */

typedef struct actlab_simulation_summary {
  uint64_t n;
  uint64_t seed;
  uint64_t fingerprint;
  double reelect_freq;
  double reelect_competent;
  double reelect_incompetent;
  uint64_t n_competent;
  uint64_t n_incompetent;
  double act_freq;
  double mean_utility;
  double se_reelect;
  double se_reelect_competent;
  double se_reelect_incompetent;
  double se_act;
  double se_utility;
  size_t bin_count;
} actlab_simulation_summary;

typedef struct actlab_bin {
  double lo;
  double hi;
  uint64_t count;
  uint64_t reelected;
} actlab_bin;

/* bins <= 0 selects 20; jobs <= 0 selects 1. */
ACTLAB_API actlab_status actlab_simulate(const actlab_profile* profile,
                                         const actlab_params* params,
                                         actlab_voter voter,
                                         const actlab_off_path* off_path,
                                         uint64_t n, uint64_t seed, int bins,
                                         int jobs, actlab_simulation** out);
ACTLAB_API void actlab_simulation_free(actlab_simulation* sim);
ACTLAB_API void actlab_simulation_describe(const actlab_simulation* sim,
                                           actlab_simulation_summary* out);
ACTLAB_API actlab_status actlab_simulation_bin(const actlab_simulation* sim,
                                               size_t index, actlab_bin* out);

typedef struct actlab_zscore {
  double empirical;
  double expected;
  double std_error;
  double z;
  int flagged;
} actlab_zscore;

typedef struct actlab_crosscheck {
  actlab_zscore reelect;
  actlab_zscore reelect_competent;
  actlab_zscore reelect_incompetent;
  actlab_zscore act;
  actlab_zscore utility;
  double max_abs_bin_z;
  size_t bins_compared;
  double max_abs_z;
  int any_flagged;
} actlab_crosscheck;

/* Analytic expectations are computed from the same configuration the
 * simulation was run with; a different configuration yields
 * ACTLAB_ERR_CONFIG_MISMATCH. */
ACTLAB_API actlab_status actlab_crosscheck_analytic(
    const actlab_simulation* sim, const actlab_profile* profile,
    const actlab_params* params, actlab_voter voter,
    const actlab_off_path* off_path, actlab_crosscheck* out);
ACTLAB_API actlab_status actlab_crosscheck_runs(const actlab_simulation* sim,
                                                const actlab_simulation* reference,
                                                actlab_crosscheck* out);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* ACTLAB_ACTLAB_H_ */
