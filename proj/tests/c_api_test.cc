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

// Exercises the shared library strictly through its public C header.

#include "actlab/actlab.h"

#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"

namespace {

struct Env {
  actlab_distribution* dist = nullptr;
  actlab_params* params = nullptr;

  Env(double y, double q, int has_bias = 0, double bias = 0.0) {
    REQUIRE(actlab_distribution_uniform(0, 1, &dist) == ACTLAB_OK);
    REQUIRE(actlab_params_create(y, q, dist, has_bias, bias, &params) ==
            ACTLAB_OK);
  }
  ~Env() {
    actlab_params_free(params);
    actlab_distribution_free(dist);
  }
};

double Square(double x, void*) { return x * x; }

TEST_CASE("distributions and errors") {
  actlab_distribution* dist = nullptr;
  CHECK(actlab_distribution_uniform(0.5, 0.2, &dist) ==
        ACTLAB_ERR_INVALID_ARGUMENT);
  CHECK(dist == nullptr);
  CHECK(std::strlen(actlab_last_error()) > 0);
  CHECK(std::string(actlab_status_name(ACTLAB_ERR_OFF_PATH)) == "OffPath");

  const double points[] = {0.2, 0.8};
  const double weights[] = {1, 1};
  REQUIRE(actlab_distribution_discrete(points, weights, 2, &dist) == ACTLAB_OK);
  CHECK(actlab_distribution_mean(dist) == doctest::Approx(0.5));
  double second = 0;
  REQUIRE(actlab_distribution_expect(dist, Square, nullptr, nullptr, 0,
                                     &second) == ACTLAB_OK);
  CHECK(second == doctest::Approx(0.34));
  actlab_distribution_free(dist);

  CHECK(actlab_distribution_beta(2, 2, nullptr) ==
        ACTLAB_ERR_INVALID_ARGUMENT);
  actlab_distribution_free(nullptr);
}

TEST_CASE("params, utility and votes") {
  Env env(0.0, 0.5, 1, 0.25);
  CHECK(actlab_params_bias_kind(env.params) == ACTLAB_BIAS_PRO_ACTION);
  double u = 0;
  REQUIRE(actlab_voter_utility(ACTLAB_NOT_ACT, ACTLAB_STATE_GOOD, env.params,
                               &u) == ACTLAB_OK);
  CHECK(u == doctest::Approx(2.0));
  CHECK(actlab_backward_vote(0.5, 0.5, ACTLAB_ACT) == 0.5);
  CHECK(actlab_forward_vote(0.4, 0.5, 1.0) == 0.0);
  CHECK(actlab_expected_reelection_incompetent(0.3, 1, 0.5, 1) ==
        doctest::Approx(0.65));
}

TEST_CASE("posteriors through the C API") {
  Env env(0.5, 0.5);
  actlab_profile* profile = nullptr;
  REQUIRE(actlab_profile_threshold(1.0 / 3, 0.5, 1.0, &profile) == ACTLAB_OK);
  actlab_posteriors post;
  REQUIRE(actlab_posteriors_compute(profile, env.params, &post) == ACTLAB_OK);
  CHECK(post.has_p_el);
  CHECK(post.p_el == doctest::Approx(17.0 / 30).epsilon(1e-12));
  CHECK(post.q_a == doctest::Approx(0.4).epsilon(1e-12));
  double q_na = 0;
  CHECK(actlab_posterior_competence(profile, env.params, ACTLAB_NOT_ACT,
                                    &q_na) == ACTLAB_OK);
  CHECK(q_na == doctest::Approx(1.0));
  actlab_profile_free(profile);

  const double pts[] = {0, 1};
  const double zero[] = {0, 0};
  REQUIRE(actlab_profile_tabulated(pts, zero, 2, ACTLAB_INTERP_LINEAR, 0,
                                   &profile) == ACTLAB_OK);
  double p_el = 0;
  CHECK(actlab_posterior_state_unrevealed(profile, env.params, &p_el) ==
        ACTLAB_ERR_ZERO_ACT_PROBABILITY);
  actlab_verification v;
  CHECK(actlab_verify(profile, env.params, ACTLAB_VOTER_BACKWARD, nullptr, 0,
                      nullptr, &v) == ACTLAB_ERR_MISSING_OFF_PATH);
  actlab_profile_free(profile);
}

TEST_CASE("solving, verification and welfare") {
  Env env(0.5, 0.5);
  actlab_equilibria* set = nullptr;
  REQUIRE(actlab_solve(env.params, ACTLAB_VOTER_BACKWARD, 0, &set) ==
          ACTLAB_OK);
  REQUIRE(actlab_equilibria_count(set) == 1);
  actlab_equilibrium_info info;
  REQUIRE(actlab_equilibria_info(set, 0, &info) == ACTLAB_OK);
  CHECK(info.regime == ACTLAB_REGIME_THRESHOLD);
  CHECK(info.profile.is_threshold);
  CHECK(info.profile.threshold == doctest::Approx(1.0 / 3));
  CHECK(info.residual <= 1e-9);
  CHECK(actlab_equilibria_info(set, 3, &info) == ACTLAB_ERR_INVALID_ARGUMENT);
  CHECK(actlab_equilibria_note(set, 0, 99) == nullptr);

  actlab_profile* profile = nullptr;
  REQUIRE(actlab_equilibria_profile(set, 0, &profile) == ACTLAB_OK);
  actlab_verification v;
  const double assumed = 1.0;
  REQUIRE(actlab_verify(profile, env.params, ACTLAB_VOTER_BACKWARD,
                        &info.off_path, 1000, &assumed, &v) == ACTLAB_OK);
  CHECK(v.residual <= 1e-9);
  CHECK(v.r_a == 1.0);
  const double wrong = 0.0;
  CHECK(actlab_verify(profile, env.params, ACTLAB_VOTER_BACKWARD,
                      &info.off_path, 1000, &wrong, &v) ==
        ACTLAB_ERR_BELIEF_INCONSISTENT);
  actlab_equilibria_free(set);

  actlab_welfare w;
  REQUIRE(actlab_welfare_report(env.params, ACTLAB_POOL_ACT, &w) == ACTLAB_OK);
  CHECK(w.gap == doctest::Approx(w.U_b - w.U_f));
  double u = 0;
  REQUIRE(actlab_profile_utility(profile, env.params, &u) == ACTLAB_OK);
  CHECK(u == doctest::Approx(w.U_b).epsilon(1e-12));
  actlab_profile_free(profile);

  Env against(0.5, 0.5, 1, 0.7);
  CHECK(actlab_welfare_report(against.params, ACTLAB_POOL_ACT, &w) ==
        ACTLAB_ERR_UNRESOLVED);
  CHECK(actlab_solve_backward(against.params, 0, &set) ==
        ACTLAB_ERR_BIAS_REGIME);
  REQUIRE(actlab_against_action_solve(against.params, 0, &set) == ACTLAB_OK);
  REQUIRE(actlab_equilibria_info(set, 0, &info) == ACTLAB_OK);
  CHECK(info.regime == ACTLAB_REGIME_UNRESOLVED);
  CHECK(info.has_threshold_margin);
  CHECK(info.has_high_margin);
  CHECK(info.high_p_el == doctest::Approx(5.0 / 6).epsilon(1e-10));
  actlab_equilibria_free(set);
}

TEST_CASE("simulation handles") {
  Env env(0.5, 0.5);
  actlab_equilibria* set = nullptr;
  REQUIRE(actlab_solve(env.params, ACTLAB_VOTER_BACKWARD, 0, &set) ==
          ACTLAB_OK);
  actlab_profile* profile = nullptr;
  REQUIRE(actlab_equilibria_profile(set, 0, &profile) == ACTLAB_OK);
  actlab_equilibria_free(set);

  actlab_simulation* a = nullptr;
  actlab_simulation* b = nullptr;
  REQUIRE(actlab_simulate(profile, env.params, ACTLAB_VOTER_BACKWARD, nullptr,
                          200000, 3, 0, 1, &a) == ACTLAB_OK);
  REQUIRE(actlab_simulate(profile, env.params, ACTLAB_VOTER_BACKWARD, nullptr,
                          200000, 3, 0, 2, &b) == ACTLAB_OK);
  actlab_simulation_summary sa, sb;
  actlab_simulation_describe(a, &sa);
  actlab_simulation_describe(b, &sb);
  CHECK(std::memcmp(&sa.reelect_freq, &sb.reelect_freq, sizeof(double)) == 0);
  CHECK(sa.bin_count == 20);
  actlab_bin bin;
  CHECK(actlab_simulation_bin(a, 19, &bin) == ACTLAB_OK);
  CHECK(actlab_simulation_bin(a, 20, &bin) == ACTLAB_ERR_INVALID_ARGUMENT);

  actlab_crosscheck x;
  REQUIRE(actlab_crosscheck_runs(a, b, &x) == ACTLAB_OK);
  CHECK(x.max_abs_z == 0.0);
  REQUIRE(actlab_crosscheck_analytic(a, profile, env.params,
                                     ACTLAB_VOTER_BACKWARD, nullptr,
                                     &x) == ACTLAB_OK);
  CHECK(x.bins_compared == 20);
  CHECK_FALSE(x.any_flagged);

  Env other(0.4, 0.5);
  CHECK(actlab_crosscheck_analytic(a, profile, other.params,
                                   ACTLAB_VOTER_BACKWARD, nullptr, &x) ==
        ACTLAB_ERR_CONFIG_MISMATCH);
  actlab_simulation* none = nullptr;
  CHECK(actlab_simulate(profile, env.params, ACTLAB_VOTER_BACKWARD, nullptr, 0,
                        3, 0, 1, &none) == ACTLAB_ERR_INVALID_SAMPLE_COUNT);
  actlab_simulation_free(a);
  actlab_simulation_free(b);
  actlab_profile_free(profile);
}

}  // namespace
