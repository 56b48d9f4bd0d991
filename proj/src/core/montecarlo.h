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

#ifndef ACTLAB_CORE_MONTECARLO_H_
#define ACTLAB_CORE_MONTECARLO_H_

// End-to-end simulation of single elections: nature draws the incumbent's type
// and p', the incumbent chooses, the state realizes, it is (maybe) revealed,
// and the voter applies its rule with the profile's equilibrium posteriors.
//
// Each trial owns a generator keyed by (seed, trial index) and trials are
// reduced in fixed-size chunks in index order, so results are bit-identical
// for any thread count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/equilibrium_solver.h"
#include "core/model_core.h"

namespace actlab {

// SplitMix64 stream dedicated to one trial.
class TrialRng {
 public:
  using result_type = std::uint64_t;

  TrialRng(std::uint64_t seed, std::uint64_t trial);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();

 private:
  std::uint64_t state_;
};

// Draws p' from the prior.
double SampleBelief(const BeliefDistribution& dist, TrialRng& rng);

struct BinStat {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t count = 0;
  std::uint64_t reelected = 0;
};

struct SimulationOptions {
  int bins = 20;  // competent reelection binned on p'
  int jobs = 1;
};

struct SimulationOutcome {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t fingerprint = 0;

  double reelect_freq = 0.0;
  double reelect_competent = 0.0;
  double reelect_incompetent = 0.0;
  std::uint64_t n_competent = 0;
  std::uint64_t n_incompetent = 0;
  double act_freq = 0.0;
  double mean_utility = 0.0;

  double se_reelect = 0.0;
  double se_reelect_competent = 0.0;
  double se_reelect_incompetent = 0.0;
  double se_act = 0.0;
  double se_utility = 0.0;

  std::vector<BinStat> competent_bins;
};

// Hash of everything that determines the analytic expectations (profile,
// parameters, voter, off-path belief, binning); excludes n and seed.
std::uint64_t ConfigFingerprint(const StrategyProfile& profile,
                                const ModelParams& params, VoterKind voter,
                                const std::optional<OffPathBelief>& off_path,
                                int bins);

// Throws kInvalidSampleCount for n == 0 and kMissingOffPath when the voter's
// responses are not determined.
SimulationOutcome Simulate(const StrategyProfile& profile,
                           const ModelParams& params, VoterKind voter,
                           const std::optional<OffPathBelief>& off_path,
                           std::uint64_t n, std::uint64_t seed,
                           const SimulationOptions& options = {});

struct AnalyticExpectations {
  std::uint64_t fingerprint = 0;
  double reelect_freq = 0.0;
  double reelect_competent = 0.0;
  double reelect_incompetent = 0.0;
  double act_freq = 0.0;
  double mean_utility = 0.0;
  // Conditional competent reelection per p' bin; NaN for massless bins.
  std::vector<double> competent_bins;
};

AnalyticExpectations ComputeAnalytic(
    const StrategyProfile& profile, const ModelParams& params, VoterKind voter,
    const std::optional<OffPathBelief>& off_path, int bins = 20);

inline constexpr double kZFlagThreshold = 4.0;

struct ZScore {
  std::string statistic;
  double empirical = 0.0;
  double expected = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool flagged = false;
};

struct CrosscheckReport {
  std::vector<ZScore> scores;
  std::vector<ZScore> bin_scores;
  double max_abs_z = 0.0;
  bool any_flagged = false;
};

// z = (empirical - expected) / std_error per statistic, flagged when
// |z| > 4. Throws kConfigMismatch when the fingerprints differ.
CrosscheckReport Crosscheck(const SimulationOutcome& outcome,
                            const AnalyticExpectations& analytic);
// Run-against-run comparison using `reference` as the expected side.
CrosscheckReport Crosscheck(const SimulationOutcome& outcome,
                            const SimulationOutcome& reference);

}  // namespace actlab

#endif  // ACTLAB_CORE_MONTECARLO_H_
