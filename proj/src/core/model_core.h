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

#ifndef ACTLAB_CORE_MODEL_CORE_H_
#define ACTLAB_CORE_MODEL_CORE_H_

// Primitives of the disaster-policy agency game: a single incumbent chooses
// whether to act against a threat whose probability p' is drawn from a common
// prior f; a single voter then decides on reelection.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace actlab {

// Absolute tolerance for knife-edge comparisons (posterior vs. cutoff,
// competence posterior vs. prior, bias vs. mean).
inline constexpr double kTieTolerance = 1e-12;

// Absolute tolerance on total probability mass of a constructed prior.
inline constexpr double kMassTolerance = 1e-10;

enum class State { kBad, kGood };
enum class PolicyChoice { kAct, kNotAct };
enum class IncumbentType { kCompetent, kIncompetent };
enum class VoterKind { kBackwardLooking, kForwardLooking };
enum class BiasKind { kProAction, kActionNeutral, kAgainstAction };

const char* ToString(State state);
const char* ToString(PolicyChoice choice);
const char* ToString(IncumbentType type);
const char* ToString(VoterKind kind);
const char* ToString(BiasKind kind);

// ---------------------------------------------------------------------------
// Prior over the disaster probability.

struct UniformSpec {
  double lo = 0.0;
  double hi = 1.0;
};

struct BetaSpec {
  double alpha = 1.0;
  double beta = 1.0;
};

struct Atom {
  double point = 0.0;
  double weight = 0.0;
};

struct DiscreteGridSpec {
  std::vector<Atom> atoms;
};

// densities[i] applies on [breakpoints[i], breakpoints[i + 1]).
struct PiecewiseConstantSpec {
  std::vector<double> breakpoints;
  std::vector<double> densities;
};

using DistributionSpec = std::variant<UniformSpec, BetaSpec, DiscreteGridSpec,
                                      PiecewiseConstantSpec>;

class BeliefDistribution {
 public:
  // Validates and normalizes `spec`. Throws ModelError(kInvalidArgument) on
  // support outside [0,1], zero total mass, or zero mean.
  static BeliefDistribution Make(const DistributionSpec& spec);

  // The normalized family descriptor (discrete weights and piecewise densities
  // rescaled to unit mass).
  const DistributionSpec& spec() const { return spec_; }
  std::string FamilyName() const;

  double mean() const { return mean_; }
  bool is_discrete() const {
    return std::holds_alternative<DiscreteGridSpec>(spec_);
  }
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }

  // E_f[g(p')]. Continuous families are integrated piecewise, split at the
  // family's own kinks and at every point in `breaks`; discrete families are
  // summed exactly over atoms.
  double Expect(const std::function<double(double)>& g,
                std::span<const double> breaks = {}) const;

  // Density for continuous families; 0 for discrete ones.
  double Density(double p) const;
  // Probability mass placed exactly at p (nonzero only for atoms).
  double AtomMass(double p) const;

  // Kinks/jumps of the density inside the support, support ends included.
  std::vector<double> Breakpoints() const;

 private:
  BeliefDistribution() = default;

  DistributionSpec spec_;
  double mean_ = 0.0;
  double support_lo_ = 0.0;
  double support_hi_ = 1.0;
  double log_beta_norm_ = 0.0;
};

// ---------------------------------------------------------------------------
// Strategies.

// pi(p') = 0 below the threshold, 1 above, mix_at_threshold at it.
struct ThresholdStrategy {
  double threshold = 0.5;
  double mix_at_threshold = 0.5;
};

enum class Interpolation {
  kLinear,
  // values[i] on [points[i], points[i + 1]); the last value at p' = 1.
  kStep,
};

struct TabulatedStrategy {
  std::vector<double> points;
  std::vector<double> values;
  Interpolation interpolation = Interpolation::kLinear;
};

// Competent incumbent's probability of acting as a function of p'.
class CompetentStrategy {
 public:
  static CompetentStrategy Threshold(double threshold,
                                     double mix_at_threshold = 0.5);
  static CompetentStrategy Tabulated(std::vector<double> points,
                                     std::vector<double> values,
                                     Interpolation interpolation);
  static CompetentStrategy Constant(double value);

  double ActProbability(double p) const;
  double operator()(double p) const { return ActProbability(p); }

  // Points where the strategy may jump or kink.
  std::vector<double> Breakpoints() const;

  const ThresholdStrategy* threshold() const {
    return std::get_if<ThresholdStrategy>(&repr_);
  }
  const TabulatedStrategy* tabulated() const {
    return std::get_if<TabulatedStrategy>(&repr_);
  }

 private:
  using Representation = std::variant<ThresholdStrategy, TabulatedStrategy>;
  explicit CompetentStrategy(Representation repr) : repr_(std::move(repr)) {}

  Representation repr_;
};

struct StrategyProfile {
  CompetentStrategy competent;
  double incompetent = 0.0;  // probability the incompetent incumbent acts

  static StrategyProfile Make(CompetentStrategy competent, double incompetent);
};

// ---------------------------------------------------------------------------
// Environment.

class ModelParams {
 public:
  // `bias` is the voter's cost-benefit cutoff; unset means action-neutral
  // (cutoff at the prior mean).
  ModelParams(double y, double q, BeliefDistribution dist,
              std::optional<double> bias = std::nullopt);

  double y() const { return y_; }
  double q() const { return q_; }
  const BeliefDistribution& dist() const { return dist_; }
  double mean() const { return dist_.mean(); }
  double bias() const { return bias_; }
  BiasKind bias_kind() const;

 private:
  double y_;
  double q_;
  BeliefDistribution dist_;
  double bias_;
};

// Voter's utility under the biased cutoff. With bias == mean this is the
// action-neutral utility: 1 - p after acting, 0 after a disaster, 1 otherwise.
double VoterUtility(PolicyChoice choice, State state, const ModelParams& params);

// Expected voter utility of a choice when the state is B with probability
// p_bad.
double ExpectedVoterUtility(PolicyChoice choice, double p_bad,
                            const ModelParams& params);

}  // namespace actlab

#endif  // ACTLAB_CORE_MODEL_CORE_H_
