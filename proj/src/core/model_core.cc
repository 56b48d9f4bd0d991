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

#include "core/model_core.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.h"
#include "core/quadrature.h"

namespace actlab {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kZeroActProbability: return "ZeroActProbability";
    case ErrorCode::kOffPath: return "OffPath";
    case ErrorCode::kBiasRegime: return "BiasRegime";
    case ErrorCode::kBeliefInconsistent: return "BeliefInconsistent";
    case ErrorCode::kMissingOffPath: return "MissingOffPath";
    case ErrorCode::kInvalidSampleCount: return "InvalidSampleCount";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
    case ErrorCode::kUnresolved: return "Unresolved";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

const char* ToString(State state) {
  return state == State::kBad ? "B" : "G";
}

const char* ToString(PolicyChoice choice) {
  return choice == PolicyChoice::kAct ? "act" : "not_act";
}

const char* ToString(IncumbentType type) {
  return type == IncumbentType::kCompetent ? "competent" : "incompetent";
}

const char* ToString(VoterKind kind) {
  return kind == VoterKind::kBackwardLooking ? "backward" : "forward";
}

const char* ToString(BiasKind kind) {
  switch (kind) {
    case BiasKind::kProAction: return "pro_action";
    case BiasKind::kActionNeutral: return "action_neutral";
    case BiasKind::kAgainstAction: return "against_action";
  }
  return "unknown";
}

namespace {

bool InUnit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

std::string Num(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

DistributionSpec Normalize(const UniformSpec& s) {
  Require(InUnit(s.lo) && InUnit(s.hi) && s.lo < s.hi,
          "uniform prior needs 0 <= lo < hi <= 1, got lo=" + Num(s.lo) +
              " hi=" + Num(s.hi));
  return s;
}

DistributionSpec Normalize(const BetaSpec& s) {
  Require(std::isfinite(s.alpha) && std::isfinite(s.beta) && s.alpha > 0.0 &&
              s.beta > 0.0,
          "beta prior needs alpha > 0 and beta > 0");
  return s;
}

DistributionSpec Normalize(const DiscreteGridSpec& s) {
  std::vector<Atom> atoms;
  double total = 0.0;
  for (const Atom& a : s.atoms) {
    Require(InUnit(a.point), "discrete atom outside [0,1]: " + Num(a.point));
    Require(std::isfinite(a.weight) && a.weight >= 0.0,
            "discrete atom weight must be nonnegative: " + Num(a.weight));
    if (a.weight > 0.0) {
      atoms.push_back(a);
      total += a.weight;
    }
  }
  Require(total > 0.0, "discrete prior has zero total mass");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.point < r.point; });
  std::vector<Atom> merged;
  for (const Atom& a : atoms) {
    if (!merged.empty() && merged.back().point == a.point) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  for (Atom& a : merged) a.weight /= total;
  return DiscreteGridSpec{std::move(merged)};
}

DistributionSpec Normalize(const PiecewiseConstantSpec& s) {
  Require(s.breakpoints.size() >= 2 &&
              s.densities.size() + 1 == s.breakpoints.size(),
          "piecewise prior needs k+1 breakpoints for k densities");
  for (size_t i = 0; i < s.breakpoints.size(); ++i) {
    Require(InUnit(s.breakpoints[i]), "piecewise breakpoint outside [0,1]: " +
                                          Num(s.breakpoints[i]));
    if (i > 0) {
      Require(s.breakpoints[i] > s.breakpoints[i - 1],
              "piecewise breakpoints must be strictly increasing");
    }
  }
  double total = 0.0;
  for (size_t i = 0; i < s.densities.size(); ++i) {
    Require(std::isfinite(s.densities[i]) && s.densities[i] >= 0.0,
            "piecewise density must be nonnegative");
    total += s.densities[i] * (s.breakpoints[i + 1] - s.breakpoints[i]);
  }
  Require(total > 0.0, "piecewise prior has zero total mass");
  PiecewiseConstantSpec out = s;
  for (double& d : out.densities) d /= total;
  return out;
}

}  // namespace

BeliefDistribution BeliefDistribution::Make(const DistributionSpec& spec) {
  BeliefDistribution d;
  d.spec_ = std::visit([](const auto& s) { return Normalize(s); }, spec);
  if (const auto* u = std::get_if<UniformSpec>(&d.spec_)) {
    d.support_lo_ = u->lo;
    d.support_hi_ = u->hi;
  } else if (const auto* b = std::get_if<BetaSpec>(&d.spec_)) {
    d.log_beta_norm_ =
        std::lgamma(b->alpha) + std::lgamma(b->beta) -
        std::lgamma(b->alpha + b->beta);
  } else if (const auto* g = std::get_if<DiscreteGridSpec>(&d.spec_)) {
    d.support_lo_ = g->atoms.front().point;
    d.support_hi_ = g->atoms.back().point;
  } else if (const auto* pc = std::get_if<PiecewiseConstantSpec>(&d.spec_)) {
    d.support_lo_ = pc->breakpoints.front();
    d.support_hi_ = pc->breakpoints.back();
  }
  const double mass = d.Expect([](double) { return 1.0; });
  Require(std::abs(mass - 1.0) <= kMassTolerance,
          d.FamilyName() + " prior integrates to " + Num(mass) +
              ", not 1 within tolerance");
  d.mean_ = d.Expect([](double p) { return p; });
  Require(d.mean_ > 0.0, "prior mean must be strictly positive");
  return d;
}

std::string BeliefDistribution::FamilyName() const {
  switch (spec_.index()) {
    case 0: return "uniform";
    case 1: return "beta";
    case 2: return "discrete";
    default: return "piecewise";
  }
}

double BeliefDistribution::Density(double p) const {
  if (const auto* u = std::get_if<UniformSpec>(&spec_)) {
    return (p >= u->lo && p <= u->hi) ? 1.0 / (u->hi - u->lo) : 0.0;
  }
  if (const auto* b = std::get_if<BetaSpec>(&spec_)) {
    if (p < 0.0 || p > 1.0) return 0.0;
    const double log_x = (b->alpha == 1.0) ? 0.0 : (b->alpha - 1.0) * std::log(p);
    const double log_1mx =
        (b->beta == 1.0) ? 0.0 : (b->beta - 1.0) * std::log1p(-p);
    return std::exp(log_x + log_1mx - log_beta_norm_);
  }
  if (const auto* pc = std::get_if<PiecewiseConstantSpec>(&spec_)) {
    const auto& br = pc->breakpoints;
    if (p < br.front() || p > br.back()) return 0.0;
    auto it = std::upper_bound(br.begin(), br.end(), p);
    size_t piece = (it == br.end()) ? pc->densities.size() - 1
                                    : static_cast<size_t>(it - br.begin()) - 1;
    return pc->densities[piece];
  }
  return 0.0;
}

double BeliefDistribution::AtomMass(double p) const {
  if (const auto* g = std::get_if<DiscreteGridSpec>(&spec_)) {
    for (const Atom& a : g->atoms) {
      if (a.point == p) return a.weight;
    }
  }
  return 0.0;
}

std::vector<double> BeliefDistribution::Breakpoints() const {
  if (const auto* pc = std::get_if<PiecewiseConstantSpec>(&spec_)) {
    return pc->breakpoints;
  }
  if (const auto* g = std::get_if<DiscreteGridSpec>(&spec_)) {
    std::vector<double> points;
    for (const Atom& a : g->atoms) points.push_back(a.point);
    return points;
  }
  return {support_lo_, support_hi_};
}

double BeliefDistribution::Expect(const std::function<double(double)>& g,
                                  std::span<const double> breaks) const {
  if (const auto* grid = std::get_if<DiscreteGridSpec>(&spec_)) {
    double sum = 0.0;
    for (const Atom& a : grid->atoms) sum += a.weight * g(a.point);
    return sum;
  }
  const auto* beta = std::get_if<BetaSpec>(&spec_);
  std::vector<double> cuts = Breakpoints();
  for (double b : breaks) {
    if (b > support_lo_ && b < support_hi_) cuts.push_back(b);
  }
  if (beta) cuts.push_back(0.5);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const std::function<double(double)> integrand = [&](double p) {
    return g(p) * Density(p);
  };
  // Above 1/2 a beta density is integrated in u = 1 - p', which keeps full
  // floating-point resolution next to a singularity at p' = 1.
  const std::function<double(double)> reflected = [&](double u) {
    const double log_u = beta->beta == 1.0 ? 0.0 : (beta->beta - 1.0) * std::log(u);
    const double log_1mu =
        beta->alpha == 1.0 ? 0.0 : (beta->alpha - 1.0) * std::log1p(-u);
    return g(1.0 - u) * std::exp(log_u + log_1mu - log_beta_norm_);
  };
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (beta && cuts[i] >= 0.5) {
      total += IntegrateAdaptive(reflected, 1.0 - cuts[i + 1], 1.0 - cuts[i])
                   .value;
    } else {
      total += IntegrateAdaptive(integrand, cuts[i], cuts[i + 1]).value;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------

CompetentStrategy CompetentStrategy::Threshold(double threshold,
                                               double mix_at_threshold) {
  Require(InUnit(threshold), "strategy threshold must lie in [0,1]");
  Require(InUnit(mix_at_threshold), "mixing weight must lie in [0,1]");
  return CompetentStrategy(ThresholdStrategy{threshold, mix_at_threshold});
}

CompetentStrategy CompetentStrategy::Tabulated(std::vector<double> points,
                                               std::vector<double> values,
                                               Interpolation interpolation) {
  Require(points.size() >= 2 && points.size() == values.size(),
          "tabulated strategy needs >= 2 (p', pi) pairs");
  Require(points.front() == 0.0 && points.back() == 1.0,
          "tabulated strategy grid must cover [0,1]");
  for (size_t i = 0; i < points.size(); ++i) {
    Require(InUnit(values[i]), "tabulated strategy value outside [0,1]");
    if (i > 0) {
      Require(points[i] > points[i - 1],
              "tabulated strategy grid must be strictly increasing");
    }
  }
  return CompetentStrategy(
      TabulatedStrategy{std::move(points), std::move(values), interpolation});
}

CompetentStrategy CompetentStrategy::Constant(double value) {
  return Tabulated({0.0, 1.0}, {value, value}, Interpolation::kLinear);
}

double CompetentStrategy::ActProbability(double p) const {
  if (const auto* t = threshold()) {
    if (p > t->threshold) return 1.0;
    if (p < t->threshold) return 0.0;
    return t->mix_at_threshold;
  }
  const TabulatedStrategy& tab = *tabulated();
  p = std::clamp(p, 0.0, 1.0);
  auto it = std::upper_bound(tab.points.begin(), tab.points.end(), p);
  if (it == tab.points.end()) return tab.values.back();
  const size_t hi = static_cast<size_t>(it - tab.points.begin());
  const size_t lo = hi - 1;
  if (tab.interpolation == Interpolation::kStep) return tab.values[lo];
  const double w = (p - tab.points[lo]) / (tab.points[hi] - tab.points[lo]);
  return tab.values[lo] + w * (tab.values[hi] - tab.values[lo]);
}

std::vector<double> CompetentStrategy::Breakpoints() const {
  if (const auto* t = threshold()) return {t->threshold};
  return tabulated()->points;
}

StrategyProfile StrategyProfile::Make(CompetentStrategy competent,
                                      double incompetent) {
  Require(InUnit(incompetent),
          "incompetent act probability must lie in [0,1]");
  return StrategyProfile{std::move(competent), incompetent};
}

// ---------------------------------------------------------------------------

ModelParams::ModelParams(double y, double q, BeliefDistribution dist,
                         std::optional<double> bias)
    : y_(y), q_(q), dist_(std::move(dist)), bias_(bias.value_or(dist_.mean())) {
  Require(InUnit(y_), "revelation parameter y must lie in [0,1]");
  Require(std::isfinite(q_) && q_ > 0.0 && q_ < 1.0,
          "prior competence q must lie in (0,1)");
  if (bias.has_value()) {
    Require(std::isfinite(*bias) && *bias > 0.0 && *bias < 1.0,
            "voter bias must lie in (0,1)");
  }
}

BiasKind ModelParams::bias_kind() const {
  if (std::abs(bias_ - mean()) <= kTieTolerance) return BiasKind::kActionNeutral;
  return bias_ < mean() ? BiasKind::kProAction : BiasKind::kAgainstAction;
}

double VoterUtility(PolicyChoice choice, State state,
                    const ModelParams& params) {
  const double scale = params.mean() / params.bias();
  if (choice == PolicyChoice::kAct) return scale - params.mean();
  return state == State::kBad ? 0.0 : scale;
}

double ExpectedVoterUtility(PolicyChoice choice, double p_bad,
                            const ModelParams& params) {
  return p_bad * VoterUtility(choice, State::kBad, params) +
         (1.0 - p_bad) * VoterUtility(choice, State::kGood, params);
}

}  // namespace actlab
