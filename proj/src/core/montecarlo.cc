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

#include "core/montecarlo.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "core/belief_engine.h"
#include "core/errors.h"
#include "core/welfare.h"

namespace actlab {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kChunk = 1 << 16;

std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void Add(const CompensatedSum& other) {
    Add(other.sum_);
    Add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Accumulator {
  std::uint64_t competent = 0;
  std::uint64_t competent_reelected = 0;
  std::uint64_t incompetent = 0;
  std::uint64_t incompetent_reelected = 0;
  std::uint64_t acts = 0;
  CompensatedSum utility;
  CompensatedSum utility_sq;
  std::vector<std::uint64_t> bin_count;
  std::vector<std::uint64_t> bin_reelected;

  explicit Accumulator(int bins) : bin_count(bins, 0), bin_reelected(bins, 0) {}

  void Merge(const Accumulator& o) {
    competent += o.competent;
    competent_reelected += o.competent_reelected;
    incompetent += o.incompetent;
    incompetent_reelected += o.incompetent_reelected;
    acts += o.acts;
    utility.Add(o.utility);
    utility_sq.Add(o.utility_sq);
    for (size_t b = 0; b < bin_count.size(); ++b) {
      bin_count[b] += o.bin_count[b];
      bin_reelected[b] += o.bin_reelected[b];
    }
  }
};

int BinOf(double p, int bins) {
  return std::min(static_cast<int>(p * bins), bins - 1);
}

double FrequencyError(double freq, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(freq * (1.0 - freq) / static_cast<double>(n));
}

class Fnv1a {
 public:
  void Add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (v >> (8 * i)) & 0xff;
      hash_ *= 0x100000001b3ULL;
    }
  }
  void Add(double v) { Add(std::bit_cast<std::uint64_t>(v)); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

ZScore Score(std::string name, double empirical, double expected,
             double std_error) {
  ZScore s{std::move(name), empirical, expected, std_error, 0.0, false};
  const double diff = empirical - expected;
  if (std_error > 0.0) {
    s.z = diff / std_error;
  } else if (std::abs(diff) > 1e-12 * std::max(1.0, std::abs(expected))) {
    // A zero-variance statistic only disagrees beyond rounding noise.
    s.z = std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  s.flagged = std::abs(s.z) > kZFlagThreshold;
  return s;
}

// Plug-in standard error of a frequency, or the one implied by the expected
// value when the sample is degenerate (all hits or all misses), which happens
// in sparsely populated bins.
double TestError(double plug_in, double expected, std::uint64_t count) {
  if (plug_in > 0.0 || count == 0) return plug_in;
  const double e = std::clamp(expected, 0.0, 1.0);
  return std::sqrt(e * (1.0 - e) / static_cast<double>(count));
}

void Summarize(CrosscheckReport& report) {
  for (const auto* list : {&report.scores, &report.bin_scores}) {
    for (const ZScore& s : *list) {
      report.max_abs_z = std::max(report.max_abs_z, std::abs(s.z));
      report.any_flagged = report.any_flagged || s.flagged;
    }
  }
}

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial)
    : state_(Mix(seed ^ Mix(trial * kGolden + kGolden))) {}

TrialRng::result_type TrialRng::operator()() {
  state_ += kGolden;
  return Mix(state_);
}

double TrialRng::Uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double SampleBelief(const BeliefDistribution& dist, TrialRng& rng) {
  const DistributionSpec& spec = dist.spec();
  if (const auto* u = std::get_if<UniformSpec>(&spec)) {
    return u->lo + rng.Uniform() * (u->hi - u->lo);
  }
  if (const auto* b = std::get_if<BetaSpec>(&spec)) {
    std::gamma_distribution<double> ga(b->alpha, 1.0);
    std::gamma_distribution<double> gb(b->beta, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    return x / (x + y);
  }
  if (const auto* g = std::get_if<DiscreteGridSpec>(&spec)) {
    double u = rng.Uniform();
    for (const Atom& a : g->atoms) {
      if (u < a.weight) return a.point;
      u -= a.weight;
    }
    return g->atoms.back().point;
  }
  const auto& pc = std::get<PiecewiseConstantSpec>(spec);
  double u = rng.Uniform();
  const size_t pieces = pc.densities.size();
  for (size_t i = 0; i < pieces; ++i) {
    const double width = pc.breakpoints[i + 1] - pc.breakpoints[i];
    const double mass = pc.densities[i] * width;
    if (u < mass || i + 1 == pieces) {
      const double frac = mass > 0.0 ? std::min(u / mass, 1.0) : 0.0;
      return pc.breakpoints[i] + frac * width;
    }
    u -= mass;
  }
  return pc.breakpoints.back();
}

std::uint64_t ConfigFingerprint(const StrategyProfile& profile,
                                const ModelParams& params, VoterKind voter,
                                const std::optional<OffPathBelief>& off_path,
                                int bins) {
  Fnv1a h;
  if (const auto* t = profile.competent.threshold()) {
    h.Add(std::uint64_t{1});
    h.Add(t->threshold);
    h.Add(t->mix_at_threshold);
  } else {
    const TabulatedStrategy& tab = *profile.competent.tabulated();
    h.Add(std::uint64_t{2});
    h.Add(static_cast<std::uint64_t>(tab.interpolation));
    for (double x : tab.points) h.Add(x);
    for (double v : tab.values) h.Add(v);
  }
  h.Add(profile.incompetent);
  h.Add(params.y());
  h.Add(params.q());
  h.Add(params.bias());
  h.Add(static_cast<std::uint64_t>(params.dist().spec().index()));
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformSpec>) {
          h.Add(s.lo);
          h.Add(s.hi);
        } else if constexpr (std::is_same_v<T, BetaSpec>) {
          h.Add(s.alpha);
          h.Add(s.beta);
        } else if constexpr (std::is_same_v<T, DiscreteGridSpec>) {
          for (const Atom& a : s.atoms) {
            h.Add(a.point);
            h.Add(a.weight);
          }
        } else {
          for (double b : s.breakpoints) h.Add(b);
          for (double d : s.densities) h.Add(d);
        }
      },
      params.dist().spec());
  h.Add(static_cast<std::uint64_t>(voter));
  if (off_path) {
    h.Add(static_cast<std::uint64_t>(off_path->for_choice) + 1);
    h.Add(off_path->q_c);
    h.Add(off_path->p_el);
  } else {
    h.Add(std::uint64_t{0});
  }
  h.Add(static_cast<std::uint64_t>(bins));
  return h.value();
}

SimulationOutcome Simulate(const StrategyProfile& profile,
                           const ModelParams& params, VoterKind voter,
                           const std::optional<OffPathBelief>& off_path,
                           std::uint64_t n, std::uint64_t seed,
                           const SimulationOptions& options) {
  if (n == 0) Fail(ErrorCode::kInvalidSampleCount, "sample count must be >= 1");
  Require(options.bins >= 1, "need at least one p' bin");
  const int bins = options.bins;
  const ReelectionContext ctx = ImpliedContext(profile, params, voter, off_path);
  const double q = params.q();
  const double y = params.y();
  const double u_act = VoterUtility(PolicyChoice::kAct, State::kBad, params);
  const double u_not_bad =
      VoterUtility(PolicyChoice::kNotAct, State::kBad, params);
  const double u_not_good =
      VoterUtility(PolicyChoice::kNotAct, State::kGood, params);

  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Accumulator> partial(chunks, Accumulator(bins));

  auto run_chunk = [&](std::uint64_t c) {
    Accumulator& acc = partial[c];
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(n, begin + kChunk);
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      TrialRng rng(seed, trial);
      const bool competent = rng.Uniform() < q;
      const double p = SampleBelief(params.dist(), rng);
      const double pi = competent ? profile.competent(p) : profile.incompetent;
      const bool act = rng.Uniform() < pi;
      const bool bad = rng.Uniform() < p;
      const bool revealed = rng.Uniform() >= y;
      const double tie = rng.Uniform();

      double vote;
      double utility;
      if (act) {
        vote = revealed ? (bad ? ctx.act_bad : ctx.act_good) : ctx.r_a;
        utility = u_act;
        ++acc.acts;
      } else {
        vote = bad ? ctx.not_act_bad : ctx.not_act_good;
        utility = bad ? u_not_bad : u_not_good;
      }
      const bool reelected = tie < vote;
      if (competent) {
        ++acc.competent;
        acc.competent_reelected += reelected;
        const int b = BinOf(p, bins);
        ++acc.bin_count[b];
        acc.bin_reelected[b] += reelected;
      } else {
        ++acc.incompetent;
        acc.incompetent_reelected += reelected;
      }
      acc.utility.Add(utility);
      acc.utility_sq.Add(utility * utility);
    }
  };

  const int jobs = std::max(1, std::min<int>(options.jobs,
                                             static_cast<int>(chunks)));
  if (jobs == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        for (std::uint64_t c = w; c < chunks; c += jobs) run_chunk(c);
      });
    }
    for (auto& t : workers) t.join();
  }

  Accumulator total(bins);
  for (const Accumulator& a : partial) total.Merge(a);

  SimulationOutcome out;
  out.n = n;
  out.seed = seed;
  out.fingerprint = ConfigFingerprint(profile, params, voter, off_path, bins);
  const double dn = static_cast<double>(n);
  out.n_competent = total.competent;
  out.n_incompetent = total.incompetent;
  out.reelect_freq =
      static_cast<double>(total.competent_reelected +
                          total.incompetent_reelected) / dn;
  out.reelect_competent =
      total.competent ? static_cast<double>(total.competent_reelected) /
                            static_cast<double>(total.competent)
                      : 0.0;
  out.reelect_incompetent =
      total.incompetent ? static_cast<double>(total.incompetent_reelected) /
                              static_cast<double>(total.incompetent)
                        : 0.0;
  out.act_freq = static_cast<double>(total.acts) / dn;
  out.mean_utility = total.utility.value() / dn;
  const double var = std::max(
      0.0, total.utility_sq.value() / dn - out.mean_utility * out.mean_utility);
  out.se_utility = n > 1 ? std::sqrt(var * dn / (dn - 1.0) / dn) : 0.0;
  out.se_reelect = FrequencyError(out.reelect_freq, n);
  out.se_reelect_competent =
      FrequencyError(out.reelect_competent, total.competent);
  out.se_reelect_incompetent =
      FrequencyError(out.reelect_incompetent, total.incompetent);
  out.se_act = FrequencyError(out.act_freq, n);
  for (int b = 0; b < bins; ++b) {
    out.competent_bins.push_back(
        {static_cast<double>(b) / bins, static_cast<double>(b + 1) / bins,
         total.bin_count[b], total.bin_reelected[b]});
  }
  return out;
}

AnalyticExpectations ComputeAnalytic(
    const StrategyProfile& profile, const ModelParams& params, VoterKind voter,
    const std::optional<OffPathBelief>& off_path, int bins) {
  Require(bins >= 1, "need at least one p' bin");
  const ReelectionContext ctx = ImpliedContext(profile, params, voter, off_path);
  const BeliefDistribution& dist = params.dist();
  const CompetentStrategy& strategy = profile.competent;
  auto competent_payoff = [&](double p) {
    return ExpectedReelectionCompetent(p, strategy(p), ctx);
  };
  std::vector<double> breaks = strategy.Breakpoints();
  for (int b = 1; b < bins; ++b) breaks.push_back(static_cast<double>(b) / bins);

  AnalyticExpectations a;
  a.fingerprint = ConfigFingerprint(profile, params, voter, off_path, bins);
  a.reelect_competent = dist.Expect(competent_payoff, breaks);
  a.reelect_incompetent =
      ExpectedReelectionIncompetent(params.mean(), profile.incompetent, ctx);
  a.reelect_freq = params.q() * a.reelect_competent +
                   (1.0 - params.q()) * a.reelect_incompetent;
  a.act_freq = ActProbability(profile, params);
  a.mean_utility = ProfileUtility(profile, params);
  for (int b = 0; b < bins; ++b) {
    auto in_bin = [&, b](double p) { return BinOf(p, bins) == b ? 1.0 : 0.0; };
    const double mass = dist.Expect(in_bin, breaks);
    if (mass <= 0.0) {
      a.competent_bins.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double weighted = dist.Expect(
        [&](double p) { return in_bin(p) * competent_payoff(p); }, breaks);
    a.competent_bins.push_back(weighted / mass);
  }
  return a;
}

CrosscheckReport Crosscheck(const SimulationOutcome& outcome,
                            const AnalyticExpectations& analytic) {
  if (outcome.fingerprint != analytic.fingerprint ||
      outcome.competent_bins.size() != analytic.competent_bins.size()) {
    Fail(ErrorCode::kConfigMismatch,
         "simulation and analytic expectations describe different "
         "configurations");
  }
  CrosscheckReport report;
  report.scores.push_back(
      Score("reelect", outcome.reelect_freq, analytic.reelect_freq,
            TestError(outcome.se_reelect, analytic.reelect_freq, outcome.n)));
  report.scores.push_back(Score(
      "reelect_competent", outcome.reelect_competent,
      analytic.reelect_competent,
      TestError(outcome.se_reelect_competent, analytic.reelect_competent,
                outcome.n_competent)));
  report.scores.push_back(Score(
      "reelect_incompetent", outcome.reelect_incompetent,
      analytic.reelect_incompetent,
      TestError(outcome.se_reelect_incompetent, analytic.reelect_incompetent,
                outcome.n_incompetent)));
  report.scores.push_back(
      Score("act", outcome.act_freq, analytic.act_freq,
            TestError(outcome.se_act, analytic.act_freq, outcome.n)));
  report.scores.push_back(Score("utility", outcome.mean_utility,
                                analytic.mean_utility, outcome.se_utility));
  for (size_t b = 0; b < outcome.competent_bins.size(); ++b) {
    const BinStat& bin = outcome.competent_bins[b];
    if (bin.count == 0 || std::isnan(analytic.competent_bins[b])) continue;
    const double freq = static_cast<double>(bin.reelected) /
                        static_cast<double>(bin.count);
    report.bin_scores.push_back(Score("bin" + std::to_string(b), freq,
                                      analytic.competent_bins[b],
                                      TestError(FrequencyError(freq, bin.count),
                                                analytic.competent_bins[b],
                                                bin.count)));
  }
  Summarize(report);
  return report;
}

CrosscheckReport Crosscheck(const SimulationOutcome& outcome,
                            const SimulationOutcome& reference) {
  if (outcome.fingerprint != reference.fingerprint ||
      outcome.competent_bins.size() != reference.competent_bins.size()) {
    Fail(ErrorCode::kConfigMismatch, "runs describe different configurations");
  }
  AnalyticExpectations expected;
  expected.fingerprint = reference.fingerprint;
  expected.reelect_freq = reference.reelect_freq;
  expected.reelect_competent = reference.reelect_competent;
  expected.reelect_incompetent = reference.reelect_incompetent;
  expected.act_freq = reference.act_freq;
  expected.mean_utility = reference.mean_utility;
  for (const BinStat& bin : reference.competent_bins) {
    expected.competent_bins.push_back(
        bin.count ? static_cast<double>(bin.reelected) /
                        static_cast<double>(bin.count)
                  : std::numeric_limits<double>::quiet_NaN());
  }
  return Crosscheck(outcome, expected);
}

}  // namespace actlab
