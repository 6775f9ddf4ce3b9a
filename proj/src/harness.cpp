#include "evodyn/harness.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "evodyn/micro.hpp"
#include "evodyn/tss.hpp"

namespace evodyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kTssStreamSalt = 0x7353535f72656673ULL;
constexpr std::uint64_t kBootstrapSalt = 0x626f6f7473747261ULL;
constexpr std::size_t kBootstrapResamples = 200;

}  // namespace

// ---------------------------------------------------------------------------
// Invasion

InvasionEstimate estimate_invasion_probability(const EcologyParams& params, const Trait& x,
                                               const Trait& y, long K, const RunSettings& run) {
  InvasionEstimate est;
  est.resident = x;
  est.mutant = y;
  est.K = K;
  est.reps = run.reps;
  const auto cls = classify_pair(params, x, y);
  est.classification = cls.kind;
  if (cls.kind == InvasionClass::Degenerate) {
    throw PreconditionError("invasion pair " + to_string(x) + " -> " + to_string(y) +
                            " is degenerate");
  }
  est.resident_count =
      static_cast<long>(std::floor(static_cast<double>(K) * equilibrium_density(params, x)));
  if (est.resident_count < 10) {
    throw PreconditionError("K too small: floor(K n-bar_x) must be at least 10");
  }
  est.target = std::max(cls.mutant_fitness, 0.0) / params.b(y);

  enum Outcome { kResident, kMutant, kExtinct };
  SimulationOptions opts;
  opts.event_budget = run.event_budget;
  opts.stop = [](const PopulationState& s, EventKind) { return s.support_size() <= 1; };
  const long n0 = est.resident_count;
  auto results = run_replicates(run.reps, run.jobs, run.seed, [&](std::size_t, Rng& rng) {
    PopulationState s(params, K);
    s.add(x, n0);
    s.add(y, 1);
    const Trajectory traj = simulate(params, K, 0.0, std::move(s), kInf, opts, rng);
    const PopulationState& end = *traj.final_state;
    if (end.extinct()) return kExtinct;
    return end.count_of(y) > 0 ? kMutant : kResident;
  });
  est.outcomes.reserve(results.size());
  for (const auto& r : results) {
    char code;
    if (r.budget_exceeded) {
      ++est.budget_exhausted;
      code = 'b';
    } else if (!r.ok()) {
      ++est.failed;
      code = 'f';
    } else if (*r.value == kMutant) {
      ++est.mutant_fixed;
      code = 'y';
    } else if (*r.value == kResident) {
      ++est.resident_fixed;
      code = 'x';
    } else {
      ++est.extinct;
      code = 'e';
    }
    est.outcomes.push_back(code);
  }
  if (est.reps > 0) {
    const double n = static_cast<double>(est.reps);
    est.estimate = static_cast<double>(est.mutant_fixed) / n;
    est.resident_estimate = static_cast<double>(est.resident_fixed) / n;
  }
  est.ci = stats::wilson_interval(est.mutant_fixed, est.reps);
  est.ci_covers_target = est.ci.contains(est.target);
  return est;
}

// ---------------------------------------------------------------------------
// First mutation time

MutationTimeReport mutation_time_test(const EcologyParams& params, const Trait& x, long K,
                                      double u_K, const RunSettings& run, double significance) {
  MutationTimeReport rep;
  rep.trait = x;
  rep.K = K;
  rep.u_K = u_K;
  rep.reps = run.reps;
  rep.beta = mutation_rate_beta(params, x);
  if (!(u_K > 0.0) || !(params.mu(x) > 0.0)) {
    rep.degenerate = true;
    return rep;
  }
  const long n0 =
      static_cast<long>(std::floor(static_cast<double>(K) * equilibrium_density(params, x)));
  if (n0 < 1) throw PreconditionError("K n-bar_x is below one individual");

  SimulationOptions opts;
  opts.event_budget = run.event_budget;
  opts.stop = [](const PopulationState&, EventKind k) { return k == EventKind::MutantBirth; };
  const double scale = static_cast<double>(K) * u_K;
  auto results = run_replicates(run.reps, run.jobs, run.seed,
                                [&](std::size_t, Rng& rng) -> std::optional<double> {
                                  auto s = PopulationState::monomorphic(params, K, x, n0);
                                  const Trajectory traj =
                                      simulate(params, K, u_K, std::move(s), kInf, opts, rng);
                                  const auto tau = first_mutation_time(traj);
                                  if (!tau) return std::nullopt;
                                  return scale * *tau;
                                });
  for (const auto& r : results) {
    if (!r.ok()) ++rep.failed;
    else if (!*r.value) ++rep.extinct_before_mutation;
    else rep.scaled_times.push_back(**r.value);
  }
  if (rep.scaled_times.size() < 2) return rep;
  const double beta = rep.beta;
  rep.ks_statistic =
      stats::ks_statistic(rep.scaled_times, [beta](double s) { return 1.0 - std::exp(-beta * s); });
  rep.p_value = stats::ks_pvalue(rep.ks_statistic, rep.scaled_times.size());
  rep.mean = stats::mean(rep.scaled_times);
  rep.standard_error = stats::standard_error(rep.scaled_times);
  rep.ks_pass = rep.p_value > significance;
  rep.mean_pass = std::abs(rep.mean - 1.0 / beta) <= 3.0 * rep.standard_error;
  return rep;
}

// ---------------------------------------------------------------------------
// Binning

TraitBinning::TraitBinning(const TraitSpace& space, double width) : space_(&space), width_(width) {
  if (!(width > 0.0)) throw PreconditionError("bin width must be positive");
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const double span = space.hi()[i] - space.lo()[i];
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / width - 1e-9)));
    per_axis_.push_back(n);
    cells_ *= n;
  }
}

std::size_t TraitBinning::cell(const Trait& x) const {
  std::size_t index = 0, stride = 1;
  for (std::size_t i = 0; i < per_axis_.size(); ++i) {
    const double offset = (x[i] - space_->lo()[i]) / width_;
    auto j = static_cast<std::size_t>(std::max(0.0, std::floor(offset)));
    j = std::min(j, per_axis_[i] - 1);
    index += j * stride;
    stride *= per_axis_[i];
  }
  return index;
}

// ---------------------------------------------------------------------------
// FDD comparison

namespace {

struct Observation {
  bool extinct = false;
  bool monomorphic = false;
  bool mass_near = false;
  std::size_t cell = 0;
};

double tv_from_labels(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                      std::size_t cells) {
  std::vector<double> p(cells, 0.0), q(cells, 0.0);
  for (auto c : a) p[c] += 1.0;
  for (auto c : b) q[c] += 1.0;
  return stats::total_variation(p, q);
}

}  // namespace

ComparisonReport compare_fdd(const ScenarioConfig& config, const RunSettings& run) {
  const EcologyParams& params = config.params;
  const Trait& x0 = config.initial_trait;
  ComparisonReport report;
  report.scenario = config.name;
  report.initial_trait = x0;
  report.bin_width = config.bin_width;
  report.reps = run.reps;
  report.seed = run.seed;
  report.observation_times = config.observation_times;
  report.monomorphic_threshold = config.monomorphic_threshold;
  report.epsilon = config.epsilon_fraction * equilibrium_density(params, x0);
  report.tss_reps = config.tss_replicates ? config.tss_replicates : 10 * run.reps;
  const auto& times = config.observation_times;
  if (times.empty()) throw PreconditionError("compare_fdd needs at least one observation time");

  const TraitBinning bins(params.space(), config.bin_width);
  const std::size_t cells = bins.cell_count() + 1;

  const auto tss = tss_marginals(params, x0, times, report.tss_reps,
                                 derive_seed(run.seed, kTssStreamSalt));
  std::vector<std::vector<std::size_t>> tss_labels(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (const auto& t : tss[i]) tss_labels[i].push_back(bins.cell(t));
  }

  std::vector<long> ladder = config.K;
  std::sort(ladder.begin(), ladder.end());
  for (long K : ladder) {
    FddLevel level;
    level.K = K;
    level.u_K = config.mutation_scaling(K);
    const double scale = static_cast<double>(K) * level.u_K;
    if (!(scale > 0.0)) throw PreconditionError("K u_K must be positive to rescale time");
    std::vector<double> raw(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) raw[i] = times[i] / scale;
    const double t_end = std::max(raw.back(), 1e-12);
    const long n0 = config.initial_count(K);

    SimulationOptions opts;
    opts.sample_times = raw;
    opts.record_support = true;
    opts.event_budget = run.event_budget;
    const double eps = report.epsilon;
    auto results = run_replicates(
        run.reps, run.jobs, derive_seed(run.seed, static_cast<std::uint64_t>(K)),
        [&](std::size_t, Rng& rng) {
          auto s = PopulationState::monomorphic(params, K, x0, n0);
          const Trajectory traj = simulate(params, K, level.u_K, std::move(s), t_end, opts, rng);
          std::vector<Observation> obs(times.size());
          for (std::size_t i = 0; i < traj.samples.size() && i < obs.size(); ++i) {
            const Sample& smp = traj.samples[i];
            Observation& o = obs[i];
            if (smp.support.empty()) {
              o.extinct = true;
              o.cell = bins.extinct_cell();
              continue;
            }
            auto dominant = std::max_element(
                smp.support.begin(), smp.support.end(),
                [](const auto& a, const auto& b) { return a.second < b.second; });
            o.cell = bins.cell(dominant->first);
            o.monomorphic = smp.support.size() == 1;
            o.mass_near =
                o.monomorphic &&
                std::abs(smp.total_mass - equilibrium_density(params, dominant->first)) < eps;
          }
          return obs;
        });

    std::vector<const std::vector<Observation>*> good;
    for (const auto& r : results) {
      if (r.ok()) good.push_back(&*r.value);
      else ++level.failed;
    }
    std::size_t pooled_mono = 0, pooled_total = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      FddTimeStats ts;
      ts.time = times[i];
      ts.raw_time = raw[i];
      ts.samples = good.size();
      std::size_t mono = 0, near = 0, extinct = 0;
      std::vector<std::size_t> labels;
      labels.reserve(good.size());
      for (const auto* obs : good) {
        const Observation& o = (*obs)[i];
        mono += o.monomorphic;
        near += o.mass_near;
        extinct += o.extinct;
        labels.push_back(o.cell);
      }
      pooled_mono += mono;
      pooled_total += good.size();
      if (!good.empty()) {
        const double n = static_cast<double>(good.size());
        ts.monomorphic_frequency = static_cast<double>(mono) / n;
        ts.mass_near_equilibrium_frequency = static_cast<double>(near) / n;
        ts.extinct_frequency = static_cast<double>(extinct) / n;
        ts.monomorphic_ci = stats::wilson_interval(mono, good.size());
        ts.mass_ci = stats::wilson_interval(near, good.size());
        ts.tv_distance = tv_from_labels(labels, tss_labels[i], cells);

        // Bootstrap over both samples for the sd of the TV estimate.
        Rng boot(derive_seed(run.seed ^ kBootstrapSalt, static_cast<std::uint64_t>(K) * 131 + i));
        std::vector<double> tvs;
        tvs.reserve(kBootstrapResamples);
        std::vector<std::size_t> a(labels.size()), b(tss_labels[i].size());
        for (std::size_t rep = 0; rep < kBootstrapResamples; ++rep) {
          for (auto& v : a) v = labels[boot.next_u64() % labels.size()];
          for (auto& v : b) v = tss_labels[i][boot.next_u64() % tss_labels[i].size()];
          tvs.push_back(tv_from_labels(a, b, cells));
        }
        ts.tv_se = stats::standard_error(tvs) * std::sqrt(static_cast<double>(tvs.size()));
      }
      level.times.push_back(ts);
    }
    level.pooled_monomorphic_frequency =
        pooled_total ? static_cast<double>(pooled_mono) / static_cast<double>(pooled_total) : 0.0;
    report.levels.push_back(std::move(level));
  }

  report.tv_nonincreasing = true;
  report.monomorphic_increasing = true;
  for (std::size_t k = 1; k < report.levels.size(); ++k) {
    const auto& prev = report.levels[k - 1];
    const auto& cur = report.levels[k];
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double slack = std::hypot(prev.times[i].tv_se, cur.times[i].tv_se);
      if (cur.times[i].tv_distance > prev.times[i].tv_distance + slack) {
        report.tv_nonincreasing = false;
      }
    }
    if (!(cur.pooled_monomorphic_frequency > prev.pooled_monomorphic_frequency)) {
      report.monomorphic_increasing = false;
    }
  }
  report.monomorphic_above_threshold = !report.levels.empty();
  if (!report.levels.empty()) {
    for (const auto& ts : report.levels.back().times) {
      if (!(ts.monomorphic_frequency > report.monomorphic_threshold)) {
        report.monomorphic_above_threshold = false;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Exit time

ExitTimeReport exit_time_scaling(double b, double d, double alpha, double eta1, double eta2,
                                 const std::vector<long>& Ks, double t_max,
                                 const RunSettings& run) {
  if (!(alpha > 0.0)) throw PreconditionError("alpha must be positive (no equilibrium otherwise)");
  if (!(b - d > 0.0)) throw PreconditionError("b - d must be positive");
  const double nbar = (b - d) / alpha;
  if (!(eta1 > 0.0 && eta1 < nbar)) {
    throw PreconditionError("eta1 must lie in (0, n-bar) so the domain excludes 0");
  }
  if (!(eta2 > 0.0)) throw PreconditionError("eta2 must be positive");
  if (!(t_max > 0.0)) throw PreconditionError("t_max must be positive");
  if (Ks.empty()) throw PreconditionError("K list must not be empty");

  const EcologyParams params(TraitSpace::interval(0.0, 1.0), ScalarFunction::constant(b),
                             ScalarFunction::constant(d), CompetitionKernel::constant(alpha),
                             ScalarFunction::constant(1.0), MutationKernel::gaussian({0.1}));
  const Trait x{0.5};
  ExitTimeReport rep;
  rep.b = b;
  rep.d = d;
  rep.alpha = alpha;
  rep.eta1 = eta1;
  rep.eta2 = eta2;
  rep.t_max = t_max;
  rep.equilibrium = nbar;
  const double lo = nbar - eta1, hi = nbar + eta2;

  for (long K : Ks) {
    ExitLevel level;
    level.K = K;
    const long n0 = std::lround(static_cast<double>(K) * nbar);
    SimulationOptions opts;
    opts.event_budget = run.event_budget;
    opts.stop = [lo, hi](const PopulationState& s, EventKind) {
      const double m = s.total_mass();
      return m < lo || m > hi;
    };
    auto results = run_replicates(
        run.reps, run.jobs, derive_seed(run.seed, static_cast<std::uint64_t>(K)),
        [&](std::size_t, Rng& rng) {
          auto s = PopulationState::monomorphic(params, K, x, n0);
          const Trajectory traj = simulate(params, K, 0.0, std::move(s), t_max, opts, rng);
          return traj.stopped ? traj.end_time : kInf;
        });
    for (const auto& r : results) {
      if (!r.ok()) {
        ++level.failed;
        continue;
      }
      level.exit_times.push_back(*r.value);
      if (std::isinf(*r.value)) ++level.censored;
    }
    level.median = stats::median(level.exit_times);
    rep.levels.push_back(std::move(level));
  }

  rep.strictly_increasing = true;
  for (std::size_t k = 1; k < rep.levels.size(); ++k) {
    const double a = rep.levels[k - 1].median, c = rep.levels[k].median;
    if (!(c > a)) rep.strictly_increasing = false;  // inf > finite holds; inf > inf does not
  }
  // Least-squares slope of log(median) on K, censored medians set to t_max.
  if (rep.levels.size() >= 2) {
    double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
    const double n = static_cast<double>(rep.levels.size());
    for (const auto& l : rep.levels) {
      const double k = static_cast<double>(l.K);
      const double y = std::log(std::min(l.median, t_max));
      sk += k;
      sy += y;
      skk += k * k;
      sky += k * y;
    }
    const double den = n * skk - sk * sk;
    rep.log_median_slope = den != 0.0 ? (n * sky - sk * sy) / den : 0.0;
  }
  return rep;
}

}  // namespace evodyn
