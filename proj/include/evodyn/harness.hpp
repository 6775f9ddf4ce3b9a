#ifndef EVODYN_HARNESS_HPP
#define EVODYN_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "evodyn/config.hpp"
#include "evodyn/errors.hpp"
#include "evodyn/model.hpp"
#include "evodyn/rng.hpp"
#include "evodyn/stats.hpp"

namespace evodyn {

// ---------------------------------------------------------------------------
// Replicate orchestration

template <class T>
struct ReplicateResult {
  std::size_t index = 0;
  std::optional<T> value;
  bool budget_exceeded = false;
  std::string error;  // empty on success

  bool ok() const { return value.has_value(); }
};

/// Runs job(index, rng) for index in [0, count) on up to `parallelism`
/// threads. Replicate i always gets Rng(derive_seed(master_seed, i)), and
/// results are stored by index, so the output does not depend on the thread
/// count. A throwing replicate is recorded and does not stop the others.
template <class Job>
auto run_replicates(std::size_t count, unsigned parallelism, std::uint64_t master_seed, Job&& job)
    -> std::vector<ReplicateResult<std::invoke_result_t<Job&, std::size_t, Rng&>>> {
  using T = std::invoke_result_t<Job&, std::size_t, Rng&>;
  if (parallelism < 1) throw PreconditionError("parallelism must be at least 1");
  std::vector<ReplicateResult<T>> results(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      auto& r = results[i];
      r.index = i;
      Rng rng(derive_seed(master_seed, i));
      try {
        r.value.emplace(job(i, rng));
      } catch (const EventBudgetExceeded& e) {
        r.budget_exceeded = true;
        r.error = e.what();
      } catch (const std::exception& e) {
        r.error = e.what();
        if (r.error.empty()) r.error = "unknown error";
      }
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(parallelism, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

struct RunSettings {
  std::size_t reps = 100;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::uint64_t event_budget = 100'000'000;
};

// ---------------------------------------------------------------------------
// Invasion / fixation

struct InvasionEstimate {
  Trait resident, mutant;
  long K = 0;
  long resident_count = 0;
  std::size_t reps = 0;
  std::size_t mutant_fixed = 0;
  std::size_t resident_fixed = 0;
  std::size_t extinct = 0;
  std::size_t budget_exhausted = 0;
  std::size_t failed = 0;
  double estimate = 0.0;           // P(V_0 = y)
  double resident_estimate = 0.0;  // P(V_0 = x)
  stats::Interval ci;              // Wilson 95% for the mutant
  double target = 0.0;             // [f(y, x)]_+ / b(y)
  bool ci_covers_target = false;
  InvasionClass classification = InvasionClass::Degenerate;
  // Per replicate: 'x' resident fixed, 'y' mutant fixed, 'e' extinct,
  // 'b' event budget exhausted, 'f' other failure.
  std::string outcomes;
};

/// Starts from floor(K n-bar_x) residents plus one mutant, without
/// mutation, and runs each replicate until one trait is left.
InvasionEstimate estimate_invasion_probability(const EcologyParams& params, const Trait& x,
                                               const Trait& y, long K, const RunSettings& run);

// ---------------------------------------------------------------------------
// First mutation time

struct MutationTimeReport {
  Trait trait;
  long K = 0;
  double u_K = 0.0;
  double beta = 0.0;
  std::size_t reps = 0;
  std::size_t extinct_before_mutation = 0;
  std::size_t failed = 0;
  bool degenerate = false;  // u_K = 0 or mu = 0: no mutation can occur
  std::vector<double> scaled_times;  // K u_K tau_1 per replicate
  double ks_statistic = 0.0;
  double p_value = 0.0;
  double mean = 0.0;
  double standard_error = 0.0;
  bool ks_pass = false;
  bool mean_pass = false;
  bool passed() const { return !degenerate && ks_pass && mean_pass; }
};

MutationTimeReport mutation_time_test(const EcologyParams& params, const Trait& x, long K,
                                      double u_K, const RunSettings& run,
                                      double significance = 0.01);

// ---------------------------------------------------------------------------
// Finite-dimensional distributions

struct FddTimeStats {
  double time = 0.0;       // TSS time scale
  double raw_time = 0.0;   // t / (K u_K)
  std::size_t samples = 0;
  double monomorphic_frequency = 0.0;
  double mass_near_equilibrium_frequency = 0.0;
  double extinct_frequency = 0.0;
  double tv_distance = 0.0;
  double tv_se = 0.0;  // bootstrap standard error
  stats::Interval monomorphic_ci;
  stats::Interval mass_ci;
};

struct FddLevel {
  long K = 0;
  double u_K = 0.0;
  std::size_t failed = 0;
  std::vector<FddTimeStats> times;
  double pooled_monomorphic_frequency = 0.0;
};

struct ComparisonReport {
  std::string scenario;
  Trait initial_trait;
  double epsilon = 0.0;
  double bin_width = 0.0;
  std::size_t reps = 0;
  std::size_t tss_reps = 0;
  std::uint64_t seed = 0;
  std::vector<double> observation_times;
  std::vector<FddLevel> levels;
  bool tv_nonincreasing = false;
  bool monomorphic_increasing = false;
  double monomorphic_threshold = 0.9;
  bool monomorphic_above_threshold = false;
  bool passed() const {
    return tv_nonincreasing && monomorphic_increasing && monomorphic_above_threshold;
  }
};

/// Compares the microscopic process observed at t_i / (K u_K) with the TSS
/// marginals at t_i, for each K of the config.
ComparisonReport compare_fdd(const ScenarioConfig& config, const RunSettings& run);

/// Histogram cell of a trait on a uniform partition of the box; one extra
/// cell (index == cell_count) stands for "extinct".
class TraitBinning {
 public:
  TraitBinning(const TraitSpace& space, double width);
  std::size_t cell_count() const { return cells_; }
  std::size_t cell(const Trait& x) const;
  std::size_t extinct_cell() const { return cells_; }

 private:
  const TraitSpace* space_;
  double width_;
  std::vector<std::size_t> per_axis_;
  std::size_t cells_ = 1;
};

// ---------------------------------------------------------------------------
// Exit time from a neighbourhood of equilibrium

struct ExitLevel {
  long K = 0;
  std::vector<double> exit_times;  // +inf for censored replicates
  std::size_t censored = 0;
  std::size_t failed = 0;
  double median = 0.0;  // +inf when more than half are censored
};

struct ExitTimeReport {
  double b = 0.0, d = 0.0, alpha = 0.0;
  double eta1 = 0.0, eta2 = 0.0;
  double t_max = 0.0;
  double equilibrium = 0.0;
  std::vector<ExitLevel> levels;
  bool strictly_increasing = false;
  double log_median_slope = 0.0;  // least squares of log median on K, censored at t_max
  bool passed() const { return strictly_increasing && log_median_slope > 0.0; }
};

/// Median exit time of the mutation-free monomorphic process, started at
/// round(K n-bar), from [n-bar - eta1, n-bar + eta2].
ExitTimeReport exit_time_scaling(double b, double d, double alpha, double eta1, double eta2,
                                 const std::vector<long>& Ks, double t_max,
                                 const RunSettings& run);

}  // namespace evodyn

#endif  // EVODYN_HARNESS_HPP
