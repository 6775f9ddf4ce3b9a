#ifndef EVODYN_MICRO_HPP
#define EVODYN_MICRO_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "evodyn/model.hpp"
#include "evodyn/rng.hpp"

namespace evodyn {

enum class EventKind { ClonalBirth, MutantBirth, Death };

const char* to_string(EventKind k);

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::ClonalBirth;
  Trait trait;                  // newborn (clonal or mutant) or deceased individual
  std::optional<Trait> parent;  // set for MutantBirth only
};

/// The rescaled point measure nu^K as groups of identical traits.
///
/// Each group caches b, d, mu and its per-individual death rate
///   d(x) + (1/K) sum_y alpha(x, y) count(y),
/// self-competition included. Death rates are maintained incrementally in
/// O(#groups) per event and recomputed from scratch every
/// `kRefreshInterval` events. Holds a pointer to the parameters, which must
/// outlive the state.
class PopulationState {
 public:
  static constexpr std::uint64_t kRefreshInterval = 100'000;

  PopulationState(const EcologyParams& params, long K);

  static PopulationState monomorphic(const EcologyParams& params, long K, const Trait& x,
                                     long count);

  /// Adds `count` individuals of trait x (merging with an identical group).
  void add(const Trait& x, long count);

  long K() const { return K_; }
  long total_count() const { return total_count_; }
  double total_mass() const { return static_cast<double>(total_count_) / static_cast<double>(K_); }
  std::size_t support_size() const { return groups_.size(); }
  bool extinct() const { return total_count_ == 0; }
  const EcologyParams& params() const { return *params_; }

  /// Distinct traits with positive count and their masses count/K, sorted.
  std::vector<std::pair<Trait, double>> support() const;
  long count_of(const Trait& x) const;
  double mass_of(const Trait& x) const;

  double total_birth_rate() const;
  double total_death_rate() const;
  double total_rate() const { return total_birth_rate() + total_death_rate(); }
  /// Same totals recomputed from the parameters, ignoring every cache.
  double recomputed_total_death_rate() const;
  /// Per-individual death rate of the group holding x (cached).
  double death_rate_of(const Trait& x) const;

  /// Rebuilds every cached death rate from scratch.
  void refresh_rates();

  /// Draws the waiting time to the next event, Exp(total rate), and caches
  /// the totals for the following fire(). Requires N >= 1.
  double next_wait(Rng& rng);
  /// Picks and applies one event proportionally to the rates cached by
  /// next_wait(). Fills `record` (traits only) when non-null.
  EventKind fire(double u_K, Rng& rng, Event* record);

 private:
  struct Group {
    Trait trait;
    long count = 0;
    double b = 0.0, d = 0.0, mu = 0.0;
    double death_rate = 0.0;
  };

  std::size_t find(const Trait& x) const;  // groups_.size() when absent
  std::size_t insert_group(const Trait& x);
  void change_count(std::size_t g, long delta);
  void remove_group(std::size_t g);

  const EcologyParams* params_;
  long K_;
  long total_count_ = 0;
  std::vector<Group> groups_;
  std::vector<std::vector<double>> alpha_;  // alpha_[i][j] = alpha(x_i, x_j)
  std::uint64_t since_refresh_ = 0;
  double cached_birth_ = 0.0;
  double cached_death_ = 0.0;
};

/// One exact SSA step. Throws ExtinctPopulationError if N = 0.
std::pair<Event, double> step(PopulationState& state, double u_K, Rng& rng);

struct Sample {
  double time = 0.0;
  double total_mass = 0.0;
  std::size_t support_size = 0;
  std::vector<double> tracked_mass;                // aligned with options.tracked_traits
  std::vector<std::pair<Trait, double>> support;   // filled when record_support
};

using StopRule = std::function<bool(const PopulationState&, EventKind)>;

struct SimulationOptions {
  std::vector<double> sample_times;  // strictly increasing; those beyond t_end are dropped
  std::vector<Trait> tracked_traits;
  bool record_support = false;
  bool record_events = false;
  std::uint64_t event_budget = 100'000'000;
  StopRule stop;  // checked after each event; true ends the run
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<Event> events;  // only with record_events
  std::optional<PopulationState> final_state;
  double end_time = 0.0;
  bool extinct = false;
  bool stopped = false;  // ended by the stop rule
  std::uint64_t event_count = 0;
  std::uint64_t mutation_count = 0;
  std::optional<double> first_mutation;
};

/// Runs the individual-based process from `init` until t_end, extinction or
/// the stop rule. Samples are taken at the exact requested times by holding
/// the state between events. Throws EventBudgetExceeded past the budget.
Trajectory simulate(const EcologyParams& params, long K, double u_K, PopulationState init,
                    double t_end, const SimulationOptions& options, Rng& rng);

/// Time of the first mutant birth, if any.
std::optional<double> first_mutation_time(const Trajectory& trajectory);

/// Default rare-mutation scaling u_K = 1 / (K (log K)^2); needs K >= 2.
double default_mutation_scaling(long K);

}  // namespace evodyn

#endif  // EVODYN_MICRO_HPP
