#include "evodyn/micro.hpp"

#include <algorithm>
#include <cmath>

#include "evodyn/errors.hpp"

namespace evodyn {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::ClonalBirth:
      return "clonal_birth";
    case EventKind::MutantBirth:
      return "mutant_birth";
    case EventKind::Death:
      return "death";
  }
  return "?";
}

PopulationState::PopulationState(const EcologyParams& params, long K) : params_(&params), K_(K) {
  if (K < 1) throw PreconditionError("K must be at least 1");
}

PopulationState PopulationState::monomorphic(const EcologyParams& params, long K, const Trait& x,
                                             long count) {
  PopulationState s(params, K);
  s.add(x, count);
  return s;
}

void PopulationState::add(const Trait& x, long count) {
  if (count < 0) throw PreconditionError("cannot add a negative number of individuals");
  if (count == 0) return;
  params_->space().require(x);
  std::size_t g = find(x);
  if (g == groups_.size()) g = insert_group(x);
  change_count(g, count);
}

std::size_t PopulationState::find(const Trait& x) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].trait == x) return i;
  }
  return groups_.size();
}

std::size_t PopulationState::insert_group(const Trait& x) {
  Group g;
  g.trait = x;
  g.b = params_->b(x);
  g.d = params_->d(x);
  g.mu = params_->mu(x);
  const double invK = 1.0 / static_cast<double>(K_);
  const std::size_t n = groups_.size();
  std::vector<double> row(n + 1);
  double pressure = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    row[j] = params_->alpha(x, groups_[j].trait);
    pressure += row[j] * static_cast<double>(groups_[j].count);
    alpha_[j].push_back(params_->alpha(groups_[j].trait, x));
  }
  row[n] = params_->alpha(x, x);
  alpha_.push_back(std::move(row));
  g.death_rate = g.d + pressure * invK;
  groups_.push_back(std::move(g));
  return n;
}

void PopulationState::change_count(std::size_t g, long delta) {
  groups_[g].count += delta;
  total_count_ += delta;
  const double step = static_cast<double>(delta) / static_cast<double>(K_);
  for (std::size_t i = 0; i < groups_.size(); ++i) groups_[i].death_rate += step * alpha_[i][g];
}

void PopulationState::remove_group(std::size_t g) {
  const std::size_t last = groups_.size() - 1;
  if (g != last) {
    std::swap(groups_[g], groups_[last]);
    std::swap(alpha_[g], alpha_[last]);
    for (auto& row : alpha_) std::swap(row[g], row[last]);
  }
  groups_.pop_back();
  alpha_.pop_back();
  for (auto& row : alpha_) row.pop_back();
}

void PopulationState::refresh_rates() {
  const double invK = 1.0 / static_cast<double>(K_);
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    double pressure = 0.0;
    for (std::size_t j = 0; j < groups_.size(); ++j) {
      pressure += alpha_[i][j] * static_cast<double>(groups_[j].count);
    }
    groups_[i].death_rate = groups_[i].d + pressure * invK;
  }
  since_refresh_ = 0;
}

std::vector<std::pair<Trait, double>> PopulationState::support() const {
  std::vector<std::pair<Trait, double>> out;
  out.reserve(groups_.size());
  for (const auto& g : groups_) {
    out.emplace_back(g.trait, static_cast<double>(g.count) / static_cast<double>(K_));
  }
  std::sort(out.begin(), out.end());
  return out;
}

long PopulationState::count_of(const Trait& x) const {
  const std::size_t g = find(x);
  return g == groups_.size() ? 0 : groups_[g].count;
}

double PopulationState::mass_of(const Trait& x) const {
  return static_cast<double>(count_of(x)) / static_cast<double>(K_);
}

double PopulationState::total_birth_rate() const {
  double s = 0.0;
  for (const auto& g : groups_) s += static_cast<double>(g.count) * g.b;
  return s;
}

double PopulationState::total_death_rate() const {
  double s = 0.0;
  for (const auto& g : groups_) s += static_cast<double>(g.count) * g.death_rate;
  return s;
}

double PopulationState::recomputed_total_death_rate() const {
  const double invK = 1.0 / static_cast<double>(K_);
  double s = 0.0;
  for (const auto& gi : groups_) {
    double pressure = 0.0;
    for (const auto& gj : groups_) {
      pressure += params_->alpha(gi.trait, gj.trait) * static_cast<double>(gj.count);
    }
    s += static_cast<double>(gi.count) * (params_->d(gi.trait) + pressure * invK);
  }
  return s;
}

double PopulationState::death_rate_of(const Trait& x) const {
  const std::size_t g = find(x);
  if (g == groups_.size()) throw PreconditionError("trait " + to_string(x) + " is not present");
  return groups_[g].death_rate;
}

double PopulationState::next_wait(Rng& rng) {
  if (total_count_ == 0) throw ExtinctPopulationError("no individual left to act");
  cached_birth_ = total_birth_rate();
  cached_death_ = total_death_rate();
  return rng.exponential(cached_birth_ + cached_death_);
}

EventKind PopulationState::fire(double u_K, Rng& rng, Event* record) {
  const double u = rng.uniform() * (cached_birth_ + cached_death_);
  EventKind kind;
  if (u < cached_birth_) {
    std::size_t i = 0;
    double acc = 0.0, w = 0.0;
    for (; i < groups_.size(); ++i) {
      w = static_cast<double>(groups_[i].count) * groups_[i].b;
      if (u < acc + w) break;
      acc += w;
    }
    if (i == groups_.size()) {  // rounding at the upper edge
      i = groups_.size() - 1;
      while (groups_[i].b == 0.0) --i;
      w = static_cast<double>(groups_[i].count) * groups_[i].b;
      acc = u - w;
    }
    // Position within the chosen birth slot is again uniform; reuse it for
    // the mutation coin.
    const double residual = (u - acc) / w;
    if (u_K > 0.0 && residual < u_K * groups_[i].mu) {
      Trait mutant = params_->mutation().sample_mutant(groups_[i].trait, params_->space(), rng);
      if (record) {
        record->kind = EventKind::MutantBirth;
        record->parent = groups_[i].trait;
        record->trait = mutant;
      }
      std::size_t g = find(mutant);
      if (g == groups_.size()) g = insert_group(mutant);
      change_count(g, +1);
      kind = EventKind::MutantBirth;
    } else {
      if (record) {
        record->kind = EventKind::ClonalBirth;
        record->trait = groups_[i].trait;
        record->parent.reset();
      }
      change_count(i, +1);
      kind = EventKind::ClonalBirth;
    }
  } else {
    const double v = u - cached_birth_;
    std::size_t i = 0;
    double acc = 0.0;
    for (; i + 1 < groups_.size(); ++i) {
      acc += static_cast<double>(groups_[i].count) * groups_[i].death_rate;
      if (v < acc) break;
    }
    if (record) {
      record->kind = EventKind::Death;
      record->trait = groups_[i].trait;
      record->parent.reset();
    }
    change_count(i, -1);
    if (groups_[i].count == 0) remove_group(i);
    kind = EventKind::Death;
  }
  if (++since_refresh_ >= kRefreshInterval) refresh_rates();
  return kind;
}

std::pair<Event, double> step(PopulationState& state, double u_K, Rng& rng) {
  const double dt = state.next_wait(rng);
  Event e;
  state.fire(u_K, rng, &e);
  e.time = dt;
  return {std::move(e), dt};
}

namespace {

Sample take_sample(const PopulationState& s, double t, const SimulationOptions& opt) {
  Sample out;
  out.time = t;
  out.total_mass = s.total_mass();
  out.support_size = s.support_size();
  out.tracked_mass.reserve(opt.tracked_traits.size());
  for (const auto& x : opt.tracked_traits) out.tracked_mass.push_back(s.mass_of(x));
  if (opt.record_support) out.support = s.support();
  return out;
}

}  // namespace

Trajectory simulate(const EcologyParams& params, long K, double u_K, PopulationState init,
                    double t_end, const SimulationOptions& options, Rng& rng) {
  if (K < 1) throw PreconditionError("K must be at least 1");
  if (!(u_K >= 0.0 && u_K <= 1.0)) throw PreconditionError("u_K must lie in [0, 1]");
  if (!(t_end > 0.0)) throw PreconditionError("t_end must be positive");
  if (&init.params() != &params || init.K() != K) {
    throw PreconditionError("initial state was built for different parameters or K");
  }
  for (std::size_t i = 1; i < options.sample_times.size(); ++i) {
    if (!(options.sample_times[i] > options.sample_times[i - 1])) {
      throw PreconditionError("sample times must be strictly increasing");
    }
  }

  Trajectory traj;
  PopulationState& state = traj.final_state.emplace(std::move(init));
  const auto& times = options.sample_times;
  std::size_t next_sample = 0;
  auto sample_before = [&](double limit, bool inclusive) {
    while (next_sample < times.size() &&
           (times[next_sample] < limit || (inclusive && times[next_sample] <= limit))) {
      if (times[next_sample] >= 0.0) {
        traj.samples.push_back(take_sample(state, times[next_sample], options));
      }
      ++next_sample;
    }
  };

  double t = 0.0;
  Event record;
  Event* rec = options.record_events ? &record : nullptr;
  while (true) {
    if (state.extinct()) {
      sample_before(t_end, true);
      traj.extinct = true;
      traj.end_time = t;
      break;
    }
    if (traj.event_count >= options.event_budget) {
      throw EventBudgetExceeded("event budget of " + std::to_string(options.event_budget) +
                                " exhausted at t = " + std::to_string(t));
    }
    const double t_next = t + state.next_wait(rng);
    if (t_next > t_end) {
      sample_before(t_end, true);
      traj.end_time = t_end;
      break;
    }
    sample_before(t_next, false);
    const EventKind kind = state.fire(u_K, rng, rec);
    t = t_next;
    ++traj.event_count;
    if (kind == EventKind::MutantBirth) {
      ++traj.mutation_count;
      if (!traj.first_mutation) traj.first_mutation = t;
    }
    if (rec) {
      record.time = t;
      traj.events.push_back(record);
    }
    if (options.stop && options.stop(state, kind)) {
      traj.stopped = true;
      traj.end_time = t;
      break;
    }
  }
  return traj;
}

std::optional<double> first_mutation_time(const Trajectory& trajectory) {
  if (!trajectory.events.empty()) {
    for (const auto& e : trajectory.events) {
      if (e.kind == EventKind::MutantBirth) return e.time;
    }
    return std::nullopt;
  }
  return trajectory.first_mutation;
}

double default_mutation_scaling(long K) {
  if (K < 2) throw PreconditionError("the default u_K rule needs K >= 2");
  const double lk = std::log(static_cast<double>(K));
  return 1.0 / (static_cast<double>(K) * lk * lk);
}

}  // namespace evodyn
