#include "evodyn/tss.hpp"

#include <algorithm>

#include "evodyn/errors.hpp"

namespace evodyn {

JumpDraw sample_jump_kernel(const EcologyParams& params, const Trait& x, Rng& rng) {
  params.space().require(x);
  JumpDraw draw;
  draw.proposal = params.mutation().sample_mutant(x, params.space(), rng);
  const double f = invasion_fitness(params, draw.proposal, x);
  const double by = params.b(draw.proposal);
  const double p = f > 0.0 ? f / by : 0.0;
  if (p > 1.0) {
    throw PreconditionError("[f(y, x)]_+ / b(y) exceeds 1 at y = " + to_string(draw.proposal) +
                            "; parameters violate the model assumptions");
  }
  draw.acceptance_probability = p;
  draw.accepted = p > 0.0 && rng.uniform() < p;
  return draw;
}

const Trait& TssPath::at(double t) const {
  // First jump strictly after t.
  auto it = std::upper_bound(jumps.begin(), jumps.end(), t,
                             [](double v, const auto& j) { return v < j.first; });
  return it == jumps.begin() ? initial : std::prev(it)->second;
}

TssPath simulate_tss(const EcologyParams& params, const Trait& x0, double t_end, Rng& rng,
                     bool keep_proposals) {
  params.space().require(x0);
  if (!(t_end > 0.0)) throw PreconditionError("t_end must be positive");
  TssPath path;
  path.initial = x0;
  path.t_end = t_end;
  Trait current = x0;
  double beta = mutation_rate_beta(params, current);
  double t = 0.0;
  while (true) {
    t += rng.exponential(beta);
    if (t > t_end) break;
    JumpDraw draw = sample_jump_kernel(params, current, rng);
    if (keep_proposals) path.proposals.push_back({t, draw.proposal, draw.accepted});
    if (draw.accepted) {
      current = draw.proposal;
      beta = mutation_rate_beta(params, current);
      path.jumps.emplace_back(t, current);
    }
  }
  return path;
}

std::vector<std::vector<Trait>> tss_marginals(const EcologyParams& params, const Trait& x0,
                                              std::span<const double> times, std::size_t reps,
                                              std::uint64_t seed) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i && times[i] < times[i - 1])) {
      throw PreconditionError("marginal times must be nonnegative and sorted");
    }
  }
  std::vector<std::vector<Trait>> out(times.size());
  for (auto& v : out) v.reserve(reps);
  const double horizon = times.empty() ? 0.0 : times.back();
  for (std::size_t r = 0; r < reps; ++r) {
    if (horizon <= 0.0) {
      for (auto& v : out) v.push_back(x0);
      continue;
    }
    Rng rng(derive_seed(seed, r));
    const TssPath path = simulate_tss(params, x0, horizon, rng, false);
    for (std::size_t i = 0; i < times.size(); ++i) out[i].push_back(path.at(times[i]));
  }
  return out;
}

std::vector<Trait> tss_marginal(const EcologyParams& params, const Trait& x0, double t,
                                std::size_t reps, std::uint64_t seed) {
  const double times[] = {t};
  return std::move(tss_marginals(params, x0, times, reps, seed).front());
}

}  // namespace evodyn
