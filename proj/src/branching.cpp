#include "evodyn/branching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evodyn/errors.hpp"

namespace evodyn {

double extinction_probability(double b, double d) {
  if (!(b >= 0.0 && d >= 0.0)) throw PreconditionError("rates must be nonnegative");
  if (b == 0.0) {
    throw DegenerateParameterError(
        "b = 0: pure death process (extinct with probability 1 when d > 0)");
  }
  return std::min(d / b, 1.0);
}

double extinction_time_cdf(double b, double d, long n, double t) {
  if (!(b >= 0.0 && d >= 0.0)) throw PreconditionError("rates must be nonnegative");
  if (b == d) throw DegenerateParameterError("critical case b = d has no closed form here");
  if (n < 0) throw PreconditionError("n must be nonnegative");
  if (!(t >= 0.0)) throw PreconditionError("t must be nonnegative");
  if (n == 0) return 1.0;
  const double e = std::exp(-(b - d) * t);
  const double one = d * (1.0 - e) / (b - d * e);
  return std::pow(one, static_cast<double>(n));
}

BranchingPath simulate_branching(const BranchingParams& params, double t_max, long cap, Rng& rng,
                                 bool record_path) {
  if (!(params.b >= 0.0 && params.d >= 0.0)) throw PreconditionError("rates must be nonnegative");
  if (params.n0 < 0) throw PreconditionError("n0 must be nonnegative");
  if (cap <= params.n0) throw PreconditionError("cap must exceed n0");

  BranchingPath path;
  long n = params.n0;
  double t = 0.0;
  const double rate = params.b + params.d;
  const double p_birth = rate > 0.0 ? params.b / rate : 0.0;
  if (record_path) {
    path.times.push_back(0.0);
    path.counts.push_back(n);
  }
  while (true) {
    if (n == 0) {
      path.extinct = true;
      path.extinction_time = t;
      break;
    }
    if (rate == 0.0) {
      t = t_max;
      break;
    }
    const double t_next = t + rng.exponential(static_cast<double>(n) * rate);
    if (t_next > t_max) {
      t = t_max;
      break;
    }
    t = t_next;
    n += rng.uniform() < p_birth ? 1 : -1;
    if (record_path) {
      path.times.push_back(t);
      path.counts.push_back(n);
    }
    if (n >= cap) {
      path.hit_cap = true;
      break;
    }
  }
  path.final_count = n;
  path.end_time = t;
  return path;
}

HittingReport hitting_bound_check(double b, double d, long n, long k, std::size_t reps,
                                  Rng& rng) {
  if (!(b < d)) throw PreconditionError("hitting bound needs a subcritical process (b < d)");
  if (k < 1) throw PreconditionError("k must be at least 1");
  if (n < 0) throw PreconditionError("n must be nonnegative");
  HittingReport r;
  r.n = n;
  r.k = k;
  r.reps = reps;
  r.bound = 1.0 / static_cast<double>(k);
  r.sigma = reps ? std::sqrt(r.bound * (1.0 - r.bound) / static_cast<double>(reps)) : 0.0;
  if (n == 0) {
    // Already absorbed; k n = 0 is never reached from above.
    r.empirical = 0.0;
    return r;
  }
  if (k == 1) {
    // T_n = 0 <= T_0 trivially.
    r.hits = reps;
    r.empirical = reps ? 1.0 : 0.0;
    r.within_bound = true;
    return r;
  }
  const BranchingParams params{b, d, n};
  for (std::size_t i = 0; i < reps; ++i) {
    const auto path = simulate_branching(params, std::numeric_limits<double>::infinity(), k * n,
                                         rng, false);
    if (path.hit_cap) ++r.hits;
  }
  r.empirical = reps ? static_cast<double>(r.hits) / static_cast<double>(reps) : 0.0;
  r.within_bound = r.empirical <= r.bound + 3.0 * r.sigma;
  return r;
}

}  // namespace evodyn
