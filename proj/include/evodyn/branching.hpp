#ifndef EVODYN_BRANCHING_HPP
#define EVODYN_BRANCHING_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "evodyn/rng.hpp"

namespace evodyn {

enum class Criticality { Subcritical, Critical, Supercritical };

/// Linear birth-death process: each individual gives birth at rate b and dies
/// at rate d, independently of the others.
struct BranchingParams {
  double b = 0.0;
  double d = 0.0;
  long n0 = 1;

  Criticality criticality() const {
    return b < d ? Criticality::Subcritical
                 : (b > d ? Criticality::Supercritical : Criticality::Critical);
  }
};

/// Probability of eventual extinction from one individual, min(d/b, 1).
/// b = 0 is rejected: the process is then a pure death process, extinct
/// with probability 1 whenever d > 0.
double extinction_probability(double b, double d);

/// P(T_0 <= t) from n individuals for b != d:
///   ( d (1 - e^{-(b-d)t}) / (b - d e^{-(b-d)t}) )^n
double extinction_time_cdf(double b, double d, long n, double t);

struct BranchingPath {
  std::vector<double> times;  // event times (with the initial 0), if recorded
  std::vector<long> counts;
  long final_count = 0;
  double end_time = 0.0;
  bool extinct = false;
  bool hit_cap = false;
  std::optional<double> extinction_time;
};

/// Exact simulation until extinction, t_max, or the population reaching
/// `cap` (requires cap > n0).
BranchingPath simulate_branching(const BranchingParams& params, double t_max, long cap, Rng& rng,
                                 bool record_path = true);

struct HittingReport {
  long n = 0;
  long k = 0;
  std::size_t reps = 0;
  std::size_t hits = 0;
  double empirical = 0.0;
  double bound = 0.0;  // 1/k
  double sigma = 0.0;  // binomial sd of the frequency at p = 1/k
  bool within_bound = true;  // empirical <= bound + 3 sigma
};

/// Frequency with which a subcritical process started at n reaches k n before
/// dying out, against the martingale bound 1/k.
HittingReport hitting_bound_check(double b, double d, long n, long k, std::size_t reps, Rng& rng);

}  // namespace evodyn

#endif  // EVODYN_BRANCHING_HPP
