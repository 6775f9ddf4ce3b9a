#ifndef EVODYN_TSS_HPP
#define EVODYN_TSS_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "evodyn/model.hpp"
#include "evodyn/rng.hpp"

namespace evodyn {

/// One draw from the jump kernel kappa(x, dh): a mutant x + h ~ m(x, .) is
/// kept with probability [f(x+h, x)]_+ / b(x+h), otherwise the chain stays
/// at x (the atom at h = 0).
struct JumpDraw {
  Trait proposal;
  double acceptance_probability = 0.0;
  bool accepted = false;
  const Trait& result(const Trait& from) const { return accepted ? proposal : from; }
};

JumpDraw sample_jump_kernel(const EcologyParams& params, const Trait& x, Rng& rng);

struct TssProposal {
  double time = 0.0;
  Trait proposal;
  bool accepted = false;
};

/// Piecewise-constant trait path of the substitution process on [0, t_end].
struct TssPath {
  Trait initial;
  double t_end = 0.0;
  std::vector<std::pair<double, Trait>> jumps;  // effective jumps only
  std::vector<TssProposal> proposals;           // every clock ring S_n, if kept

  /// Trait held at time t (right-continuous).
  const Trait& at(double t) const;
  const Trait& terminal() const { return jumps.empty() ? initial : jumps.back().second; }
};

/// Simulates X_t = Z(N(int_0^t beta(X_s) ds)): exponential clocks of rate
/// beta(current trait), each ring drawing from the jump kernel.
TssPath simulate_tss(const EcologyParams& params, const Trait& x0, double t_end, Rng& rng,
                     bool keep_proposals = true);

/// Monte Carlo marginals of X at each of `times` (sorted, >= 0) over `reps`
/// independent paths; result[i][r] is replicate r at times[i]. Replicate r
/// uses the stream derive_seed(seed, r).
std::vector<std::vector<Trait>> tss_marginals(const EcologyParams& params, const Trait& x0,
                                              std::span<const double> times, std::size_t reps,
                                              std::uint64_t seed);

/// Single-time convenience wrapper.
std::vector<Trait> tss_marginal(const EcologyParams& params, const Trait& x0, double t,
                                std::size_t reps, std::uint64_t seed);

}  // namespace evodyn

#endif  // EVODYN_TSS_HPP
