#ifndef EVODYN_LIMITS_HPP
#define EVODYN_LIMITS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "evodyn/model.hpp"

namespace evodyn {

/// Fixed-step path of the logistic (dimension 1) or two-type competitive
/// Lotka-Volterra (dimension 2) system on [0, T].
struct OdePath {
  std::size_t dimension = 1;
  double dt = 0.0;
  std::vector<double> times;               // times.front() == 0, times.back() == T
  std::vector<std::array<double, 2>> states;  // second entry unused in dimension 1
  std::size_t clip_count = 0;              // negative overshoots reset to 0
  std::optional<double> entry_time;        // first entry into the requested ball

  const std::array<double, 2>& terminal() const { return states.back(); }
};

constexpr double kDefaultOdeStep = 1e-3;

/// RK4 path of dn/dt = (b - d - alpha n) n. When `epsilon` is given,
/// entry_time records the first time |n - (b - d)/alpha| < epsilon.
OdePath integrate_logistic(double b, double d, double alpha_xx, double n0, double T,
                           double dt = kDefaultOdeStep,
                           std::optional<double> epsilon = std::nullopt);

/// Closed-form solution of the same logistic equation, for checks.
double logistic_closed_form(double b, double d, double alpha_xx, double n0, double t);

/// RK4 path of the dimorphic competition system
///   dn_x/dt = (b(x) - d(x) - alpha(x,x) n_x - alpha(x,y) n_y) n_x
///   dn_y/dt = (b(y) - d(y) - alpha(y,x) n_x - alpha(y,y) n_y) n_y.
OdePath integrate_dimorphic(const EcologyParams& params, const Trait& x, const Trait& y,
                            std::array<double, 2> n0, double T, double dt = kDefaultOdeStep);

enum class FlowOutcome { ConvergesToResident, ConvergesToMutant, Unresolved };

const char* to_string(FlowOutcome o);

struct FlowClassification {
  FlowOutcome outcome = FlowOutcome::Unresolved;
  std::optional<double> entry_time;  // start of the successful dwell window
  double final_time = 0.0;
};

struct FlowOptions {
  double dt = kDefaultOdeStep;
  double dwell = 10.0;
  double t_max = 1e4;
};

/// Integrates from (n-bar_x, epsilon) until the path stays `dwell` time units
/// inside the epsilon-ball around (n-bar_x, 0) or (0, n-bar_y). Requires the
/// pair not to be Degenerate.
FlowClassification classify_equilibrium_flow(const EcologyParams& params, const Trait& x,
                                             const Trait& y, double epsilon,
                                             const FlowOptions& options = {});

}  // namespace evodyn

#endif  // EVODYN_LIMITS_HPP
