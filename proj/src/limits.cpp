#include "evodyn/limits.hpp"

#include <cmath>

#include "evodyn/errors.hpp"

namespace evodyn {

namespace {

using State = std::array<double, 2>;

// Competitive LV right-hand side; a 1-D logistic system is the n_y == 0 case
// with the cross terms unused.
struct LvField {
  double rx, axx, axy;
  double ry, ayx, ayy;

  State operator()(const State& n) const {
    return {(rx - axx * n[0] - axy * n[1]) * n[0], (ry - ayx * n[0] - ayy * n[1]) * n[1]};
  }
};

State rk4(const LvField& f, const State& n, double h) {
  const State k1 = f(n);
  const State k2 = f({n[0] + 0.5 * h * k1[0], n[1] + 0.5 * h * k1[1]});
  const State k3 = f({n[0] + 0.5 * h * k2[0], n[1] + 0.5 * h * k2[1]});
  const State k4 = f({n[0] + h * k3[0], n[1] + h * k3[1]});
  return {n[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          n[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

void clip(State& n, std::size_t& clips) {
  for (double& v : n) {
    if (!std::isfinite(v)) throw NonFiniteStateError("ODE state became non-finite");
    if (v < 0.0) {
      v = 0.0;
      ++clips;
    }
  }
}

void check_step(double T, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("dt must be positive");
  if (!(T >= dt)) throw PreconditionError("T must be at least dt");
}

// Uniform grid of step dt ending exactly at T (last step shortened if T is
// not a multiple of dt up to rounding).
OdePath run(const LvField& f, State n, double T, double dt, std::size_t dim,
            const State* target, std::optional<double> epsilon) {
  OdePath path;
  path.dimension = dim;
  path.dt = dt;
  auto steps = static_cast<std::size_t>(std::llround(T / dt));
  if (std::abs(static_cast<double>(steps) * dt - T) > 1e-9 * T) {
    steps = static_cast<std::size_t>(std::ceil(T / dt));
  }
  path.times.reserve(steps + 1);
  path.states.reserve(steps + 1);
  auto note_entry = [&](double t, const State& s) {
    if (!target || !epsilon || path.entry_time) return;
    const double dx = s[0] - (*target)[0], dy = s[1] - (*target)[1];
    if (std::sqrt(dx * dx + dy * dy) < *epsilon) path.entry_time = t;
  };
  path.times.push_back(0.0);
  path.states.push_back(n);
  note_entry(0.0, n);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = k == steps ? T : static_cast<double>(k) * dt;
    n = rk4(f, n, t - path.times.back());
    clip(n, path.clip_count);
    path.times.push_back(t);
    path.states.push_back(n);
    note_entry(t, n);
  }
  return path;
}

}  // namespace

OdePath integrate_logistic(double b, double d, double alpha_xx, double n0, double T, double dt,
                           std::optional<double> epsilon) {
  if (!(n0 >= 0.0)) throw PreconditionError("initial density must be nonnegative");
  check_step(T, dt);
  const LvField f{b - d, alpha_xx, 0.0, 0.0, 0.0, 0.0};
  std::optional<State> target;
  if (epsilon) {
    if (alpha_xx == 0.0) throw DegenerateParameterError("alpha(x, x) = 0: no equilibrium");
    target = State{(b - d) / alpha_xx, 0.0};
  }
  return run(f, {n0, 0.0}, T, dt, 1, target ? &*target : nullptr, epsilon);
}

double logistic_closed_form(double b, double d, double alpha_xx, double n0, double t) {
  const double r = b - d;
  if (n0 == 0.0) return 0.0;
  if (r == 0.0) return n0 / (1.0 + alpha_xx * n0 * t);
  const double e = std::exp(r * t);
  return r * n0 * e / (r + alpha_xx * n0 * (e - 1.0));
}

OdePath integrate_dimorphic(const EcologyParams& params, const Trait& x, const Trait& y,
                            std::array<double, 2> n0, double T, double dt) {
  if (!(n0[0] >= 0.0 && n0[1] >= 0.0)) {
    throw PreconditionError("initial densities must be nonnegative");
  }
  check_step(T, dt);
  params.space().require(x);
  params.space().require(y);
  const LvField f{params.b(x) - params.d(x), params.alpha(x, x), params.alpha(x, y),
                  params.b(y) - params.d(y), params.alpha(y, x), params.alpha(y, y)};
  return run(f, n0, T, dt, 2, nullptr, std::nullopt);
}

const char* to_string(FlowOutcome o) {
  switch (o) {
    case FlowOutcome::ConvergesToResident:
      return "ConvergesToResident";
    case FlowOutcome::ConvergesToMutant:
      return "ConvergesToMutant";
    case FlowOutcome::Unresolved:
      return "Unresolved";
  }
  return "?";
}

FlowClassification classify_equilibrium_flow(const EcologyParams& params, const Trait& x,
                                             const Trait& y, double epsilon,
                                             const FlowOptions& options) {
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  if (classify_pair(params, x, y).kind == InvasionClass::Degenerate) {
    throw PreconditionError("pair " + to_string(x) + ", " + to_string(y) +
                            " is degenerate; the flow has no isolated attractor");
  }
  check_step(options.t_max, options.dt);
  const double nx = equilibrium_density(params, x);
  const double ny = equilibrium_density(params, y);
  const LvField f{params.b(x) - params.d(x), params.alpha(x, x), params.alpha(x, y),
                  params.b(y) - params.d(y), params.alpha(y, x), params.alpha(y, y)};
  const State resident{nx, 0.0}, mutant{0.0, ny};
  auto inside = [&](const State& n, const State& c) {
    const double dx = n[0] - c[0], dy = n[1] - c[1];
    return std::sqrt(dx * dx + dy * dy) < epsilon;
  };

  State n{nx, epsilon};
  std::size_t clips = 0;
  FlowClassification out;
  std::optional<double> since;  // entry time of the current visit
  FlowOutcome current = FlowOutcome::Unresolved;
  const auto steps = static_cast<std::size_t>(std::ceil(options.t_max / options.dt));
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * options.dt;
    n = rk4(f, n, options.dt);
    clip(n, clips);
    FlowOutcome here = FlowOutcome::Unresolved;
    if (inside(n, resident)) here = FlowOutcome::ConvergesToResident;
    else if (inside(n, mutant)) here = FlowOutcome::ConvergesToMutant;
    if (here != current) {
      current = here;
      since = here == FlowOutcome::Unresolved ? std::nullopt : std::optional<double>(t);
    }
    if (since && t - *since >= options.dwell) {
      out.outcome = current;
      out.entry_time = since;
      out.final_time = t;
      return out;
    }
  }
  out.final_time = options.t_max;
  return out;
}

}  // namespace evodyn
