#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "evodyn/branching.hpp"
#include "evodyn/config.hpp"
#include "evodyn/harness.hpp"
#include "evodyn/io.hpp"
#include "evodyn/limits.hpp"
#include "evodyn/micro.hpp"
#include "evodyn/model.hpp"
#include "evodyn/tss.hpp"

namespace py = pybind11;
using namespace evodyn;
using nlohmann::json;

using Coords = std::vector<double>;

namespace {

Trait T(const Coords& c) { return Trait(c); }
Coords C(const Trait& x) { return {x.coords().begin(), x.coords().end()}; }

EcologyParams params_from_string(const std::string& s) { return params_from_json(json::parse(s)); }

RunSettings settings(std::size_t reps, std::uint64_t seed, unsigned jobs) {
  RunSettings r;
  r.reps = reps;
  r.seed = seed;
  r.jobs = jobs;
  return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core of evodyn; use the wrappers in the evodyn package.";

  py::register_exception<Error>(m, "EvodynError", PyExc_RuntimeError);

  py::class_<EcologyParams>(m, "Params")
      .def(py::init(&params_from_string), py::arg("json"))
      .def("b", [](const EcologyParams& p, const Coords& x) { return p.b(T(x)); })
      .def("d", [](const EcologyParams& p, const Coords& x) { return p.d(T(x)); })
      .def("mu", [](const EcologyParams& p, const Coords& x) { return p.mu(T(x)); })
      .def("alpha", [](const EcologyParams& p, const Coords& x, const Coords& y) {
        return p.alpha(T(x), T(y));
      })
      .def("to_json", [](const EcologyParams& p) { return params_to_json(p).dump(); });

  m.def("scenario_json", [](const std::string& path) {
    return scenario_to_json(load_scenario(path)).dump();
  });

  m.def("equilibrium_density",
        [](const EcologyParams& p, const Coords& x) { return equilibrium_density(p, T(x)); });
  m.def("mutation_rate_beta",
        [](const EcologyParams& p, const Coords& x) { return mutation_rate_beta(p, T(x)); });
  m.def("invasion_fitness", [](const EcologyParams& p, const Coords& y, const Coords& x) {
    return invasion_fitness(p, T(y), T(x));
  });
  m.def("classify_pair", [](const EcologyParams& p, const Coords& x, const Coords& y) {
    const auto c = classify_pair(p, T(x), T(y));
    return py::make_tuple(to_string(c.kind), c.mutant_fitness, c.resident_fitness);
  });
  m.def("validate_assumptions", [](const EcologyParams& p, std::size_t per_axis) {
    return io::to_json(validate_assumptions(p, p.space().grid(per_axis))).dump();
  });

  m.def(
      "simulate_micro",
      [](const EcologyParams& p, long K, double u_K, const Coords& x0, long count, double t_end,
         const std::vector<double>& sample_times, std::uint64_t seed) {
        SimulationOptions o;
        o.sample_times = sample_times;
        o.tracked_traits = {T(x0)};
        Rng rng(seed);
        Trajectory traj;
        {
          py::gil_scoped_release release;
          traj = simulate(p, K, u_K, PopulationState::monomorphic(p, K, T(x0), count), t_end, o, rng);
        }
        py::dict out;
        std::vector<double> times, mass;
        std::vector<std::size_t> support;
        for (const auto& s : traj.samples) {
          times.push_back(s.time);
          mass.push_back(s.total_mass);
          support.push_back(s.support_size);
        }
        out["times"] = times;
        out["total_mass"] = mass;
        out["support_size"] = support;
        out["event_count"] = traj.event_count;
        out["mutation_count"] = traj.mutation_count;
        out["extinct"] = traj.extinct;
        out["end_time"] = traj.end_time;
        std::vector<std::pair<Coords, double>> final_support;
        if (traj.final_state) {
          for (const auto& [x, w] : traj.final_state->support()) final_support.emplace_back(C(x), w);
        }
        out["final_support"] = final_support;
        return out;
      },
      py::arg("params"), py::arg("K"), py::arg("u_K"), py::arg("x0"), py::arg("count"),
      py::arg("t_end"), py::arg("sample_times"), py::arg("seed"));

  m.def("default_mutation_scaling", &default_mutation_scaling);

  m.def("simulate_tss", [](const EcologyParams& p, const Coords& x0, double t_end, std::uint64_t seed) {
    Rng rng(seed);
    const auto path = simulate_tss(p, T(x0), t_end, rng, false);
    std::vector<std::pair<double, Coords>> jumps;
    for (const auto& [t, x] : path.jumps) jumps.emplace_back(t, C(x));
    return jumps;
  });
  m.def("tss_marginal", [](const EcologyParams& p, const Coords& x0, double t, std::size_t reps,
                           std::uint64_t seed) {
    std::vector<Coords> out;
    for (const auto& x : tss_marginal(p, T(x0), t, reps, seed)) out.push_back(C(x));
    return out;
  });
  m.def("jump_acceptance", [](const EcologyParams& p, const Coords& x, std::size_t draws,
                              std::uint64_t seed) {
    Rng rng(seed);
    std::size_t acc = 0;
    for (std::size_t i = 0; i < draws; ++i) acc += sample_jump_kernel(p, T(x), rng).accepted;
    return static_cast<double>(acc) / static_cast<double>(draws);
  });

  m.def("integrate_logistic", [](double b, double d, double a, double n0, double T_end, double dt) {
    const auto path = integrate_logistic(b, d, a, n0, T_end, dt);
    std::vector<double> n;
    for (const auto& s : path.states) n.push_back(s[0]);
    return py::make_tuple(path.times, n);
  });
  m.def("integrate_dimorphic", [](const EcologyParams& p, const Coords& x, const Coords& y,
                                  double nx, double ny, double T_end, double dt) {
    const auto path = integrate_dimorphic(p, T(x), T(y), {nx, ny}, T_end, dt);
    std::vector<double> a, b;
    for (const auto& s : path.states) {
      a.push_back(s[0]);
      b.push_back(s[1]);
    }
    return py::make_tuple(path.times, a, b);
  });
  m.def("classify_equilibrium_flow",
        [](const EcologyParams& p, const Coords& x, const Coords& y, double eps) {
          return io::to_json(classify_equilibrium_flow(p, T(x), T(y), eps)).dump();
        });

  m.def("extinction_probability", &extinction_probability);
  m.def("extinction_time_cdf", &extinction_time_cdf);

  m.def("estimate_invasion_probability",
        [](const EcologyParams& p, const Coords& x, const Coords& y, long K, std::size_t reps,
           std::uint64_t seed, unsigned jobs) {
          py::gil_scoped_release release;
          return io::to_json(estimate_invasion_probability(p, T(x), T(y), K, settings(reps, seed, jobs)))
              .dump();
        });
  m.def("mutation_time_test", [](const EcologyParams& p, const Coords& x, long K, double u_K,
                                 std::size_t reps, std::uint64_t seed, unsigned jobs) {
    py::gil_scoped_release release;
    return io::to_json(mutation_time_test(p, T(x), K, u_K, settings(reps, seed, jobs))).dump();
  });
  m.def("compare_fdd", [](const std::string& scenario_json, std::size_t reps, std::uint64_t seed,
                          unsigned jobs) {
    const ScenarioConfig cfg = scenario_from_json(json::parse(scenario_json));
    py::gil_scoped_release release;
    return io::to_json(compare_fdd(cfg, settings(reps, seed, jobs))).dump();
  });
  m.def("exit_time_scaling", [](double b, double d, double a, double eta1, double eta2,
                                const std::vector<long>& Ks, double t_max, std::size_t reps,
                                std::uint64_t seed, unsigned jobs) {
    py::gil_scoped_release release;
    return io::to_json(exit_time_scaling(b, d, a, eta1, eta2, Ks, t_max, settings(reps, seed, jobs)))
        .dump();
  });
}
