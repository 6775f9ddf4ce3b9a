#include "evodyn/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "evodyn/errors.hpp"
#include "evodyn/micro.hpp"

namespace evodyn {

using nlohmann::json;

namespace {

std::vector<double> vec_from(const json& j) {
  if (j.is_number()) return {j.get<double>()};
  return j.get<std::vector<double>>();
}

double num(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key).get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

ScalarFunction scalar_from_json(const json& j) {
  if (j.is_number()) return ScalarFunction::constant(j.get<double>());
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return ScalarFunction::constant(num(j, "value"));
  if (kind == "linear") return ScalarFunction::linear(num(j, "intercept"), vec_from(j.at("slope")));
  if (kind == "gaussian_bump") {
    return ScalarFunction::gaussian_bump(num(j, "base"), num(j, "height"), vec_from(j.at("center")),
                                         num(j, "width"));
  }
  throw ConfigError("unknown rate function kind '" + kind + "'");
}

json scalar_to_json(const ScalarFunction& f) {
  switch (f.kind()) {
    case ScalarFunction::Kind::Constant:
      return {{"kind", "constant"}, {"value", f.base()}};
    case ScalarFunction::Kind::Linear:
      return {{"kind", "linear"}, {"intercept", f.base()}, {"slope", f.vec()}};
    case ScalarFunction::Kind::GaussianBump:
      return {{"kind", "gaussian_bump"},
              {"base", f.base()},
              {"height", f.height()},
              {"center", f.vec()},
              {"width", f.width()}};
  }
  return nullptr;
}

CompetitionKernel competition_from_json(const json& j) {
  if (j.is_number()) return CompetitionKernel::constant(j.get<double>());
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return CompetitionKernel::constant(num(j, "value"));
  if (kind == "linear_difference") {
    return CompetitionKernel::linear_difference(num(j, "base"), vec_from(j.at("slope")),
                                                num(j, "lo"), num(j, "hi"));
  }
  if (kind == "bilinear") {
    return CompetitionKernel::bilinear(num(j, "base"), vec_from(j.at("px")), vec_from(j.at("py")),
                                       num_or(j, "pxy", 0.0), num(j, "lo"), num(j, "hi"));
  }
  if (kind == "gaussian") {
    return CompetitionKernel::gaussian(num_or(j, "base", 0.0), num(j, "height"), num(j, "width"));
  }
  throw ConfigError("unknown competition kind '" + kind + "'");
}

json competition_to_json(const CompetitionKernel& k) {
  switch (k.kind()) {
    case CompetitionKernel::Kind::Constant:
      return {{"kind", "constant"}, {"value", k.base()}};
    case CompetitionKernel::Kind::Bilinear:
      return {{"kind", "bilinear"}, {"base", k.base()}, {"px", k.px()},     {"py", k.py()},
              {"pxy", k.pxy()},     {"lo", k.clip_lo()}, {"hi", k.clip_hi()}};
    case CompetitionKernel::Kind::Gaussian:
      return {{"kind", "gaussian"}, {"base", k.base()}, {"height", k.height()}, {"width", k.width()}};
  }
  return nullptr;
}

MutationKernel kernel_from_json(const json& j) {
  const std::string kind = j.value("kind", std::string("gaussian"));
  if (kind != "gaussian") throw ConfigError("unknown mutation kernel kind '" + kind + "'");
  return MutationKernel::gaussian(vec_from(j.at("sigma")));
}

std::vector<long> longs_from(const json& j) {
  if (j.is_number()) return {j.get<long>()};
  return j.get<std::vector<long>>();
}

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json trait_to_json(const Trait& x) {
  return std::vector<double>(x.coords().begin(), x.coords().end());
}

Trait trait_from_json(const json& j) { return Trait(vec_from(j)); }

EcologyParams params_from_json(const json& j) {
  return guarded("parameters", [&] {
    const json& box = j.at("trait_space");
    TraitSpace space(vec_from(box.at("lo")), vec_from(box.at("hi")));
    std::optional<RateBounds> declared;
    if (j.contains("bounds")) {
      const json& b = j.at("bounds");
      declared = RateBounds{num(b, "b_max"), num(b, "d_max"), num(b, "alpha_max"),
                            num(b, "alpha_min")};
    }
    return EcologyParams(std::move(space), scalar_from_json(j.at("birth")),
                         scalar_from_json(j.at("death")),
                         competition_from_json(j.at("competition")),
                         scalar_from_json(j.at("mutation_probability")),
                         kernel_from_json(j.at("mutation_kernel")), declared);
  });
}

json params_to_json(const EcologyParams& p) {
  json j;
  j["trait_space"] = {{"lo", p.space().lo()}, {"hi", p.space().hi()}};
  j["birth"] = scalar_to_json(p.birth_fn());
  j["death"] = scalar_to_json(p.death_fn());
  j["competition"] = competition_to_json(p.competition_fn());
  j["mutation_probability"] = scalar_to_json(p.mutation_probability_fn());
  j["mutation_kernel"] = {{"kind", "gaussian"}, {"sigma", p.mutation().sigma()}};
  if (p.bounds_declared()) {
    const auto& b = p.bounds();
    j["bounds"] = {{"b_max", b.b_max},
                   {"d_max", b.d_max},
                   {"alpha_max", b.alpha_max},
                   {"alpha_min", b.alpha_min}};
  }
  return j;
}

double ScenarioConfig::mutation_scaling(long k) const {
  return u_K ? *u_K : default_mutation_scaling(k);
}

long ScenarioConfig::initial_count(long k) const {
  const double mass = initial_mass ? *initial_mass : equilibrium_density(params, initial_trait);
  return static_cast<long>(std::floor(static_cast<double>(k) * mass));
}

ScenarioConfig scenario_from_json(const json& j) {
  static const std::set<std::string> known = {
      "name",         "trait_space",  "birth",          "death",
      "competition",  "mutation_probability", "mutation_kernel", "bounds",
      "K",            "u_K",          "initial",        "observation_times",
      "t_end",        "sample_interval", "replicates",  "tss_replicates",
      "seed",         "invasion",     "tracked_traits", "record_events",
      "epsilon_fraction", "bin_width", "monomorphic_threshold", "ode",
      "event_budget", "exit_time",    "description"};
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown scenario field '" + key + "'");
  }

  ScenarioConfig c(params_from_json(j));
  guarded("scenario", [&] {
    c.name = j.value("name", c.name);
    if (j.contains("K")) c.K = longs_from(j.at("K"));
    if (j.contains("u_K")) {
      const json& u = j.at("u_K");
      if (u.is_string()) {
        if (u.get<std::string>() != "default") throw ConfigError("u_K must be a number or \"default\"");
      } else {
        c.u_K = u.get<double>();
      }
    }
    const json& init = j.at("initial");
    c.initial_trait = trait_from_json(init.at("trait"));
    if (init.contains("mass")) c.initial_mass = init.at("mass").get<double>();
    if (j.contains("observation_times")) {
      c.observation_times = j.at("observation_times").get<std::vector<double>>();
    }
    c.t_end = j.value("t_end", c.t_end);
    c.sample_interval = j.value("sample_interval", c.sample_interval);
    c.replicates = j.value("replicates", c.replicates);
    c.tss_replicates = j.value("tss_replicates", c.tss_replicates);
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("invasion")) {
      c.resident = trait_from_json(j.at("invasion").at("resident"));
      c.mutant = trait_from_json(j.at("invasion").at("mutant"));
    }
    if (j.contains("tracked_traits")) {
      for (const auto& t : j.at("tracked_traits")) c.tracked_traits.push_back(trait_from_json(t));
    }
    c.record_events = j.value("record_events", c.record_events);
    c.epsilon_fraction = j.value("epsilon_fraction", c.epsilon_fraction);
    c.bin_width = j.value("bin_width", c.bin_width);
    c.monomorphic_threshold = j.value("monomorphic_threshold", c.monomorphic_threshold);
    if (j.contains("ode")) {
      c.ode_T = j.at("ode").value("T", c.ode_T);
      c.ode_dt = j.at("ode").value("dt", c.ode_dt);
    }
    c.event_budget = j.value("event_budget", c.event_budget);
    if (j.contains("exit_time")) {
      const json& e = j.at("exit_time");
      c.exit.eta1 = e.value("eta1", c.exit.eta1);
      c.exit.eta2 = e.value("eta2", c.exit.eta2);
      c.exit.t_max = e.value("t_max", c.exit.t_max);
      if (e.contains("K")) c.exit.K = longs_from(e.at("K"));
    }
    return 0;
  });

  // Structural invariants.
  if (c.K.empty()) throw ConfigError("K list must not be empty");
  for (long k : c.K) {
    if (k < 1) throw ConfigError("every K must be >= 1");
  }
  if (c.u_K && !(*c.u_K >= 0.0 && *c.u_K <= 1.0)) throw ConfigError("u_K must lie in [0, 1]");
  for (std::size_t i = 1; i < c.observation_times.size(); ++i) {
    if (!(c.observation_times[i] > c.observation_times[i - 1])) {
      throw ConfigError("observation times must be strictly increasing");
    }
  }
  if (!c.observation_times.empty() && c.observation_times.front() < 0.0) {
    throw ConfigError("observation times must be nonnegative");
  }
  if (c.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (!(c.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(c.sample_interval > 0.0)) throw ConfigError("sample_interval must be positive");
  if (!(c.bin_width > 0.0)) throw ConfigError("bin_width must be positive");
  if (!(c.epsilon_fraction > 0.0)) throw ConfigError("epsilon_fraction must be positive");
  if (!c.params.space().contains(c.initial_trait)) {
    throw ConfigError("initial trait lies outside the trait space");
  }
  if (c.initial_mass && !(*c.initial_mass >= 0.0)) throw ConfigError("initial mass must be >= 0");
  for (const auto& t : c.tracked_traits) {
    if (!c.params.space().contains(t)) throw ConfigError("tracked trait outside the trait space");
  }
  if (c.resident && (!c.params.space().contains(*c.resident) ||
                     !c.params.space().contains(*c.mutant))) {
    throw ConfigError("invasion traits must lie in the trait space");
  }
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

json scenario_to_json(const ScenarioConfig& c) {
  json j = params_to_json(c.params);
  j["name"] = c.name;
  j["K"] = c.K;
  if (c.u_K) j["u_K"] = *c.u_K;
  else j["u_K"] = "default";
  j["initial"] = {{"trait", trait_to_json(c.initial_trait)}};
  if (c.initial_mass) j["initial"]["mass"] = *c.initial_mass;
  j["observation_times"] = c.observation_times;
  j["t_end"] = c.t_end;
  j["sample_interval"] = c.sample_interval;
  j["replicates"] = c.replicates;
  j["tss_replicates"] = c.tss_replicates;
  if (c.seed) j["seed"] = *c.seed;
  if (c.resident) {
    j["invasion"] = {{"resident", trait_to_json(*c.resident)}, {"mutant", trait_to_json(*c.mutant)}};
  }
  json tracked = json::array();
  for (const auto& t : c.tracked_traits) tracked.push_back(trait_to_json(t));
  j["tracked_traits"] = tracked;
  j["record_events"] = c.record_events;
  j["epsilon_fraction"] = c.epsilon_fraction;
  j["bin_width"] = c.bin_width;
  j["monomorphic_threshold"] = c.monomorphic_threshold;
  j["ode"] = {{"T", c.ode_T}, {"dt", c.ode_dt}};
  j["event_budget"] = c.event_budget;
  j["exit_time"] = {
      {"eta1", c.exit.eta1}, {"eta2", c.exit.eta2}, {"t_max", c.exit.t_max}, {"K", c.exit.K}};
  return j;
}

}  // namespace evodyn
