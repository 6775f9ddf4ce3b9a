#ifndef EVODYN_CONFIG_HPP
#define EVODYN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "evodyn/model.hpp"

namespace evodyn {

struct ExitTimeSettings {
  double eta1 = 0.5;
  double eta2 = 0.5;
  double t_max = 1e5;
  std::vector<long> K{10, 30, 100};
};

/// Full experiment description, read from one JSON document.
/// See docs/config.md for the schema.
struct ScenarioConfig {
  explicit ScenarioConfig(EcologyParams p) : params(std::move(p)) {}

  std::string name = "scenario";
  EcologyParams params;
  std::vector<long> K{1000};
  std::optional<double> u_K;  // explicit value; otherwise 1/(K (log K)^2)
  Trait initial_trait;
  std::optional<double> initial_mass;  // defaults to n-bar(initial_trait)
  std::vector<double> observation_times;  // TSS time scale
  double t_end = 10.0;                    // raw time for single micro runs
  double sample_interval = 0.1;           // raw-time sampling for trajectory export
  std::size_t replicates = 100;
  std::size_t tss_replicates = 0;  // 0 -> 10 x replicates
  std::optional<std::uint64_t> seed;  // none -> the CLI draws one
  std::optional<Trait> resident;  // invasion pair
  std::optional<Trait> mutant;
  std::vector<Trait> tracked_traits;
  bool record_events = true;
  double epsilon_fraction = 0.1;
  double bin_width = 0.02;
  double monomorphic_threshold = 0.9;
  double ode_T = 20.0;
  double ode_dt = 1e-3;
  std::uint64_t event_budget = 100'000'000;
  ExitTimeSettings exit;

  double mutation_scaling(long K) const;
  long initial_count(long K) const;
};

EcologyParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const EcologyParams& p);

ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::filesystem::path& path);
nlohmann::json scenario_to_json(const ScenarioConfig& c);

nlohmann::json trait_to_json(const Trait& x);
Trait trait_from_json(const nlohmann::json& j);

}  // namespace evodyn

#endif  // EVODYN_CONFIG_HPP
