// evodyn: command-line front end over a JSON scenario file.
//
// Exit codes: 0 success, 1 usage/config/validation error, 2 runtime failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "evodyn/config.hpp"
#include "evodyn/errors.hpp"
#include "evodyn/harness.hpp"
#include "evodyn/io.hpp"
#include "evodyn/limits.hpp"
#include "evodyn/micro.hpp"
#include "evodyn/model.hpp"
#include "evodyn/tss.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace evodyn;

namespace {

constexpr std::size_t kValidationGridPoints = 21;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::vector<long> K;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string out = "out";
  std::string format;
  bool verbose = false;
};

struct Context {
  const Options& opt;
  ScenarioConfig& cfg;
  std::uint64_t seed;
  fs::path out;

  std::vector<long> Ks() const { return opt.K.empty() ? cfg.K : opt.K; }
  std::size_t reps() const { return opt.reps.value_or(cfg.replicates); }
  RunSettings run() const { return {reps(), seed, opt.jobs, cfg.event_budget}; }
  bool json_format() const { return opt.format == "json"; }
  void write(const std::string& name, const std::string& content) const {
    io::atomic_write(out / name, content);
  }
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "Scenario JSON file")->required();
  sub->add_option("--seed", o.seed, "Master seed (drawn and printed when omitted)");
  sub->add_option("--reps", o.reps, "Replicate count override");
  sub->add_option("--K", o.K, "Carrying-capacity parameter (repeatable)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--format", o.format, "Trajectory output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("-v,--verbose", o.verbose, "Print progress details");
}

json samples_json(const Trajectory& traj) {
  json rows = json::array();
  for (const auto& s : traj.samples) {
    rows.push_back({{"time", s.time},
                    {"total_mass", s.total_mass},
                    {"support_size", s.support_size},
                    {"tracked_mass", s.tracked_mass}});
  }
  return rows;
}

std::string run_simulate_micro(const Context& c) {
  std::string summary;
  for (long K : c.Ks()) {
    const double u = c.cfg.mutation_scaling(K);
    SimulationOptions so;
    for (double t = 0.0; t <= c.cfg.t_end * (1.0 + 1e-12);) {
      so.sample_times.push_back(t);
      t = static_cast<double>(so.sample_times.size()) * c.cfg.sample_interval;
    }
    so.tracked_traits = c.cfg.tracked_traits.empty() ? std::vector<Trait>{c.cfg.initial_trait}
                                                      : c.cfg.tracked_traits;
    so.record_events = c.cfg.record_events;
    so.event_budget = c.cfg.event_budget;
    Rng rng(derive_seed(c.seed, static_cast<std::uint64_t>(K)));
    auto init =
        PopulationState::monomorphic(c.cfg.params, K, c.cfg.initial_trait, c.cfg.initial_count(K));
    const Trajectory traj = simulate(c.cfg.params, K, u, std::move(init), c.cfg.t_end, so, rng);
    const std::string tag = "_K" + std::to_string(K);
    if (c.json_format()) {
      json events = json::array();
      for (const auto& e : traj.events) {
        events.push_back({{"time", e.time},
                          {"kind", to_string(e.kind)},
                          {"trait", trait_to_json(e.trait)},
                          {"parent", e.parent ? trait_to_json(*e.parent) : json(nullptr)}});
      }
      c.write("micro" + tag + ".json",
              io::dump({{"K", K},
                        {"u_K", u},
                        {"event_count", traj.event_count},
                        {"mutation_count", traj.mutation_count},
                        {"extinct", traj.extinct},
                        {"end_time", traj.end_time},
                        {"samples", samples_json(traj)},
                        {"events", events}}));
    } else {
      c.write("trajectory" + tag + ".csv", io::trajectory_csv(traj, so.tracked_traits));
      if (so.record_events) {
        c.write("events" + tag + ".csv",
                io::events_csv(traj.events, c.cfg.params.space().dimension()));
      }
    }
    summary += "K=" + std::to_string(K) + " events=" + std::to_string(traj.event_count) +
               " mutations=" + std::to_string(traj.mutation_count) + " ";
  }
  return summary;
}

std::string run_simulate_tss(const Context& c) {
  const auto& times = c.cfg.observation_times;
  const double horizon = times.empty() ? c.cfg.t_end : times.back();
  Rng rng(derive_seed(c.seed, 0));
  const TssPath path = simulate_tss(c.cfg.params, c.cfg.initial_trait, horizon, rng);
  std::vector<double> marg_times = times.empty() ? std::vector<double>{horizon} : times;
  const auto marg =
      tss_marginals(c.cfg.params, c.cfg.initial_trait, marg_times, c.reps(), c.seed);
  if (c.json_format()) {
    json jumps = json::array();
    for (const auto& [t, x] : path.jumps) jumps.push_back({{"time", t}, {"trait", trait_to_json(x)}});
    json m = json::array();
    for (std::size_t i = 0; i < marg_times.size(); ++i) {
      json traits = json::array();
      for (const auto& x : marg[i]) traits.push_back(trait_to_json(x));
      m.push_back({{"time", marg_times[i]}, {"traits", traits}});
    }
    c.write("tss.json", io::dump({{"initial", trait_to_json(path.initial)},
                                   {"t_end", horizon},
                                   {"proposals", path.proposals.size()},
                                   {"jumps", jumps},
                                   {"marginals", m}}));
  } else {
    c.write("tss_path.csv", io::tss_path_csv(path));
    std::string csv = "replicate,time";
    for (std::size_t i = 0; i < c.cfg.initial_trait.dimension(); ++i) {
      csv += ",trait_" + std::to_string(i);
    }
    csv += '\n';
    for (std::size_t r = 0; r < c.reps(); ++r) {
      for (std::size_t i = 0; i < marg_times.size(); ++i) {
        csv += std::to_string(r) + ',' + io::format_double(marg_times[i]);
        for (double v : marg[i][r].coords()) csv += ',' + io::format_double(v);
        csv += '\n';
      }
    }
    c.write("tss_marginal.csv", csv);
  }
  return "jumps=" + std::to_string(path.jumps.size()) +
         " proposals=" + std::to_string(path.proposals.size());
}

std::string run_ode(const Context& c) {
  const auto& p = c.cfg.params;
  const Trait& x = c.cfg.initial_trait;
  const double nbar = equilibrium_density(p, x);
  const double n0 = c.cfg.initial_mass.value_or(nbar);
  const double eps = c.cfg.epsilon_fraction * nbar;
  const OdePath mono =
      integrate_logistic(p.b(x), p.d(x), p.alpha(x, x), n0, c.cfg.ode_T, c.cfg.ode_dt, eps);
  json summary = {{"trait", trait_to_json(x)},
                  {"equilibrium", nbar},
                  {"logistic_terminal", mono.terminal()[0]},
                  {"logistic_entry_time", mono.entry_time ? json(*mono.entry_time) : json(nullptr)},
                  {"logistic_clip_count", mono.clip_count}};
  std::string line = "n(T)=" + io::format_double(mono.terminal()[0]);
  std::optional<OdePath> di;
  if (c.cfg.resident && c.cfg.mutant) {
    const Trait& rx = *c.cfg.resident;
    const Trait& my = *c.cfg.mutant;
    const double rnbar = equilibrium_density(p, rx);
    di = integrate_dimorphic(p, rx, my, {rnbar, c.cfg.epsilon_fraction * rnbar}, c.cfg.ode_T,
                             c.cfg.ode_dt);
    const auto pair = classify_pair(p, rx, my);
    summary["pair"] = {{"resident", trait_to_json(rx)},
                       {"mutant", trait_to_json(my)},
                       {"classification", to_string(pair.kind)},
                       {"mutant_fitness", pair.mutant_fitness},
                       {"resident_fitness", pair.resident_fitness},
                       {"dimorphic_terminal", di->terminal()}};
    if (pair.kind != InvasionClass::Degenerate) {
      const auto flow = classify_equilibrium_flow(p, rx, my, c.cfg.epsilon_fraction * rnbar);
      summary["pair"]["flow"] = io::to_json(flow);
      line += std::string(" flow=") + to_string(flow.outcome);
    }
  }
  if (c.json_format()) {
    auto path_json = [](const OdePath& path) {
      json rows = json::array();
      for (std::size_t k = 0; k < path.times.size(); ++k) {
        json row = {path.times[k], path.states[k][0]};
        if (path.dimension == 2) row.push_back(path.states[k][1]);
        rows.push_back(row);
      }
      return rows;
    };
    summary["logistic_path"] = path_json(mono);
    if (di) summary["dimorphic_path"] = path_json(*di);
  } else {
    c.write("ode_logistic.csv", io::ode_csv(mono));
    if (di) c.write("ode_dimorphic.csv", io::ode_csv(*di));
  }
  c.write("ode_summary.json", io::dump(summary));
  return line;
}

std::string run_invasion(const Context& c) {
  if (!c.cfg.resident || !c.cfg.mutant) throw ConfigError("scenario has no invasion pair");
  const long K = c.Ks().front();
  const auto est =
      estimate_invasion_probability(c.cfg.params, *c.cfg.resident, *c.cfg.mutant, K, c.run());
  c.write("invasion.json", io::dump(io::to_json(est)));
  std::string csv = "replicate,outcome\n";
  for (std::size_t i = 0; i < est.outcomes.size(); ++i) {
    csv += std::to_string(i) + ',' + est.outcomes[i] + '\n';
  }
  c.write("invasion_replicates.csv", csv);
  return "estimate=" + io::format_double(est.estimate) + " target=" + io::format_double(est.target);
}

std::string run_mutation_time(const Context& c) {
  const long K = c.Ks().front();
  const auto rep = mutation_time_test(c.cfg.params, c.cfg.initial_trait, K,
                                      c.cfg.mutation_scaling(K), c.run());
  c.write("mutation_time.json", io::dump(io::to_json(rep)));
  std::string csv = "index,scaled_time\n";
  for (std::size_t i = 0; i < rep.scaled_times.size(); ++i) {
    csv += std::to_string(i) + ',' + io::format_double(rep.scaled_times[i]) + '\n';
  }
  c.write("mutation_time_samples.csv", csv);
  if (rep.degenerate) return "degenerate input: no mutation can occur";
  return "p_value=" + io::format_double(rep.p_value) + " mean=" + io::format_double(rep.mean);
}

std::string run_compare_fdd(const Context& c) {
  ScenarioConfig cfg = c.cfg;
  cfg.K = c.Ks();
  const auto report = compare_fdd(cfg, c.run());
  c.write("fdd_report.json", io::dump(io::to_json(report)));
  return std::string("passed=") + (report.passed() ? "true" : "false");
}

std::string run_exit_time(const Context& c) {
  const auto& p = c.cfg.params;
  const Trait& x = c.cfg.initial_trait;
  const std::vector<long> Ks = c.opt.K.empty() ? c.cfg.exit.K : c.opt.K;
  const auto rep = exit_time_scaling(p.b(x), p.d(x), p.alpha(x, x), c.cfg.exit.eta1,
                                     c.cfg.exit.eta2, Ks, c.cfg.exit.t_max, c.run());
  c.write("exit_time.json", io::dump(io::to_json(rep)));
  std::string csv = "K,replicate,exit_time\n";
  for (const auto& l : rep.levels) {
    for (std::size_t i = 0; i < l.exit_times.size(); ++i) {
      csv += std::to_string(l.K) + ',' + std::to_string(i) + ',' +
             io::format_double(l.exit_times[i]) + '\n';
    }
  }
  c.write("exit_time_samples.csv", csv);
  return std::string("passed=") + (rep.passed() ? "true" : "false");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Individual-based eco-evolutionary simulator and trait substitution checks"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"simulate-micro", "Simulate the individual-based process"},
      {"simulate-tss", "Simulate the trait substitution sequence"},
      {"ode", "Integrate the deterministic limit systems"},
      {"invasion", "Estimate the invasion (fixation) probability of a mutant"},
      {"mutation-time", "Test the law of the first mutation time"},
      {"compare-fdd", "Compare microscopic marginals with the TSS"},
      {"exit-time", "Measure exit-time growth around equilibrium"},
      {"validate", "Check the scenario parameters against the model assumptions"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, opt);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }
  std::string command;
  for (auto* s : subs) {
    if (s->parsed()) command = s->get_name();
  }

  std::optional<ScenarioConfig> cfg;
  try {
    cfg.emplace(load_scenario(opt.config));
    const auto grid = cfg->params.space().grid(kValidationGridPoints);
    const auto report = validate_assumptions(cfg->params, grid);
    if (command == "validate") {
      fs::create_directories(opt.out);
      io::atomic_write(fs::path(opt.out) / "validation.json", io::dump(io::to_json(report)));
    }
    if (!report.passed) {
      std::cerr << "validation failed for " << opt.config << ":\n";
      for (const auto& v : report.violations) {
        std::cerr << "  " << (v.trait ? to_string(*v.trait) + ": " : "") << v.message << "\n";
      }
      return 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  std::uint64_t seed;
  if (opt.seed) seed = *opt.seed;
  else if (cfg->seed) seed = *cfg->seed;
  else seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();

  try {
    fs::create_directories(opt.out);
    Context ctx{opt, *cfg, seed, fs::path(opt.out)};
    if (opt.verbose) {
      std::cerr << command << ": config=" << opt.config << " out=" << opt.out
                << " jobs=" << opt.jobs << "\n";
    }
    std::string summary;
    if (command == "validate") summary = "assumptions hold";
    else if (command == "simulate-micro") summary = run_simulate_micro(ctx);
    else if (command == "simulate-tss") summary = run_simulate_tss(ctx);
    else if (command == "ode") summary = run_ode(ctx);
    else if (command == "invasion") summary = run_invasion(ctx);
    else if (command == "mutation-time") summary = run_mutation_time(ctx);
    else if (command == "compare-fdd") summary = run_compare_fdd(ctx);
    else if (command == "exit-time") summary = run_exit_time(ctx);
    while (!summary.empty() && summary.back() == ' ') summary.pop_back();
    std::cout << "evodyn " << command << ": " << summary << " (seed=" << seed << ")\n";
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
