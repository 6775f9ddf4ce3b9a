#include "evodyn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "evodyn/config.hpp"
#include "evodyn/errors.hpp"

namespace evodyn::io {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trait_label(const Trait& x) {
  std::string out;
  for (std::size_t i = 0; i < x.dimension(); ++i) {
    if (i) out += ';';
    out += format_double(x[i]);
  }
  return out;
}

void append_coords(std::string& line, const Trait& x) {
  for (std::size_t i = 0; i < x.dimension(); ++i) {
    line += ',';
    line += format_double(x[i]);
  }
}

// JSON numbers cannot be infinite; censored values are written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json interval_json(const stats::Interval& i) { return {{"low", i.lo}, {"high", i.hi}}; }

}  // namespace

std::string trajectory_csv(const Trajectory& traj, const std::vector<Trait>& tracked) {
  std::string out = "time,total_mass,support_size";
  for (const auto& t : tracked) out += ",mass_" + trait_label(t);
  out += '\n';
  for (const auto& s : traj.samples) {
    out += format_double(s.time);
    out += ',';
    out += format_double(s.total_mass);
    out += ',';
    out += std::to_string(s.support_size);
    for (double m : s.tracked_mass) {
      out += ',';
      out += format_double(m);
    }
    out += '\n';
  }
  return out;
}

std::string events_csv(const std::vector<Event>& events, std::size_t dimension) {
  std::string out = "time,kind";
  for (std::size_t i = 0; i < dimension; ++i) out += ",trait_" + std::to_string(i);
  for (std::size_t i = 0; i < dimension; ++i) out += ",parent_" + std::to_string(i);
  out += '\n';
  for (const auto& e : events) {
    out += format_double(e.time);
    out += ',';
    out += to_string(e.kind);
    append_coords(out, e.trait);
    if (e.parent) {
      append_coords(out, *e.parent);
    } else {
      out.append(dimension, ',');
    }
    out += '\n';
  }
  return out;
}

std::string ode_csv(const OdePath& path) {
  std::string out = path.dimension == 2 ? "time,n_x,n_y\n" : "time,n_x\n";
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    out += format_double(path.times[k]);
    out += ',';
    out += format_double(path.states[k][0]);
    if (path.dimension == 2) {
      out += ',';
      out += format_double(path.states[k][1]);
    }
    out += '\n';
  }
  return out;
}

std::string tss_path_csv(const TssPath& path) {
  std::string out = "jump_time";
  for (std::size_t i = 0; i < path.initial.dimension(); ++i) out += ",trait_" + std::to_string(i);
  out += '\n';
  out += format_double(0.0);
  append_coords(out, path.initial);
  out += '\n';
  for (const auto& [t, x] : path.jumps) {
    out += format_double(t);
    append_coords(out, x);
    out += '\n';
  }
  return out;
}

json to_json(const InvasionEstimate& e) {
  return {{"resident", trait_to_json(e.resident)},
          {"mutant", trait_to_json(e.mutant)},
          {"classification", to_string(e.classification)},
          {"K", e.K},
          {"resident_count", e.resident_count},
          {"replicates", e.reps},
          {"mutant_fixed", e.mutant_fixed},
          {"resident_fixed", e.resident_fixed},
          {"extinct", e.extinct},
          {"budget_exhausted", e.budget_exhausted},
          {"failed", e.failed},
          {"estimate", e.estimate},
          {"resident_estimate", e.resident_estimate},
          {"ci", interval_json(e.ci)},
          {"target", e.target},
          {"ci_covers_target", e.ci_covers_target}};
}

json to_json(const MutationTimeReport& r) {
  return {{"trait", trait_to_json(r.trait)},
          {"K", r.K},
          {"u_K", r.u_K},
          {"beta", r.beta},
          {"replicates", r.reps},
          {"degenerate", r.degenerate},
          {"mutations_observed", r.scaled_times.size()},
          {"extinct_before_mutation", r.extinct_before_mutation},
          {"failed", r.failed},
          {"ks_statistic", r.ks_statistic},
          {"p_value", r.p_value},
          {"mean", r.mean},
          {"expected_mean", r.beta > 0.0 ? 1.0 / r.beta : 0.0},
          {"standard_error", r.standard_error},
          {"ks_pass", r.ks_pass},
          {"mean_pass", r.mean_pass},
          {"passed", r.passed()}};
}

json to_json(const ComparisonReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels) {
    json times = json::array();
    for (const auto& t : l.times) {
      times.push_back({{"time", t.time},
                       {"raw_time", t.raw_time},
                       {"samples", t.samples},
                       {"monomorphic_frequency", t.monomorphic_frequency},
                       {"monomorphic_ci", interval_json(t.monomorphic_ci)},
                       {"mass_near_equilibrium_frequency", t.mass_near_equilibrium_frequency},
                       {"mass_ci", interval_json(t.mass_ci)},
                       {"extinct_frequency", t.extinct_frequency},
                       {"tv_distance", t.tv_distance},
                       {"tv_se", t.tv_se}});
    }
    levels.push_back({{"K", l.K},
                      {"u_K", l.u_K},
                      {"failed", l.failed},
                      {"pooled_monomorphic_frequency", l.pooled_monomorphic_frequency},
                      {"times", times}});
  }
  return {{"scenario", r.scenario},
          {"initial_trait", trait_to_json(r.initial_trait)},
          {"epsilon", r.epsilon},
          {"bin_width", r.bin_width},
          {"replicates", r.reps},
          {"tss_replicates", r.tss_reps},
          {"seed", r.seed},
          {"observation_times", r.observation_times},
          {"levels", levels},
          {"verdicts",
           {{"tv_nonincreasing", r.tv_nonincreasing},
            {"monomorphic_increasing", r.monomorphic_increasing},
            {"monomorphic_threshold", r.monomorphic_threshold},
            {"monomorphic_above_threshold", r.monomorphic_above_threshold},
            {"passed", r.passed()}}}};
}

json to_json(const ExitTimeReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"K", l.K},
                      {"replicates", l.exit_times.size() + l.failed},
                      {"censored", l.censored},
                      {"failed", l.failed},
                      {"median", finite_or_null(l.median)},
                      {"median_censored", std::isinf(l.median)}});
  }
  return {{"b", r.b},
          {"d", r.d},
          {"alpha", r.alpha},
          {"eta1", r.eta1},
          {"eta2", r.eta2},
          {"t_max", r.t_max},
          {"equilibrium", r.equilibrium},
          {"levels", levels},
          {"strictly_increasing", r.strictly_increasing},
          {"log_median_slope", r.log_median_slope},
          {"passed", r.passed()}};
}

json to_json(const AssumptionReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"trait", x.trait ? trait_to_json(*x.trait) : json(nullptr)},
                 {"message", x.message}});
  }
  return {{"passed", r.passed}, {"violations", v}};
}

json to_json(const FlowClassification& f) {
  return {{"outcome", to_string(f.outcome)},
          {"entry_time", f.entry_time ? json(*f.entry_time) : json(nullptr)},
          {"final_time", f.final_time}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace evodyn::io
