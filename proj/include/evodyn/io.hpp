#ifndef EVODYN_IO_HPP
#define EVODYN_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "evodyn/harness.hpp"
#include "evodyn/limits.hpp"
#include "evodyn/micro.hpp"
#include "evodyn/tss.hpp"

namespace evodyn::io {

/// Shortest round-trip-safe decimal form used by every CSV writer:
/// printf("%.17g").
std::string format_double(double v);

// CSV exports. Schemas are listed in docs/formats.md.
std::string trajectory_csv(const Trajectory& traj, const std::vector<Trait>& tracked);
std::string events_csv(const std::vector<Event>& events, std::size_t dimension);
std::string ode_csv(const OdePath& path);
std::string tss_path_csv(const TssPath& path);

// JSON reports.
nlohmann::json to_json(const InvasionEstimate& e);
nlohmann::json to_json(const MutationTimeReport& r);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const ExitTimeReport& r);
nlohmann::json to_json(const AssumptionReport& r);
nlohmann::json to_json(const FlowClassification& f);

/// Serialized JSON with fixed indentation and a trailing newline.
std::string dump(const nlohmann::json& j);

/// Writes `content` to a temporary sibling of `path`, then renames it into
/// place, so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace evodyn::io

#endif  // EVODYN_IO_HPP
