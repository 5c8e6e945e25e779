#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fso/canon.hpp"
#include "fso/dynamics.hpp"
#include "fso/embedding.hpp"
#include "fso/lattice.hpp"
#include "fso/resilience.hpp"
#include "fso/ultimate_sort.hpp"

// JSON and CSV mappings for every artifact the command-line tool reads or
// writes. Field layouts are documented in docs/formats.md. Malformed input is
// reported as Error(SchemaViolation).
namespace fso::io {

using nlohmann::json;

inline constexpr std::string_view kSchema = "fso-sim/1";

json lattice_to_json(const SonLattice& lattice);
json dimension_to_json(const DimensionEstimate& estimate);
json modularity_to_json(const RoleSeed& a, const RoleSeed& b, const ModularityReport& report);

struct WalkRequest {
  RoleSeed seed = RoleSeed::parse("0");
  std::vector<std::uint32_t> start;
  dynamics::WalkConfig config;
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;
  bool has_rng_seed = false;
};
WalkRequest walk_from_json(const json& j);
json distribution_to_json(const dynamics::Distribution& d);

struct CanonRequest {
  canon::Scenario scenario;
  canon::ScenarioOptions options;
  bool generated = false;
};
/// `rng_seed` is needed only when the document asks for a generated scenario.
CanonRequest scenario_from_json(const json& j, std::optional<std::uint64_t> rng_seed);
json trace_record_to_json(const canon::TraceRecord& record);
json stats_to_json(const canon::ScenarioStats& stats);

std::vector<double> read_loss_csv(std::istream& in);
resilience::ChannelModel channel_from_json(const json& j, const std::filesystem::path& base_dir);
resilience::StrategyConfig strategy_from_json(const json& j);
json report_to_json(const resilience::TransmissionReport& report, bool include_log);

struct SortRequest {
  std::vector<sorting::Monad> population;
  sorting::Environment environment;
  sorting::QoEWeights weights;
};
SortRequest population_from_json(const json& j);
json selection_to_json(const sorting::Selection& selection);
json oracle_to_json(const sorting::OracleResult& result);

}  // namespace fso::io
