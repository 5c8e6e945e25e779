#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fso::canon {

using Tick = std::int64_t;
using EventId = std::uint64_t;

enum class EntityStatus { Available, Enrolled, Cooldown };

struct Entity {
  std::string id;
  std::size_t level = 0;
  /// Capability tags, kept sorted and unique.
  std::vector<std::string> capabilities;
  EntityStatus status = EntityStatus::Available;
  EventId enrolled_in = 0;
  /// End of the current enrolment or cooldown.
  Tick busy_until = 0;

  bool available() const noexcept { return status == EntityStatus::Available; }
  bool has(const std::string& tag) const;
};

/// Levels ordered top (index 0) to bottom. Entity ids are unique across the
/// whole hierarchy and compared as plain strings for tie-breaking.
class Hierarchy {
 public:
  Hierarchy() = default;
  /// Throws InvalidArgument on an empty hierarchy or duplicate entity ids.
  explicit Hierarchy(std::vector<std::vector<Entity>> levels);

  std::size_t level_count() const noexcept { return levels_.size(); }
  std::span<Entity> level(std::size_t index) { return levels_[index]; }
  std::span<const Entity> level(std::size_t index) const { return levels_[index]; }
  std::size_t entity_count() const noexcept;

 private:
  std::vector<std::vector<Entity>> levels_;
};

struct ResponseProtocol {
  /// Multiset of capability tags, one entry per role instance.
  std::vector<std::string> required_roles;
};

struct EventRecord {
  EventId id = 0;
  std::size_t focal_level = 0;
  ResponseProtocol protocol;
  Tick arrival_tick = 0;
  /// At least 1: an enrolment occupies its arrival tick.
  Tick service_ticks = 1;
};

struct Assignment {
  std::string role;
  std::string entity_id;
  std::size_t level = 0;
};

struct MatchResult {
  std::vector<Assignment> assignments;
  std::vector<std::string> missing;
};

/// Pluggable role matcher: fills role instances from a pool of available
/// entities of one level.
using Matcher = std::function<MatchResult(std::span<const std::string> required, std::span<const Entity* const> pool)>;

/// Greedy scarcity-last matching. Role instances are taken in sorted tag
/// order; each goes to the unused pool entity holding the tag with the fewest
/// capabilities, ties broken by the smaller id. Unfilled instances are
/// returned in `missing`.
MatchResult match_roles(std::span<const std::string> required, std::span<const Entity* const> pool);

struct SonTeam {
  EventId event_id = 0;
  std::vector<Assignment> assignments;
  /// Levels searched, starting at the focal level and climbing one at a time.
  std::vector<std::size_t> levels_visited;
  std::vector<std::string> missing;

  bool complete() const noexcept { return missing.empty(); }
  std::size_t levels_climbed() const noexcept { return levels_visited.empty() ? 0 : levels_visited.size() - 1; }
};

/// Resolves one event: match at the focal level, propagate the missing roles
/// to the level immediately above, and repeat until nothing is missing or the
/// top level has been searched. Lower levels are never consulted. Assigned
/// entities become Enrolled until arrival_tick + service_ticks, including on
/// partial outcomes.
SonTeam raise_event(Hierarchy& hierarchy, const EventRecord& event, const Matcher& matcher = match_roles);

struct TraceRecord {
  Tick arrival_tick = 0;
  SonTeam team;
};

struct ScenarioStats {
  std::size_t events = 0;
  std::size_t completed = 0;
  double completion_rate = 0.0;
  double mean_levels_climbed = 0.0;
  /// Share of entity-ticks spent enrolled, per level, over the horizon.
  std::vector<double> level_utilization;
  Tick horizon = 0;
};

struct ScenarioTrace {
  std::vector<TraceRecord> records;
  ScenarioStats stats;
};

struct ScenarioOptions {
  /// Ticks an entity rests after its service before it can be drafted again.
  Tick cooldown_ticks = 0;
};

/// Discrete-event loop. At every tick, entities whose enrolment or cooldown
/// has ended are released first, then the events arriving at that tick are
/// raised in ascending id order. Throws DuplicateEventId,
/// InvalidFocalLevel, or InvalidArgument for a negative arrival or a
/// service shorter than one tick.
ScenarioTrace run_scenario(Hierarchy hierarchy, std::vector<EventRecord> events,
                           const ScenarioOptions& options = {}, const Matcher& matcher = match_roles);

/// Parameters for randomly generated scenarios.
struct GeneratorParams {
  std::size_t levels = 3;
  std::size_t entities_per_level = 4;
  std::size_t tag_count = 4;
  std::size_t max_capabilities = 2;
  std::size_t events = 10;
  std::size_t max_roles = 3;
  Tick max_gap = 2;
  Tick max_service = 3;
};

struct Scenario {
  Hierarchy hierarchy;
  std::vector<EventRecord> events;
};

/// Tags are "t0".."t{tag_count-1}", entities "L{level}E{index}". Deterministic
/// for a given rng seed.
Scenario generate_scenario(const GeneratorParams& params, std::uint64_t rng_seed);

}  // namespace fso::canon
