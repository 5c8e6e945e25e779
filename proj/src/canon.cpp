#include "fso/canon.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "fso/error.hpp"
#include "fso/rng.hpp"

namespace fso::canon {

bool Entity::has(const std::string& tag) const {
  return std::binary_search(capabilities.begin(), capabilities.end(), tag);
}

Hierarchy::Hierarchy(std::vector<std::vector<Entity>> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw Error(ErrorCode::InvalidArgument, "hierarchy needs at least one level");
  std::set<std::string> seen;
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    for (Entity& e : levels_[l]) {
      if (!seen.insert(e.id).second) throw Error(ErrorCode::InvalidArgument, "duplicate entity id " + e.id);
      e.level = l;
      std::sort(e.capabilities.begin(), e.capabilities.end());
      e.capabilities.erase(std::unique(e.capabilities.begin(), e.capabilities.end()), e.capabilities.end());
    }
  }
}

std::size_t Hierarchy::entity_count() const noexcept {
  std::size_t n = 0;
  for (const auto& level : levels_) n += level.size();
  return n;
}

MatchResult match_roles(std::span<const std::string> required, std::span<const Entity* const> pool) {
  std::vector<std::string> roles(required.begin(), required.end());
  std::sort(roles.begin(), roles.end());
  std::vector<bool> used(pool.size(), false);

  MatchResult result;
  for (const std::string& role : roles) {
    std::size_t best = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i] || !pool[i]->has(role)) continue;
      if (best == pool.size()) {
        best = i;
        continue;
      }
      const auto ci = pool[i]->capabilities.size();
      const auto cb = pool[best]->capabilities.size();
      if (ci < cb || (ci == cb && pool[i]->id < pool[best]->id)) best = i;
    }
    if (best == pool.size()) {
      result.missing.push_back(role);
    } else {
      used[best] = true;
      result.assignments.push_back({role, pool[best]->id, pool[best]->level});
    }
  }
  return result;
}

SonTeam raise_event(Hierarchy& hierarchy, const EventRecord& event, const Matcher& matcher) {
  if (event.focal_level >= hierarchy.level_count()) {
    throw Error(ErrorCode::InvalidFocalLevel, "event " + std::to_string(event.id) + " has focal level " +
                                                  std::to_string(event.focal_level) + " but the hierarchy has " +
                                                  std::to_string(hierarchy.level_count()) + " levels");
  }
  if (event.protocol.required_roles.empty()) {
    throw Error(ErrorCode::InvalidArgument, "event " + std::to_string(event.id) + " requires no roles");
  }

  SonTeam team;
  team.event_id = event.id;
  std::vector<std::string> pending = event.protocol.required_roles;
  std::sort(pending.begin(), pending.end());

  for (std::size_t step = 0; step <= event.focal_level; ++step) {
    const std::size_t level = event.focal_level - step;
    team.levels_visited.push_back(level);

    std::span<Entity> members = hierarchy.level(level);
    std::vector<const Entity*> pool;
    for (const Entity& e : members) {
      if (e.available()) pool.push_back(&e);
    }
    MatchResult found = matcher(pending, pool);
    for (Assignment& a : found.assignments) {
      auto it = std::find_if(members.begin(), members.end(), [&](const Entity& e) { return e.id == a.entity_id; });
      if (it == members.end() || !it->available() || !it->has(a.role)) {
        throw Error(ErrorCode::InvalidArgument, "matcher assigned unusable entity " + a.entity_id);
      }
      it->status = EntityStatus::Enrolled;
      it->enrolled_in = event.id;
      it->busy_until = event.arrival_tick + event.service_ticks;
      a.level = level;
      team.assignments.push_back(std::move(a));
    }
    pending = std::move(found.missing);
    if (pending.empty()) break;
  }
  std::sort(pending.begin(), pending.end());
  team.missing = std::move(pending);
  return team;
}

namespace {

void release(Hierarchy& hierarchy, Tick now, Tick cooldown) {
  for (std::size_t l = 0; l < hierarchy.level_count(); ++l) {
    for (Entity& e : hierarchy.level(l)) {
      if (e.status == EntityStatus::Enrolled && e.busy_until <= now) {
        e.status = EntityStatus::Cooldown;
        e.busy_until += cooldown;
      }
      if (e.status == EntityStatus::Cooldown && e.busy_until <= now) {
        e.status = EntityStatus::Available;
      }
    }
  }
}

}  // namespace

ScenarioTrace run_scenario(Hierarchy hierarchy, std::vector<EventRecord> events, const ScenarioOptions& options,
                           const Matcher& matcher) {
  if (options.cooldown_ticks < 0) throw Error(ErrorCode::InvalidArgument, "negative cooldown");
  std::set<EventId> ids;
  for (const EventRecord& ev : events) {
    if (!ids.insert(ev.id).second) {
      throw Error(ErrorCode::DuplicateEventId, "event id " + std::to_string(ev.id) + " appears twice");
    }
    if (ev.focal_level >= hierarchy.level_count()) {
      throw Error(ErrorCode::InvalidFocalLevel, "event " + std::to_string(ev.id) + " focal level out of range");
    }
    if (ev.arrival_tick < 0 || ev.service_ticks < 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "event " + std::to_string(ev.id) + " needs arrival_tick >= 0 and service_ticks >= 1");
    }
  }
  std::stable_sort(events.begin(), events.end(), [](const EventRecord& a, const EventRecord& b) {
    return a.arrival_tick != b.arrival_tick ? a.arrival_tick < b.arrival_tick : a.id < b.id;
  });

  ScenarioTrace trace;
  std::vector<double> busy(hierarchy.level_count(), 0.0);
  Tick horizon = 0;
  std::size_t climbed = 0;

  std::size_t next = 0;
  while (next < events.size()) {
    const Tick now = events[next].arrival_tick;
    release(hierarchy, now, options.cooldown_ticks);
    for (; next < events.size() && events[next].arrival_tick == now; ++next) {
      const EventRecord& ev = events[next];
      SonTeam team = raise_event(hierarchy, ev, matcher);
      for (const Assignment& a : team.assignments) busy[a.level] += static_cast<double>(ev.service_ticks);
      horizon = std::max({horizon, now + 1, now + ev.service_ticks});
      climbed += team.levels_climbed();
      trace.stats.completed += team.complete() ? 1 : 0;
      trace.records.push_back({now, std::move(team)});
    }
  }

  ScenarioStats& s = trace.stats;
  s.events = events.size();
  s.horizon = horizon;
  s.completion_rate = s.events ? static_cast<double>(s.completed) / static_cast<double>(s.events) : 0.0;
  s.mean_levels_climbed = s.events ? static_cast<double>(climbed) / static_cast<double>(s.events) : 0.0;
  s.level_utilization.assign(hierarchy.level_count(), 0.0);
  for (std::size_t l = 0; l < hierarchy.level_count(); ++l) {
    const auto members = hierarchy.level(l).size();
    if (members > 0 && horizon > 0) {
      s.level_utilization[l] = busy[l] / (static_cast<double>(members) * static_cast<double>(horizon));
    }
  }
  return trace;
}

Scenario generate_scenario(const GeneratorParams& p, std::uint64_t rng_seed) {
  if (p.levels == 0 || p.tag_count == 0 || p.max_capabilities == 0 || p.max_roles == 0 || p.max_service < 1 ||
      p.max_gap < 0) {
    throw Error(ErrorCode::InvalidArgument, "generator parameters must be positive");
  }
  Rng rng(rng_seed);
  auto tag = [](std::uint64_t i) { return "t" + std::to_string(i); };

  std::vector<std::vector<Entity>> levels(p.levels);
  for (std::size_t l = 0; l < p.levels; ++l) {
    for (std::size_t i = 0; i < p.entities_per_level; ++i) {
      Entity e;
      e.id = "L" + std::to_string(l) + "E" + std::to_string(i);
      const auto caps = 1 + rng.below(std::min(p.max_capabilities, p.tag_count));
      while (e.capabilities.size() < caps) {
        std::string t = tag(rng.below(p.tag_count));
        if (std::find(e.capabilities.begin(), e.capabilities.end(), t) == e.capabilities.end()) {
          e.capabilities.push_back(std::move(t));
        }
      }
      levels[l].push_back(std::move(e));
    }
  }

  Scenario sc{Hierarchy(std::move(levels)), {}};
  Tick now = 0;
  for (std::size_t i = 0; i < p.events; ++i) {
    EventRecord ev;
    ev.id = i + 1;
    now += static_cast<Tick>(rng.below(static_cast<std::uint64_t>(p.max_gap) + 1));
    ev.arrival_tick = now;
    ev.focal_level = static_cast<std::size_t>(rng.below(p.levels));
    const auto roles = 1 + rng.below(p.max_roles);
    for (std::uint64_t r = 0; r < roles; ++r) ev.protocol.required_roles.push_back(tag(rng.below(p.tag_count)));
    ev.service_ticks = 1 + static_cast<Tick>(rng.below(static_cast<std::uint64_t>(p.max_service)));
    sc.events.push_back(std::move(ev));
  }
  return sc;
}

}  // namespace fso::canon
