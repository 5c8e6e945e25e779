#include "fso/io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "fso/error.hpp"

namespace fso::io {

namespace {

[[noreturn]] void violation(const std::string& what) { throw Error(ErrorCode::SchemaViolation, what); }

void expect_object(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) violation(std::string(where) + " must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (std::string_view key : allowed) known = known || item.key() == key;
    if (!known) violation("unknown field '" + item.key() + "' in " + std::string(where));
  }
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) violation(std::string("missing field '") + key + "'");
  return *it;
}

std::uint64_t as_uint(const json& v, const char* key) {
  if (!v.is_number_unsigned()) violation(std::string("field '") + key + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

double as_double(const json& v, const char* key) {
  if (!v.is_number()) violation(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::string as_string(const json& v, const char* key) {
  if (!v.is_string()) violation(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const char* key) {
  if (!v.is_boolean()) violation(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::uint64_t uint_or(const json& j, const char* key, std::uint64_t fallback) {
  return j.contains(key) ? as_uint(j.at(key), key) : fallback;
}
double double_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? as_double(j.at(key), key) : fallback;
}
bool bool_or(const json& j, const char* key, bool fallback) {
  return j.contains(key) ? as_bool(j.at(key), key) : fallback;
}

std::vector<std::string> string_list(const json& v, const char* key) {
  if (!v.is_array()) violation(std::string("field '") + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const json& item : v) out.push_back(as_string(item, key));
  return out;
}

json counts_json(std::span<const std::uint32_t> counts) { return json(std::vector<std::uint32_t>(counts.begin(), counts.end())); }

}  // namespace

json lattice_to_json(const SonLattice& lattice) {
  json nodes = json::array();
  for (NodeId v = 0; v < lattice.size(); ++v) nodes.push_back(counts_json(lattice.counts(v)));
  json edges = json::array();
  for (const auto& [u, v] : lattice.edges()) edges.push_back({u, v});
  return {
      {"schema", kSchema},
      {"seed", lattice.seed().canonical_text()},
      {"roles", lattice.roles()},
      {"multiplicities", counts_json(lattice.multiplicities())},
      {"size", lattice.size()},
      {"nodes", std::move(nodes)},
      {"edges", std::move(edges)},
  };
}

json dimension_to_json(const DimensionEstimate& e) {
  return {
      {"schema", kSchema}, {"scales", e.scales},       {"counts", e.counts},
      {"slope", e.slope},  {"intercept", e.intercept}, {"residual", e.residual},
  };
}

json modularity_to_json(const RoleSeed& a, const RoleSeed& b, const ModularityReport& r) {
  return {
      {"schema", kSchema},
      {"sub_seed", a.canonical_text()},
      {"super_seed", b.canonical_text()},
      {"injective", r.injective},
      {"order_embedding", r.order_embedding},
      {"edge_preserving", r.edge_preserving},
      {"passed", r.passed()},
      {"nodes_sub", r.nodes_sub},
      {"nodes_super", r.nodes_super},
      {"covered", r.covered},
      {"order_pairs_checked", r.order_pairs_checked},
      {"image", r.image},
  };
}

WalkRequest walk_from_json(const json& j) {
  expect_object(j, "walk config", {"schema", "seed", "steps", "start", "laziness", "burn_in", "thinning", "rng_seed"});
  WalkRequest req;
  req.seed = RoleSeed::parse(as_string(field(j, "seed"), "seed"));
  req.config.steps = as_uint(field(j, "steps"), "steps");
  req.config.laziness = double_or(j, "laziness", dynamics::kDefaultLaziness);
  req.burn_in = uint_or(j, "burn_in", 0);
  req.thinning = uint_or(j, "thinning", 1);
  if (j.contains("rng_seed")) {
    req.config.rng_seed = as_uint(j.at("rng_seed"), "rng_seed");
    req.has_rng_seed = true;
  }
  if (j.contains("start")) {
    const json& s = j.at("start");
    if (!s.is_array()) violation("field 'start' must be an array of counts");
    for (const json& c : s) req.start.push_back(static_cast<std::uint32_t>(as_uint(c, "start")));
  }
  return req;
}

json distribution_to_json(const dynamics::Distribution& d) { return json(d.weights); }

CanonRequest scenario_from_json(const json& j, std::optional<std::uint64_t> rng_seed) {
  expect_object(j, "scenario", {"schema", "levels", "events", "cooldown_ticks", "generate", "rng_seed"});
  CanonRequest req;
  if (j.contains("cooldown_ticks")) req.options.cooldown_ticks = static_cast<canon::Tick>(as_uint(j.at("cooldown_ticks"), "cooldown_ticks"));
  if (!rng_seed && j.contains("rng_seed")) rng_seed = as_uint(j.at("rng_seed"), "rng_seed");

  if (j.contains("generate")) {
    if (j.contains("levels") || j.contains("events")) violation("'generate' excludes explicit levels and events");
    if (!rng_seed) violation("a generated scenario needs an rng seed");
    const json& g = j.at("generate");
    expect_object(g, "generate", {"levels", "entities_per_level", "tag_count", "max_capabilities", "events", "max_roles",
                                  "max_gap", "max_service"});
    canon::GeneratorParams p;
    p.levels = uint_or(g, "levels", p.levels);
    p.entities_per_level = uint_or(g, "entities_per_level", p.entities_per_level);
    p.tag_count = uint_or(g, "tag_count", p.tag_count);
    p.max_capabilities = uint_or(g, "max_capabilities", p.max_capabilities);
    p.events = uint_or(g, "events", p.events);
    p.max_roles = uint_or(g, "max_roles", p.max_roles);
    p.max_gap = static_cast<canon::Tick>(uint_or(g, "max_gap", static_cast<std::uint64_t>(p.max_gap)));
    p.max_service = static_cast<canon::Tick>(uint_or(g, "max_service", static_cast<std::uint64_t>(p.max_service)));
    req.scenario = canon::generate_scenario(p, *rng_seed);
    req.generated = true;
    return req;
  }

  const json& levels = field(j, "levels");
  if (!levels.is_array()) violation("field 'levels' must be an array of levels");
  std::vector<std::vector<canon::Entity>> built;
  for (const json& level : levels) {
    if (!level.is_array()) violation("each level must be an array of entities");
    auto& members = built.emplace_back();
    for (const json& e : level) {
      expect_object(e, "entity", {"id", "capabilities"});
      canon::Entity entity;
      entity.id = as_string(field(e, "id"), "id");
      entity.capabilities = string_list(field(e, "capabilities"), "capabilities");
      members.push_back(std::move(entity));
    }
  }
  req.scenario.hierarchy = canon::Hierarchy(std::move(built));

  const json& events = field(j, "events");
  if (!events.is_array()) violation("field 'events' must be an array");
  for (const json& e : events) {
    expect_object(e, "event", {"id", "focal_level", "roles", "arrival_tick", "service_ticks"});
    canon::EventRecord ev;
    ev.id = as_uint(field(e, "id"), "id");
    ev.focal_level = as_uint(field(e, "focal_level"), "focal_level");
    ev.protocol.required_roles = string_list(field(e, "roles"), "roles");
    if (ev.protocol.required_roles.empty()) violation("event roles must not be empty");
    ev.arrival_tick = static_cast<canon::Tick>(as_uint(field(e, "arrival_tick"), "arrival_tick"));
    ev.service_ticks = static_cast<canon::Tick>(uint_or(e, "service_ticks", 1));
    req.scenario.events.push_back(std::move(ev));
  }
  return req;
}

json trace_record_to_json(const canon::TraceRecord& r) {
  json assignments = json::array();
  for (const auto& a : r.team.assignments) {
    assignments.push_back({{"role", a.role}, {"entity", a.entity_id}, {"level", a.level}});
  }
  return {
      {"schema", kSchema},
      {"event", r.team.event_id},
      {"arrival_tick", r.arrival_tick},
      {"outcome", r.team.complete() ? "complete" : "partial"},
      {"assignments", std::move(assignments)},
      {"levels_visited", r.team.levels_visited},
      {"levels_climbed", r.team.levels_climbed()},
      {"missing", r.team.missing},
  };
}

json stats_to_json(const canon::ScenarioStats& s) {
  return {
      {"schema", kSchema},
      {"events", s.events},
      {"completed", s.completed},
      {"completion_rate", s.completion_rate},
      {"mean_levels_climbed", s.mean_levels_climbed},
      {"level_utilization", s.level_utilization},
      {"horizon", s.horizon},
  };
}

std::vector<double> read_loss_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      cell = cell.substr(first, cell.find_last_not_of(" \t") - first + 1);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size()) {
        // A non-numeric first line is a header.
        if (line_no == 1 && values.empty()) break;
        violation("line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
      }
      values.push_back(v);
    }
  }
  if (values.empty()) violation("loss trace is empty");
  return values;
}

resilience::ChannelModel channel_from_json(const json& j, const std::filesystem::path& base_dir) {
  using resilience::ChannelModel;
  if (!j.is_object()) violation("channel must be an object");
  const std::string kind = as_string(field(j, "kind"), "kind");
  ChannelModel c;
  if (kind == "constant") {
    expect_object(j, "channel", {"kind", "name", "loss"});
    c = ChannelModel::constant(as_double(field(j, "loss"), "loss"));
  } else if (kind == "piecewise") {
    expect_object(j, "channel", {"kind", "name", "segments"});
    const json& segs = field(j, "segments");
    if (!segs.is_array()) violation("field 'segments' must be an array");
    std::vector<ChannelModel::Segment> segments;
    for (const json& s : segs) {
      expect_object(s, "segment", {"start", "loss"});
      segments.push_back({as_uint(field(s, "start"), "start"), as_double(field(s, "loss"), "loss")});
    }
    c = ChannelModel::piecewise(std::move(segments));
  } else if (kind == "sinusoid") {
    expect_object(j, "channel", {"kind", "name", "low", "high", "period", "phase"});
    c = ChannelModel::sinusoid(as_double(field(j, "low"), "low"), as_double(field(j, "high"), "high"),
                               as_double(field(j, "period"), "period"), double_or(j, "phase", 0.0));
  } else if (kind == "trace") {
    expect_object(j, "channel", {"kind", "name", "values", "path"});
    if (j.contains("values") == j.contains("path")) violation("trace channel needs exactly one of 'values' or 'path'");
    std::vector<double> values;
    if (j.contains("values")) {
      if (!j.at("values").is_array()) violation("field 'values' must be an array");
      for (const json& v : j.at("values")) values.push_back(as_double(v, "values"));
    } else {
      const std::filesystem::path path = base_dir / as_string(j.at("path"), "path");
      std::ifstream in(path);
      if (!in) violation("cannot read loss trace " + path.string());
      values = read_loss_csv(in);
    }
    c = ChannelModel::from_trace(std::move(values));
  } else {
    violation("unknown channel kind '" + kind + "'");
  }
  try {
    c.validate();
  } catch (const Error& e) {
    violation(e.what());
  }
  return c;
}

namespace {

resilience::EstimatorConfig estimator_from_json(const json& j) {
  expect_object(j, "estimator", {"alpha", "trend", "beta", "prior"});
  resilience::EstimatorConfig e;
  e.alpha = double_or(j, "alpha", e.alpha);
  e.trend = bool_or(j, "trend", e.trend);
  e.beta = double_or(j, "beta", e.beta);
  e.prior = double_or(j, "prior", e.prior);
  return e;
}

}  // namespace

resilience::StrategyConfig strategy_from_json(const json& j) {
  using resilience::StrategyConfig;
  expect_object(j, "strategy", {"kind", "name", "target_epsilon", "window", "estimator", "monitor", "learner"});
  StrategyConfig s;
  const std::string kind = as_string(field(j, "kind"), "kind");
  if (kind == "elastic") {
    s.kind = StrategyConfig::Kind::Elastic;
  } else if (kind == "entelechic") {
    s.kind = StrategyConfig::Kind::Entelechic;
  } else if (kind == "antifragile") {
    s.kind = StrategyConfig::Kind::Antifragile;
  } else {
    violation("unknown strategy kind '" + kind + "'");
  }
  s.target_epsilon = double_or(j, "target_epsilon", s.target_epsilon);
  s.window = uint_or(j, "window", s.window);
  if (j.contains("estimator")) s.estimator = estimator_from_json(j.at("estimator"));
  if (j.contains("monitor")) {
    const std::string m = as_string(j.at("monitor"), "monitor");
    if (m == "replica") {
      s.monitor = resilience::Monitor::ReplicaLoss;
    } else if (m == "exact") {
      s.monitor = resilience::Monitor::Exact;
    } else {
      violation("unknown monitor '" + m + "'");
    }
  }
  if (s.kind == StrategyConfig::Kind::Antifragile) {
    const json& l = field(j, "learner");
    expect_object(l, "learner", {"candidates", "learning_rate", "cost_weight", "max_replicas"});
    s.learner.learning_rate = double_or(l, "learning_rate", s.learner.learning_rate);
    s.learner.cost_weight = double_or(l, "cost_weight", s.learner.cost_weight);
    s.learner.max_replicas = static_cast<std::uint32_t>(uint_or(l, "max_replicas", s.learner.max_replicas));
    const json& cands = field(l, "candidates");
    if (!cands.is_array() || cands.empty()) violation("learner needs a non-empty 'candidates' array");
    for (const json& c : cands) {
      expect_object(c, "candidate", {"name", "kind", "replicas", "estimator", "epsilon_scale"});
      resilience::Candidate cand;
      cand.name = as_string(field(c, "name"), "name");
      const std::string ck = as_string(field(c, "kind"), "kind");
      if (ck == "fixed") {
        cand.kind = resilience::Candidate::Kind::Fixed;
        cand.fixed_replicas = static_cast<std::uint32_t>(as_uint(field(c, "replicas"), "replicas"));
      } else if (ck == "adaptive") {
        cand.kind = resilience::Candidate::Kind::Adaptive;
        if (c.contains("estimator")) cand.estimator = estimator_from_json(c.at("estimator"));
        cand.epsilon_scale = double_or(c, "epsilon_scale", 1.0);
      } else {
        violation("unknown candidate kind '" + ck + "'");
      }
      s.learner.candidates.push_back(std::move(cand));
    }
  } else if (j.contains("learner")) {
    violation("'learner' is only valid for the antifragile strategy");
  }
  try {
    s.validate();
  } catch (const Error& e) {
    violation(e.what());
  }
  return s;
}

json report_to_json(const resilience::TransmissionReport& r, bool include_log) {
  json out = {
      {"schema", kSchema},
      {"messages", r.delivered + r.failed},
      {"delivered", r.delivered},
      {"failed", r.failed},
      {"total_replicas", r.total_replicas},
      {"delivery_rate", r.delivery_rate},
      {"mean_replicas", r.mean_replicas},
  };
  if (r.learner) {
    const auto& l = *r.learner;
    out["learner"] = {
        {"candidates", l.names},
        {"weights", l.weights},
        {"cumulative_rewards", l.cumulative_rewards},
        {"learning_rate", l.learning_rate},
        {"expected_reward", l.expected_reward},
        {"realized_reward", l.realized_reward},
        {"best_fixed_reward", l.best_fixed_reward},
        {"average_regret", l.average_regret},
        {"regret_bound", l.regret_bound},
    };
  }
  if (include_log) {
    json log = json::array();
    for (const auto& t : r.log) {
      log.push_back({{"tick", t.tick}, {"loss", t.loss}, {"replicas", t.replicas}, {"lost", t.lost},
                     {"delivered", t.delivered}});
    }
    out["log"] = std::move(log);
  }
  return out;
}

SortRequest population_from_json(const json& j) {
  expect_object(j, "population", {"schema", "monads", "environment"});
  SortRequest req;
  const json& monads = field(j, "monads");
  if (!monads.is_array()) violation("field 'monads' must be an array");
  for (const json& m : monads) {
    expect_object(m, "monad", {"id", "genotype", "intrinsic", "conflicts"});
    sorting::Monad monad;
    monad.id = as_string(field(m, "id"), "id");
    monad.genotype = RoleSeed::parse(as_string(field(m, "genotype"), "genotype"));
    monad.intrinsic = double_or(m, "intrinsic", 0.0);
    if (m.contains("conflicts")) {
      for (auto& id : string_list(m.at("conflicts"), "conflicts")) monad.conflicts.insert(std::move(id));
    }
    req.population.push_back(std::move(monad));
  }
  const json& env = field(j, "environment");
  expect_object(env, "environment", {"capacity", "contingency", "weights"});
  req.environment.capacity = as_uint(field(env, "capacity"), "capacity");
  if (env.contains("contingency")) {
    const json& c = env.at("contingency");
    if (!c.is_object()) violation("field 'contingency' must map role ids to weights");
    for (const auto& item : c.items()) {
      RoleId role = 0;
      try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(item.key(), &used);
        if (used != item.key().size()) throw std::invalid_argument(item.key());
        role = static_cast<RoleId>(v);
      } catch (const std::exception&) {
        violation("contingency key '" + item.key() + "' is not a role id");
      }
      req.environment.contingency[role] = as_double(item.value(), "contingency");
    }
  }
  if (env.contains("weights")) {
    const json& w = env.at("weights");
    expect_object(w, "weights", {"intrinsic", "contingent"});
    req.weights.intrinsic = double_or(w, "intrinsic", req.weights.intrinsic);
    req.weights.contingent = double_or(w, "contingent", req.weights.contingent);
  }
  return req;
}

json selection_to_json(const sorting::Selection& s) {
  json decisions = json::array();
  for (const auto& d : s.decisions) {
    const char* verdict = d.verdict == sorting::Verdict::Admitted            ? "admitted"
                          : d.verdict == sorting::Verdict::CapacityExhausted ? "capacity"
                                                                             : "conflict";
    json item = {{"id", d.id},
                 {"intrinsic", d.score.intrinsic},
                 {"contingent", d.score.contingent},
                 {"total", d.score.total},
                 {"verdict", verdict}};
    if (!d.blocked_by.empty()) item["blocked_by"] = d.blocked_by;
    decisions.push_back(std::move(item));
  }
  return {{"schema", kSchema}, {"selected", s.selected}, {"value", s.value}, {"decisions", std::move(decisions)}};
}

json oracle_to_json(const sorting::OracleResult& r) { return {{"selected", r.selected}, {"value", r.value}}; }

}  // namespace fso::io
