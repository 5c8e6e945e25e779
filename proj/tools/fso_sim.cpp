// fso-sim: command-line driver for seed development, modularity checks,
// random walks, canon scenarios, channel strategies and ultimate sort.
//
// Exit codes: 0 success, 1 check failed, 2 invalid input, 3 resource budget.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fso/canon.hpp"
#include "fso/dynamics.hpp"
#include "fso/embedding.hpp"
#include "fso/error.hpp"
#include "fso/io.hpp"
#include "fso/lattice.hpp"
#include "fso/resilience.hpp"
#include "fso/seed.hpp"
#include "fso/ultimate_sort.hpp"

namespace {

using fso::io::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;

const std::string kSchemaNote = "Output schema: " + std::string(fso::io::kSchema) +
                                ". Input layouts are described in docs/formats.md.";

struct Artifact {
  std::string path;  // empty: standard output
  std::string body;
};

// Writes every artifact only after all of them were produced; each file goes
// to a temporary sibling first and is renamed into place.
void commit(const std::vector<Artifact>& artifacts) {
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> staged;
  for (const Artifact& a : artifacts) {
    if (a.path.empty()) continue;
    std::filesystem::path target(a.path);
    std::filesystem::path temp = target;
    temp += ".tmp";
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << a.body;
    out.close();
    if (!out) {
      for (auto& [t, dst] : staged) std::filesystem::remove(t);
      std::filesystem::remove(temp);
      throw fso::Error(fso::ErrorCode::InvalidArgument, "cannot write " + a.path);
    }
    staged.emplace_back(temp, target);
  }
  for (auto& [temp, target] : staged) std::filesystem::rename(temp, target);
  for (const Artifact& a : artifacts) {
    if (a.path.empty()) std::cout << a.body;
  }
  std::cout.flush();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fso::Error(fso::ErrorCode::InvalidArgument, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw fso::Error(fso::ErrorCode::SchemaViolation, path + ": " + e.what());
  }
}

std::uint64_t resolve_budget(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FSO_SIM_BUDGET")) {
    std::uint64_t value = 0;
    std::istringstream in(env);
    if (!(in >> value) || !in.eof()) {
      throw fso::Error(fso::ErrorCode::InvalidArgument, std::string("FSO_SIM_BUDGET is not a count: ") + env);
    }
    return value;
  }
  return fso::kDefaultBudget;
}

int exit_code_for(fso::ErrorCode code) {
  switch (code) {
    case fso::ErrorCode::BudgetExceeded:
    case fso::ErrorCode::TooLarge:
      return kExitBudget;
    case fso::ErrorCode::NotSubseed:
      return kExitCheckFailed;
    default:
      return kExitInvalid;
  }
}

std::string dump_line(const json& j) { return j.dump() + "\n"; }

struct Options {
  std::optional<std::uint64_t> rng_seed;
  std::optional<std::uint64_t> budget;
  std::string out;
  std::string format;

  // develop
  std::string seed;
  std::string svg;
  double scale = fso::kDefaultScaleRatio;
  std::string angles = "spread";
  bool no_edges = false;
  std::string highlight;
  bool dimension = false;
  std::size_t scale_count = 8;

  // modularity
  std::string sub_seed;
  std::string super_seed;

  // walk / canon / channel / sort
  std::string config;
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> thinning;
  bool log = false;
  bool exact = false;
};

int cmd_develop(const Options& o) {
  const fso::RoleSeed seed = fso::RoleSeed::parse(o.seed);
  const std::uint64_t budget = resolve_budget(o.budget);
  const fso::SonLattice lattice(seed, budget);
  const fso::AngleRule rule = o.angles == "by-id" ? fso::AngleRule::by_id() : fso::AngleRule::spread();
  const fso::Embedding e = fso::embed(lattice, o.scale, rule);
  if (e.degenerate_scale) {
    std::cerr << "warning: DegenerateScale: scale " << o.scale << " >= 1/(max multiplicity + 1); markers may overlap\n";
  }

  json dump = fso::io::lattice_to_json(lattice);
  dump["embedding"] = {{"scale_ratio", e.scale_ratio}, {"degenerate_scale", e.degenerate_scale},
                       {"x", e.xs}, {"y", e.ys}};
  if (o.dimension) {
    dump["dimension"] = fso::io::dimension_to_json(fso::box_counting_dimension(e, fso::default_scales(e, o.scale_count)));
  }

  std::vector<Artifact> artifacts{{o.out, dump_line(dump)}};
  if (!o.svg.empty()) {
    fso::RenderOptions render;
    render.draw_edges = !o.no_edges;
    if (!o.highlight.empty()) {
      const auto report = fso::verify_modularity(fso::RoleSeed::parse(o.highlight), seed, budget);
      render.highlight = report.image;
    }
    artifacts.push_back({o.svg, fso::render_svg(lattice, e, render)});
  }
  commit(artifacts);
  return kExitOk;
}

int cmd_modularity(const Options& o) {
  const fso::RoleSeed a = fso::RoleSeed::parse(o.sub_seed);
  const fso::RoleSeed b = fso::RoleSeed::parse(o.super_seed);
  if (!fso::is_subseed(a, b)) {
    json report = {{"schema", fso::io::kSchema},
                   {"sub_seed", a.canonical_text()},
                   {"super_seed", b.canonical_text()},
                   {"passed", false},
                   {"reason", "NotSubseed"}};
    commit({{o.out, dump_line(report)}});
    return kExitCheckFailed;
  }
  const auto report = fso::verify_modularity(a, b, resolve_budget(o.budget));
  commit({{o.out, dump_line(fso::io::modularity_to_json(a, b, report))}});
  return report.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_walk(const Options& o) {
  auto req = fso::io::walk_from_json(read_json_file(o.config));
  if (o.rng_seed) {
    req.config.rng_seed = *o.rng_seed;
  } else if (!req.has_rng_seed) {
    throw fso::Error(fso::ErrorCode::InvalidArgument, "walk needs --rng-seed or an rng_seed field");
  }
  if (o.burn_in) req.burn_in = *o.burn_in;
  if (o.thinning) req.thinning = *o.thinning;

  const fso::SonLattice lattice(req.seed, resolve_budget(o.budget));
  if (!req.start.empty()) {
    auto start = lattice.find(req.start);
    if (!start) throw fso::Error(fso::ErrorCode::InvalidArgument, "start counts are not a node of the lattice");
    req.config.start = *start;
  }
  const auto path = fso::dynamics::walk(lattice, req.config);

  std::string body;
  if (o.format == "json") {
    const auto occ = fso::dynamics::occupancy(lattice, path, req.burn_in, req.thinning);
    const auto exact = fso::dynamics::stationary_exact(lattice);
    const auto power = fso::dynamics::stationary_power_iteration(lattice, req.config.laziness);
    json summary = {
        {"schema", fso::io::kSchema},
        {"seed", lattice.seed().canonical_text()},
        {"steps", req.config.steps},
        {"laziness", req.config.laziness},
        {"rng_seed", req.config.rng_seed},
        {"burn_in", req.burn_in},
        {"thinning", req.thinning},
        {"occupancy", fso::io::distribution_to_json(occ)},
        {"stationary", fso::io::distribution_to_json(exact)},
        {"power_iteration_residual", power.residual},
        {"power_iteration_max_abs_diff", [&] {
           double worst = 0.0;
           for (std::size_t i = 0; i < exact.size(); ++i) {
             worst = std::max(worst, std::abs(exact.weights[i] - power.distribution.weights[i]));
           }
           return worst;
         }()},
        {"tv_distance", fso::dynamics::total_variation(occ, exact)},
    };
    body = dump_line(summary);
  } else {
    body = dump_line({{"schema", fso::io::kSchema},
                      {"seed", lattice.seed().canonical_text()},
                      {"steps", req.config.steps},
                      {"laziness", req.config.laziness},
                      {"rng_seed", req.config.rng_seed}});
    for (std::size_t i = 0; i < path.size(); ++i) {
      const auto c = lattice.counts(path[i]);
      body += dump_line({{"step", i}, {"counts", std::vector<std::uint32_t>(c.begin(), c.end())}});
    }
  }
  commit({{o.out, body}});
  return kExitOk;
}

int cmd_canon(const Options& o) {
  auto req = fso::io::scenario_from_json(read_json_file(o.config), o.rng_seed);
  const auto trace = fso::canon::run_scenario(std::move(req.scenario.hierarchy), std::move(req.scenario.events),
                                              req.options);
  std::string body;
  for (const auto& record : trace.records) {
    json line = fso::io::trace_record_to_json(record);
    line["type"] = "event";
    body += dump_line(line);
  }
  json stats = fso::io::stats_to_json(trace.stats);
  stats["type"] = "stats";
  body += dump_line(stats);
  commit({{o.out, body}});
  return kExitOk;
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_channel(const Options& o) {
  const json config = read_json_file(o.config);
  const auto base = std::filesystem::path(o.config).parent_path();
  if (!config.is_object()) throw fso::Error(fso::ErrorCode::SchemaViolation, "channel config must be an object");
  for (const auto& item : config.items()) {
    const auto& k = item.key();
    if (k != "schema" && k != "channel" && k != "strategy" && k != "sweep" && k != "messages" && k != "rng_seed" &&
        k != "log") {
      throw fso::Error(fso::ErrorCode::SchemaViolation, "unknown field '" + k + "' in channel config");
    }
  }
  if (!config.contains("messages") || !config.at("messages").is_number_unsigned()) {
    throw fso::Error(fso::ErrorCode::SchemaViolation, "field 'messages' must be a positive integer");
  }
  const auto messages = config.at("messages").get<std::uint64_t>();
  std::uint64_t seed = 0;
  if (o.rng_seed) {
    seed = *o.rng_seed;
  } else if (config.contains("rng_seed") && config.at("rng_seed").is_number_unsigned()) {
    seed = config.at("rng_seed").get<std::uint64_t>();
  } else {
    throw fso::Error(fso::ErrorCode::InvalidArgument, "channel needs --rng-seed or an rng_seed field");
  }
  const bool with_log = o.log || (config.contains("log") && config.at("log").is_boolean() && config.at("log").get<bool>());

  if (config.contains("sweep")) {
    if (config.contains("channel") || config.contains("strategy")) {
      throw fso::Error(fso::ErrorCode::SchemaViolation, "'sweep' excludes top-level channel and strategy");
    }
    const json& sweep = config.at("sweep");
    if (!sweep.is_object() || !sweep.contains("channels") || !sweep.contains("strategies") ||
        !sweep.at("channels").is_array() || !sweep.at("strategies").is_array()) {
      throw fso::Error(fso::ErrorCode::SchemaViolation, "sweep needs 'channels' and 'strategies' arrays");
    }
    auto name_of = [](const json& j, const char* fallback, std::size_t i) {
      return j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>()
                                                            : fallback + std::to_string(i);
    };
    std::string body = "# schema: " + std::string(fso::io::kSchema) + "\n";
    body += "channel,strategy,messages,delivery_rate,mean_replicas,total_replicas\n";
    const auto& channels = sweep.at("channels");
    const auto& strategies = sweep.at("strategies");
    for (std::size_t ci = 0; ci < channels.size(); ++ci) {
      const auto channel = fso::io::channel_from_json(channels[ci], base);
      for (std::size_t si = 0; si < strategies.size(); ++si) {
        const auto strategy = fso::io::strategy_from_json(strategies[si]);
        const auto r = fso::resilience::simulate(channel, strategy, messages, seed, false);
        body += name_of(channels[ci], "channel", ci) + "," + name_of(strategies[si], "strategy", si) + "," +
                std::to_string(messages) + "," + csv_number(r.delivery_rate) + "," + csv_number(r.mean_replicas) +
                "," + std::to_string(r.total_replicas) + "\n";
      }
    }
    commit({{o.out, body}});
    return kExitOk;
  }

  if (!config.contains("channel") || !config.contains("strategy")) {
    throw fso::Error(fso::ErrorCode::SchemaViolation, "channel config needs 'channel' and 'strategy' (or 'sweep')");
  }
  const auto channel = fso::io::channel_from_json(config.at("channel"), base);
  const auto strategy = fso::io::strategy_from_json(config.at("strategy"));
  const auto report = fso::resilience::simulate(channel, strategy, messages, seed, with_log);
  std::string body;
  if (o.format == "csv") {
    body = "# schema: " + std::string(fso::io::kSchema) + "\n";
    body += "messages,delivered,failed,delivery_rate,mean_replicas,total_replicas\n";
    body += std::to_string(messages) + "," + std::to_string(report.delivered) + "," + std::to_string(report.failed) +
            "," + csv_number(report.delivery_rate) + "," + csv_number(report.mean_replicas) + "," +
            std::to_string(report.total_replicas) + "\n";
  } else {
    json out = fso::io::report_to_json(report, with_log);
    out["rng_seed"] = seed;
    body = dump_line(out);
  }
  commit({{o.out, body}});
  return kExitOk;
}

int cmd_sort(const Options& o) {
  const auto req = fso::io::population_from_json(read_json_file(o.config));
  const auto selection = fso::sorting::ultimate_sort(req.population, req.environment, req.weights);
  json out = fso::io::selection_to_json(selection);
  if (o.exact) out["oracle"] = fso::io::oracle_to_json(fso::sorting::exact_sort_oracle(req.population, req.environment, req.weights));
  commit({{o.out, dump_line(out)}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractal social organization simulator (" + std::string(fso::io::kSchema) + ")", "fso-sim"};
  app.require_subcommand(1);
  app.footer(kSchemaNote + "\nExit codes: 0 success, 1 check failed, 2 invalid input, 3 resource budget.");

  Options o;
  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", o.out, "Output path (default: standard output)"); };
  auto add_budget = [&](CLI::App* cmd) {
    cmd->add_option("--budget", o.budget, "Maximum lattice nodes (fallback: FSO_SIM_BUDGET, then 1000000)");
  };
  auto add_seed = [&](CLI::App* cmd) { cmd->add_option("--rng-seed", o.rng_seed, "Random seed (u64)"); };

  auto* develop = app.add_subcommand("develop", "Develop a seed into its SON lattice, embedding and figure");
  develop->add_option("seed", o.seed, "Seed, compact digits or comma-separated ids")->required();
  develop->add_option("--svg", o.svg, "Write the figure to this SVG file");
  develop->add_option("--scale", o.scale, "Scale ratio in (0, 1)");
  develop->add_option("--angles", o.angles, "Angle rule")->check(CLI::IsMember({"spread", "by-id"}));
  develop->add_flag("--no-edges", o.no_edges, "Omit Hasse edges from the figure");
  develop->add_option("--highlight", o.highlight, "Highlight the development of this sub-seed");
  develop->add_flag("--dimension", o.dimension, "Include a box-counting dimension estimate");
  develop->add_option("--scales", o.scale_count, "Number of halving box sizes for --dimension")->check(CLI::Range(3, 64));
  develop->add_option("--format", o.format, "Lattice dump format")->check(CLI::IsMember({"json"}));
  add_out(develop);
  add_budget(develop);
  develop->footer(kSchemaNote + "\nDump: {schema, seed, roles, multiplicities, size, nodes, edges, embedding[, dimension]}.");

  auto* modularity = app.add_subcommand("modularity", "Check that a sub-seed development embeds in a super-seed one");
  modularity->add_option("sub", o.sub_seed, "Sub-seed")->required();
  modularity->add_option("super", o.super_seed, "Super-seed")->required();
  modularity->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json"}));
  add_out(modularity);
  add_budget(modularity);
  modularity->footer(kSchemaNote + "\nExit 0 when injective, order-embedding and edge-preserving; 1 otherwise.");

  auto* walk = app.add_subcommand("walk", "Random walk over the SON lattice");
  walk->add_option("config", o.config, "Walk config JSON {seed, steps, start?, laziness?, burn_in?, thinning?, rng_seed?}")
      ->required();
  walk->add_option("--format", o.format, "jsonl: trajectory; json: occupancy and stationary law")
      ->check(CLI::IsMember({"jsonl", "json"}));
  walk->add_option("--burn-in", o.burn_in, "Steps discarded before counting occupancy");
  walk->add_option("--thinning", o.thinning, "Keep every n-th step for occupancy");
  add_seed(walk);
  add_out(walk);
  add_budget(walk);
  walk->footer(kSchemaNote);

  auto* canon = app.add_subcommand("canon", "Run a canon scenario (events, role matching, upward escalation)");
  canon->add_option("config", o.config, "Scenario JSON {levels, events, cooldown_ticks?} or {generate, rng_seed}")
      ->required();
  canon->add_option("--format", o.format, "Trace format")->check(CLI::IsMember({"jsonl"}));
  add_seed(canon);
  add_out(canon);
  canon->footer(kSchemaNote + "\nOne JSON line per event (type=event), then aggregate statistics (type=stats).");

  auto* channel = app.add_subcommand("channel", "Simulate redundancy strategies over a lossy channel");
  channel->add_option("config", o.config, "Channel config JSON {channel, strategy, messages, rng_seed?} or {sweep, ...}")
      ->required();
  channel->add_option("--format", o.format, "json report or csv table")->check(CLI::IsMember({"json", "csv"}));
  channel->add_flag("--log", o.log, "Include the per-message log in the JSON report");
  add_seed(channel);
  add_out(channel);
  channel->footer(kSchemaNote);

  auto* sort = app.add_subcommand("sort", "Capacity and compossibility constrained selection by QoE");
  sort->add_option("config", o.config, "Population JSON {monads, environment{capacity, contingency?, weights?}}")
      ->required();
  sort->add_flag("--exact", o.exact, "Also run the exhaustive oracle (at most 20 monads)");
  sort->add_option("--format", o.format, "Selection format")->check(CLI::IsMember({"json"}));
  add_out(sort);
  sort->footer(kSchemaNote);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*develop) return cmd_develop(o);
    if (*modularity) return cmd_modularity(o);
    if (*walk) return cmd_walk(o);
    if (*canon) return cmd_canon(o);
    if (*channel) return cmd_channel(o);
    if (*sort) return cmd_sort(o);
  } catch (const fso::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
