#include "fso/ultimate_sort.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "fso/error.hpp"

namespace fso::sorting {

QoEScore qoe(const Monad& monad, const Environment& env, const QoEWeights& weights) {
  QoEScore s;
  s.intrinsic = monad.intrinsic;
  for (const auto& [role, count] : monad.genotype.multiplicities()) {
    auto it = env.contingency.find(role);
    if (it != env.contingency.end()) s.contingent += static_cast<double>(count) * it->second;
  }
  s.total = weights.intrinsic * s.intrinsic + weights.contingent * s.contingent;
  return s;
}

void validate_population(std::span<const Monad> population, const QoEWeights& weights) {
  if (weights.intrinsic < 0.0 || weights.contingent < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "QoE weights must be nonnegative");
  }
  std::map<std::string, const Monad*> by_id;
  for (const Monad& m : population) {
    if (!(m.intrinsic >= 0.0)) throw Error(ErrorCode::InvalidArgument, "monad " + m.id + " has negative intrinsic quality");
    if (!by_id.emplace(m.id, &m).second) throw Error(ErrorCode::InvalidArgument, "duplicate monad id " + m.id);
  }
  for (const Monad& m : population) {
    for (const std::string& other : m.conflicts) {
      if (other == m.id) throw Error(ErrorCode::InvalidArgument, "monad " + m.id + " conflicts with itself");
      auto it = by_id.find(other);
      if (it == by_id.end()) throw Error(ErrorCode::InvalidArgument, "monad " + m.id + " names unknown " + other);
      if (!it->second->conflicts.contains(m.id)) {
        throw Error(ErrorCode::AsymmetricConflicts, m.id + " conflicts with " + other + " but not conversely");
      }
    }
  }
}

Selection ultimate_sort(std::span<const Monad> population, const Environment& env, const QoEWeights& weights) {
  validate_population(population, weights);

  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<QoEScore> scores;
  scores.reserve(population.size());
  for (const Monad& m : population) scores.push_back(qoe(m, env, weights));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a].total != scores[b].total) return scores[a].total > scores[b].total;
    return population[a].id < population[b].id;
  });

  Selection out;
  for (std::size_t i : order) {
    const Monad& m = population[i];
    Decision d{m.id, scores[i], Verdict::Admitted, {}};
    auto blocker = std::find_if(out.selected.begin(), out.selected.end(),
                                [&](const std::string& id) { return m.conflicts.contains(id); });
    if (out.selected.size() >= env.capacity) {
      d.verdict = Verdict::CapacityExhausted;
    } else if (blocker != out.selected.end()) {
      d.verdict = Verdict::Conflict;
      d.blocked_by = *blocker;
    } else {
      out.selected.push_back(m.id);
      out.value += scores[i].total;
    }
    out.decisions.push_back(std::move(d));
  }
  return out;
}

OracleResult exact_sort_oracle(std::span<const Monad> population, const Environment& env, const QoEWeights& weights) {
  if (population.size() > kOracleLimit) {
    throw Error(ErrorCode::TooLarge, std::to_string(population.size()) + " monads exceed the exhaustive limit of " +
                                         std::to_string(kOracleLimit));
  }
  validate_population(population, weights);
  const std::size_t n = population.size();

  // Bitmask of conflicting partners per monad, positions in id order so that
  // subsets map directly onto sorted id lists.
  std::vector<std::size_t> by_id(n);
  std::iota(by_id.begin(), by_id.end(), std::size_t{0});
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) { return population[a].id < population[b].id; });
  std::map<std::string, std::size_t> position;
  for (std::size_t p = 0; p < n; ++p) position[population[by_id[p]].id] = p;
  std::vector<std::uint32_t> clash(n, 0);
  std::vector<double> value(n);
  for (std::size_t p = 0; p < n; ++p) {
    const Monad& m = population[by_id[p]];
    value[p] = qoe(m, env, weights).total;
    for (const std::string& other : m.conflicts) clash[p] |= std::uint32_t{1} << position[other];
  }

  auto ids_of = [&](std::uint32_t mask) {
    std::vector<std::string> ids;
    for (std::size_t p = 0; p < n; ++p) {
      if (mask & (std::uint32_t{1} << p)) ids.push_back(population[by_id[p]].id);
    }
    return ids;
  };

  std::uint32_t best_mask = 0;
  double best_value = 0.0;
  const std::uint32_t limit = n == 0 ? 1 : (std::uint32_t{1} << n);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    if (static_cast<std::uint64_t>(std::popcount(mask)) > env.capacity) continue;
    bool feasible = true;
    double total = 0.0;
    for (std::size_t p = 0; p < n && feasible; ++p) {
      if (!(mask & (std::uint32_t{1} << p))) continue;
      feasible = (clash[p] & mask) == 0;
      total += value[p];
    }
    if (!feasible) continue;
    if (total > best_value || (total == best_value && ids_of(mask) < ids_of(best_mask))) {
      best_value = total;
      best_mask = mask;
    }
  }
  return {ids_of(best_mask), best_value};
}

bool same_class(const RoleSeed& a, const RoleSeed& b) { return a == b; }

FidelityResult fidelity_check(std::span<const RoleSeed> lineage, const Equivalence& relation) {
  if (lineage.empty()) throw Error(ErrorCode::InvalidArgument, "lineage is empty");
  for (std::size_t i = 1; i < lineage.size(); ++i) {
    if (!relation(lineage[i - 1], lineage[i])) return {false, i};
  }
  return {true, std::nullopt};
}

}  // namespace fso::sorting
