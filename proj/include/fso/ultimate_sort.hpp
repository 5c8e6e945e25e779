#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fso/seed.hpp"

namespace fso::sorting {

struct Monad {
  std::string id;
  RoleSeed genotype = RoleSeed::parse("0");
  double intrinsic = 0.0;
  /// Ids of monads this one cannot coexist with.
  std::set<std::string> conflicts;
};

struct Environment {
  /// Maximum number of coexisting monads.
  std::uint64_t capacity = 0;
  std::map<RoleId, double> contingency;
};

struct QoEWeights {
  double intrinsic = 1.0;
  double contingent = 1.0;
};

struct QoEScore {
  double intrinsic = 0.0;
  double contingent = 0.0;
  double total = 0.0;
};

/// contingent = sum over roles of multiplicity * contingency weight;
/// total = w_i * intrinsic + w_c * contingent.
QoEScore qoe(const Monad& monad, const Environment& env, const QoEWeights& weights);

enum class Verdict { Admitted, CapacityExhausted, Conflict };

struct Decision {
  std::string id;
  QoEScore score;
  Verdict verdict = Verdict::Admitted;
  /// For Conflict: the admitted monad that blocked this one.
  std::string blocked_by;
};

struct Selection {
  /// Admitted ids in admission order.
  std::vector<std::string> selected;
  /// One entry per monad, in the order they were considered.
  std::vector<Decision> decisions;
  double value = 0.0;
};

/// Throws AsymmetricConflicts when a conflict is not mirrored, and
/// InvalidArgument for unknown ids, self-conflicts, duplicate ids, or
/// negative weights.
void validate_population(std::span<const Monad> population, const QoEWeights& weights);

/// Greedy admission by descending total QoE (ties by ascending id): a monad
/// enters while capacity remains and it conflicts with nobody admitted.
Selection ultimate_sort(std::span<const Monad> population, const Environment& env, const QoEWeights& weights);

inline constexpr std::size_t kOracleLimit = 20;

struct OracleResult {
  /// Sorted ids of the best feasible set.
  std::vector<std::string> selected;
  double value = 0.0;
};

/// Exhaustive search over all subsets for the feasible set of largest total
/// QoE; among equal values the lexicographically smallest sorted id list
/// wins. Throws TooLarge above kOracleLimit monads.
OracleResult exact_sort_oracle(std::span<const Monad> population, const Environment& env, const QoEWeights& weights);

using Equivalence = std::function<bool(const RoleSeed&, const RoleSeed&)>;

/// Default relation: identical canonical multiset.
bool same_class(const RoleSeed& a, const RoleSeed& b);

struct FidelityResult {
  bool faithful = true;
  /// Index i of the first generation not equivalent to generation i - 1.
  std::optional<std::size_t> first_violation;

  explicit operator bool() const noexcept { return faithful; }
};

/// Checks every consecutive pair of a lineage under `relation`. Throws
/// InvalidArgument on an empty lineage.
FidelityResult fidelity_check(std::span<const RoleSeed> lineage, const Equivalence& relation = same_class);

}  // namespace fso::sorting
