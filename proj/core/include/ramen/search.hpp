#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ramen/invariance.hpp"

namespace ramen {

struct SelectionResult {
  SubsetMask subset;
  InvariantNode node = InvariantNode::Y;
  std::string method;  // "combinatorial" or "gumbel"
  double loss_t = 0.0;
  double loss_y = 0.0;
  double combined = 0.0;
  std::vector<SubsetObjective> table;  // every evaluated subset
  std::uint64_t seed = 0;
};

inline constexpr int kHardDimLimit = 20;   // 2^d enumeration refused beyond this
inline constexpr int kAutoDimLimit = 12;   // max_size required beyond this

// All subsets of [0, d) with cardinality <= max_size, ordered by
// (cardinality, lexicographic index order).
std::vector<SubsetMask> enumerate_subsets(int d, std::optional<int> max_size);

// Exhaustive search minimizing min(J_S(T), max(J_S(Y1), J_S(Y0))) over
// absolute studentized losses. Subsets that fail to evaluate score +inf and
// stay in the table with their error. Ties resolve to the smaller
// cardinality, then lexicographic order.
SelectionResult combinatorial_select(const MultiEnvDataset& data,
                                     std::optional<int> max_size,
                                     std::uint64_t seed,
                                     EnvAggregate mode = EnvAggregate::Max,
                                     double lambda = kDefaultRidgeLambda);

}  // namespace ramen
