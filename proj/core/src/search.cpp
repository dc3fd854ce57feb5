#include "ramen/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ramen/parallel.hpp"

namespace ramen {

namespace {

// Next k-combination of [0, d) in lexicographic order; false when exhausted.
bool next_combination(std::vector<int>& comb, int d) {
  const int k = static_cast<int>(comb.size());
  for (int i = k - 1; i >= 0; --i) {
    if (comb[static_cast<std::size_t>(i)] < d - k + i) {
      ++comb[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<SubsetMask> enumerate_subsets(int d, std::optional<int> max_size) {
  const int cap = std::min(d, max_size.value_or(d));
  std::vector<SubsetMask> out;
  out.push_back({});
  for (int k = 1; k <= cap; ++k) {
    SubsetMask comb(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
    out.push_back(comb);
    while (next_combination(comb, d)) out.push_back(comb);
  }
  return out;
}

SelectionResult combinatorial_select(const MultiEnvDataset& data,
                                     std::optional<int> max_size,
                                     std::uint64_t seed, EnvAggregate mode,
                                     double lambda) {
  data.validate();
  const int d = data.dim();
  if (d > kHardDimLimit)
    throw std::invalid_argument(
        "combinatorial_select: d = " + std::to_string(d) + " implies 2^" +
        std::to_string(d) + " ≈ " + std::to_string(std::pow(2.0, d)) +
        " subset evaluations; the hard limit is d = " +
        std::to_string(kHardDimLimit));
  if (d > kAutoDimLimit && !max_size)
    throw std::invalid_argument(
        "combinatorial_select: d = " + std::to_string(d) + " > " +
        std::to_string(kAutoDimLimit) + " requires max_size to bound the 2^d search");
  if (max_size && *max_size < 0)
    throw std::invalid_argument("combinatorial_select: negative max_size");

  const std::vector<SubsetMask> subsets = enumerate_subsets(d, max_size);
  std::vector<SubsetObjective> table(subsets.size());

  parallel_for(static_cast<int>(subsets.size()), [&](int i) {
    const auto& s = subsets[static_cast<std::size_t>(i)];
    try {
      table[static_cast<std::size_t>(i)] = objective(data, s, mode, seed, lambda);
    } catch (const std::exception& e) {
      auto& row = table[static_cast<std::size_t>(i)];
      row.subset = s;
      row.ok = false;
      row.error = e.what();  // failed subsets score +inf
    }
  });

  // Enumeration order is (cardinality, lexicographic), so the first strict
  // minimum realizes the documented tie-break.
  int best = -1;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!table[i].ok) continue;
    if (best < 0 || table[i].combined < table[static_cast<std::size_t>(best)].combined)
      best = static_cast<int>(i);
  }
  if (best < 0)
    throw std::runtime_error(
        "combinatorial_select: every subset evaluation failed; first error: " +
        (table.empty() ? std::string("none") : table.front().error));

  const auto& win = table[static_cast<std::size_t>(best)];
  SelectionResult out;
  out.subset = win.subset;
  out.node = win.node;
  out.method = "combinatorial";
  out.loss_t = win.loss_t;
  out.loss_y = win.loss_y;
  out.combined = win.combined;
  out.table = std::move(table);
  out.seed = seed;
  return out;
}

}  // namespace ramen
