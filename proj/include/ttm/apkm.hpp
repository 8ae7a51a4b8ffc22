#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ttm/mixture.hpp"
#include "ttm/temporal.hpp"

namespace ttm {

/// Ordered action pair (first, second). Differences are always taken as
/// keypoint(first) - keypoint(second).
struct ActionPair {
  Action first;
  Action second;

  bool is_self() const { return first == second; }
  ActionPair reversed() const { return {second, first}; }

  /// "verb:object|verb:object"
  std::string key() const { return first.key() + "|" + second.key(); }
  static ActionPair parse(std::string_view key);

  friend bool operator==(const ActionPair&, const ActionPair&) = default;
  friend auto operator<=>(const ActionPair&, const ActionPair&) = default;
};

/// Temporal differences of the four keypoint channels, one entry per
/// collected observation pair.
struct KeypointDifferenceSets {
  std::vector<double> ss, se, es, ee;

  std::size_t size() const { return ss.size(); }
  const std::vector<double>& channel(Channel c) const;
};

/// Four mixtures over the keypoint differences of one ordered action pair.
struct ActionPairKeypointModel {
  ActionPair pair;
  std::array<GaussianMixture, 4> mixtures;  ///< indexed by Channel
  std::size_t pair_count = 0;

  const GaussianMixture& mixture(Channel c) const { return mixtures[static_cast<std::size_t>(c)]; }
  GaussianMixture& mixture(Channel c) { return mixtures[static_cast<std::size_t>(c)]; }

  friend bool operator==(const ActionPairKeypointModel&, const ActionPairKeypointModel&) = default;
};

using IntervalPair = std::pair<TimeInterval, TimeInterval>;
using ApkmMap = std::map<ActionPair, ActionPairKeypointModel>;

/// Ordered pairs (observation of a1, observation of a2) within each
/// demonstration, drawn from the merged left+right pool. An observation is
/// never paired with itself; for a1 == a2 only cross-hand pairs are kept.
std::vector<IntervalPair> collect_pairs(const std::vector<Demonstration>& demos, const Action& a1,
                                        const Action& a2);

/// Throws `EmptyPairSet` for an empty input.
KeypointDifferenceSets build_differences(const std::vector<IntervalPair>& pairs);

/// Throws `NoCooccurrence` when the two actions never co-occur.
ActionPairKeypointModel build_apkm(const std::vector<Demonstration>& demos, const Action& a1,
                                   const Action& a2, std::uint64_t seed,
                                   const EmOptions& options = {});

/// Actions appearing anywhere in the dataset, sorted.
std::vector<Action> action_vocabulary(const std::vector<Demonstration>& demos);

/// One model per co-occurring ordered pair, including (a, a) when a is
/// executed by both hands in some demonstration.
ApkmMap build_all(const std::vector<Demonstration>& demos, std::uint64_t seed,
                  const EmOptions& options = {});

/// Like `build_all`, restricted to pairs with first <= second. The other
/// orientation carries the same information (see `invert_profile`).
ApkmMap build_canonical(const std::vector<Demonstration>& demos, std::uint64_t seed,
                        const EmOptions& options = {});

}  // namespace ttm
