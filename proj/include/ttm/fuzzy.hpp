#pragma once

#include <array>
#include <vector>

#include "ttm/apkm.hpp"

namespace ttm {

struct FuzzyConfig {
  double epsilon = 0.1;  ///< half-width of the equality margin, seconds
};

/// Degrees to which the keypoint differences modelled by one mixture are
/// before / equal to / after zero.
struct FuzzyPointMembership {
  double before = 0.0;
  double equals = 1.0;
  double after = 0.0;

  double of(PointRelation r) const;
};

/// Degree of membership of an ordered action pair in each Allen relation.
/// Entries need not sum to one.
struct FuzzyAllenProfile {
  std::array<double, kAllenCount> membership{};

  double operator[](AllenRelation r) const { return membership[index_of(r)]; }
  double& operator[](AllenRelation r) { return membership[index_of(r)]; }

  /// Relation with the highest membership; the earliest relation wins ties.
  AllenRelation argmax() const;

  friend bool operator==(const FuzzyAllenProfile&, const FuzzyAllenProfile&) = default;
};

/// Indices of components whose mean lies strictly outside [-epsilon, epsilon].
std::vector<std::size_t> filtered_components(const GaussianMixture& m, double epsilon);

/// before = mass of the filtered mixture on (-inf, -epsilon],
/// after = mass on [epsilon, inf), equals = 1 - before - after.
FuzzyPointMembership fuzzy_point(const GaussianMixture& m, double epsilon);

/// Minimum (Lukasiewicz weak conjunction) over all four keypoint channels of
/// the point membership each relation's signature requires.
FuzzyAllenProfile fuzzy_allen(const ActionPairKeypointModel& apkm, const FuzzyConfig& config);

/// Profile of the reversed pair: membership'(r) = membership(invert(r)).
FuzzyAllenProfile invert_profile(const FuzzyAllenProfile& profile);

}  // namespace ttm
