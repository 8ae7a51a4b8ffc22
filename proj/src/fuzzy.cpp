#include "ttm/fuzzy.hpp"

#include <algorithm>

namespace ttm {

double FuzzyPointMembership::of(PointRelation r) const {
  switch (r) {
    case PointRelation::Before: return before;
    case PointRelation::Equals: return equals;
    case PointRelation::After: return after;
  }
  return 0.0;
}

AllenRelation FuzzyAllenProfile::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kAllenCount; ++i) {
    if (membership[i] > membership[best]) best = i;
  }
  return static_cast<AllenRelation>(best);
}

std::vector<std::size_t> filtered_components(const GaussianMixture& m, double epsilon) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double mu = m.components[i].mean;
    if (mu < -epsilon || epsilon < mu) out.push_back(i);
  }
  return out;
}

FuzzyPointMembership fuzzy_point(const GaussianMixture& m, double epsilon) {
  const auto kept = filtered_components(m, epsilon);
  FuzzyPointMembership p;
  p.before = mass(m, -kInf, -epsilon, kept);
  p.after = mass(m, epsilon, kInf, kept);
  p.equals = 1.0 - p.before - p.after;
  return p;
}

FuzzyAllenProfile fuzzy_allen(const ActionPairKeypointModel& apkm, const FuzzyConfig& config) {
  std::array<FuzzyPointMembership, 4> channel;
  for (Channel c : kAllChannels) {
    channel[static_cast<std::size_t>(c)] = fuzzy_point(apkm.mixture(c), config.epsilon);
  }
  FuzzyAllenProfile profile;
  for (AllenRelation r : kAllAllenRelations) {
    const auto sig = signature_of(r);
    double degree = 1.0;
    for (Channel c : kAllChannels) {
      degree = std::min(degree, channel[static_cast<std::size_t>(c)].of(at(sig, c)));
    }
    profile[r] = std::clamp(degree, 0.0, 1.0);
  }
  return profile;
}

FuzzyAllenProfile invert_profile(const FuzzyAllenProfile& profile) {
  FuzzyAllenProfile out;
  for (AllenRelation r : kAllAllenRelations) out[r] = profile[invert(r)];
  return out;
}

}  // namespace ttm
