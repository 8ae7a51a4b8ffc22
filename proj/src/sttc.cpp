#include "ttm/sttc.hpp"

#include <algorithm>
#include <set>

namespace ttm {

ConstraintNetwork::ConstraintNetwork(std::size_t n) : n_(n), rel_(n * n, RelationSet::all()) {
  for (std::size_t i = 0; i < n; ++i) rel_[i * n + i] = RelationSet(AllenRelation::Equals);
}

void ConstraintNetwork::set(std::size_t i, std::size_t j, RelationSet s) {
  rel_[i * n_ + j] = s;
  rel_[j * n_ + i] = s.inverse();
}

std::optional<ConstraintNetwork> path_consistency(ConstraintNetwork network) {
  const std::size_t n = network.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        RelationSet r = network.at(i, k);
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i || j == k) continue;
          r &= compose(network.at(i, j), network.at(j, k));
          if (r.empty()) return std::nullopt;
        }
        if (r != network.at(i, k)) {
          network.set(i, k, r);
          changed = true;
        }
      }
    }
  }
  return network;
}

ActionPair canonical(const ActionPair& p, bool* flipped) {
  const bool flip = p.second < p.first;
  if (flipped) *flipped = flip;
  return flip ? p.reversed() : p;
}

std::optional<std::map<ActionPair, RelationSet>> path_consistency(
    const std::map<ActionPair, RelationSet>& constraints) {
  std::set<Action> nodes;
  for (const auto& [p, s] : constraints) {
    nodes.insert(p.first);
    nodes.insert(p.second);
  }
  const std::vector<Action> index(nodes.begin(), nodes.end());
  auto id = [&](const Action& a) {
    return static_cast<std::size_t>(std::lower_bound(index.begin(), index.end(), a) - index.begin());
  };
  ConstraintNetwork net(index.size());
  for (const auto& [p, s] : constraints) {
    if (p.is_self()) {
      if (!s.contains(AllenRelation::Equals)) return std::nullopt;
      continue;
    }
    const auto i = id(p.first), j = id(p.second);
    net.set(i, j, net.at(i, j) & s);
    if (net.at(i, j).empty()) return std::nullopt;
  }
  auto reduced = path_consistency(std::move(net));
  if (!reduced) return std::nullopt;
  std::map<ActionPair, RelationSet> out;
  for (std::size_t i = 0; i < index.size(); ++i) {
    for (std::size_t j = i + 1; j < index.size(); ++j) out[{index[i], index[j]}] = reduced->at(i, j);
  }
  return out;
}

std::optional<AllenRelation> SttcSet::relation(const Action& a, const Action& b) const {
  bool flipped = false;
  const auto key = canonical({a, b}, &flipped);
  const auto it = constraints.find(key);
  if (it == constraints.end()) return std::nullopt;
  return flipped ? invert(it->second.relation) : it->second.relation;
}

namespace {

struct Candidate {
  ActionPair pair;
  std::vector<std::pair<AllenRelation, double>> ranked;  // membership >= theta, descending
};

}  // namespace

SttcSet infer_sttcs(const std::map<ActionPair, FuzzyAllenProfile>& profiles, const SolverConfig& config) {
  SttcSet result;

  // Canonical orientation; a profile given in canonical order takes
  // precedence over one converted from the reversed pair.
  std::map<ActionPair, FuzzyAllenProfile> canon;
  std::set<ActionPair> native;
  for (const auto& [pair, profile] : profiles) {
    if (pair.is_self()) {
      const double eq = profile[AllenRelation::Equals];
      if (eq >= config.theta) result.symmetric[pair.first] = eq;
      continue;
    }
    bool flipped = false;
    const auto key = canonical(pair, &flipped);
    if (!flipped) {
      canon[key] = profile;
      native.insert(key);
    } else if (!native.contains(key)) {
      canon[key] = invert_profile(profile);
    }
  }

  std::set<Action> nodes;
  for (const auto& [p, prof] : canon) {
    nodes.insert(p.first);
    nodes.insert(p.second);
  }
  const std::vector<Action> index(nodes.begin(), nodes.end());
  auto id = [&](const Action& a) {
    return static_cast<std::size_t>(std::lower_bound(index.begin(), index.end(), a) - index.begin());
  };

  std::vector<Candidate> candidates;
  for (const auto& [pair, profile] : canon) {
    Candidate c{pair, {}};
    for (AllenRelation r : kAllAllenRelations) {
      if (profile[r] >= config.theta) c.ranked.emplace_back(r, profile[r]);
    }
    if (c.ranked.empty()) continue;
    std::stable_sort(c.ranked.begin(), c.ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    // No single most likely relation: the evidence is contradictory.
    if (c.ranked.size() > 1 && c.ranked[0].second == c.ranked[1].second) continue;
    candidates.push_back(std::move(c));
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.ranked.front().second != b.ranked.front().second) {
      return a.ranked.front().second > b.ranked.front().second;
    }
    return a.pair < b.pair;
  });

  ConstraintNetwork network(index.size());
  for (const auto& c : candidates) {
    const auto i = id(c.pair.first), j = id(c.pair.second);
    const std::size_t tries = config.allow_fallback ? c.ranked.size() : 1;
    for (std::size_t t = 0; t < tries; ++t) {
      const auto [relation, membership] = c.ranked[t];
      if (!network.at(i, j).contains(relation)) continue;
      ConstraintNetwork trial = network;
      trial.set(i, j, relation);
      if (auto reduced = path_consistency(std::move(trial))) {
        network = std::move(*reduced);
        result.constraints[c.pair] = {relation, membership};
        break;
      }
    }
  }
  return result;
}

bool is_consistent(const SttcSet& set) {
  std::map<ActionPair, RelationSet> constraints;
  for (const auto& [pair, sttc] : set.constraints) constraints[pair] = sttc.relation;
  return path_consistency(constraints).has_value();
}

}  // namespace ttm
