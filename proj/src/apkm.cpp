#include "ttm/apkm.hpp"

#include <set>

namespace ttm {

namespace {

struct PooledObservation {
  const ActionObservation* obs;
  Hand hand;
};

std::vector<PooledObservation> pool_of(const Demonstration& demo) {
  std::vector<PooledObservation> pool;
  pool.reserve(demo.left.size() + demo.right.size());
  for (const auto& o : demo.left) pool.push_back({&o, Hand::Left});
  for (const auto& o : demo.right) pool.push_back({&o, Hand::Right});
  return pool;
}

void append_pairs(const Demonstration& demo, const Action& a1, const Action& a2,
                  std::vector<IntervalPair>& out) {
  const auto pool = pool_of(demo);
  const bool self = a1 == a2;
  for (std::size_t j = 0; j < pool.size(); ++j) {
    if (pool[j].obs->action != a1) continue;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (j == k || pool[k].obs->action != a2) continue;
      if (self && pool[j].hand == pool[k].hand) continue;
      out.emplace_back(pool[j].obs->interval, pool[k].obs->interval);
    }
  }
}

ApkmMap build_pairs(const std::vector<Demonstration>& demos, std::uint64_t seed,
                    const EmOptions& options, bool canonical_only) {
  // Co-occurrence per demonstration; self pairs need both hands.
  std::set<ActionPair> pairs;
  for (const auto& demo : demos) {
    std::set<Action> left, right, all;
    for (const auto& o : demo.left) left.insert(o.action);
    for (const auto& o : demo.right) right.insert(o.action);
    all.insert(left.begin(), left.end());
    all.insert(right.begin(), right.end());
    for (const auto& a : all) {
      for (const auto& b : all) {
        if (canonical_only && b < a) continue;
        if (a == b && !(left.contains(a) && right.contains(a))) continue;
        pairs.insert({a, b});
      }
    }
  }
  ApkmMap out;
  for (const auto& p : pairs) out.emplace(p, build_apkm(demos, p.first, p.second, seed, options));
  return out;
}

}  // namespace

ActionPair ActionPair::parse(std::string_view key) {
  const auto bar = key.find('|');
  if (bar == std::string_view::npos) {
    throw make_error("InvalidActionPair", "expected \"verb:object|verb:object\", got \"" +
                                              std::string(key) + "\"");
  }
  return {Action::parse(key.substr(0, bar)), Action::parse(key.substr(bar + 1))};
}

const std::vector<double>& KeypointDifferenceSets::channel(Channel c) const {
  switch (c) {
    case Channel::SS: return ss;
    case Channel::SE: return se;
    case Channel::ES: return es;
    case Channel::EE: return ee;
  }
  return ss;
}

std::vector<IntervalPair> collect_pairs(const std::vector<Demonstration>& demos, const Action& a1,
                                        const Action& a2) {
  std::vector<IntervalPair> out;
  for (const auto& demo : demos) append_pairs(demo, a1, a2, out);
  return out;
}

KeypointDifferenceSets build_differences(const std::vector<IntervalPair>& pairs) {
  if (pairs.empty()) throw make_error("EmptyPairSet", "no observation pairs to difference");
  KeypointDifferenceSets d;
  d.ss.reserve(pairs.size());
  d.se.reserve(pairs.size());
  d.es.reserve(pairs.size());
  d.ee.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    d.ss.push_back(x.start - y.start);
    d.se.push_back(x.start - y.end);
    d.es.push_back(x.end - y.start);
    d.ee.push_back(x.end - y.end);
  }
  return d;
}

ActionPairKeypointModel build_apkm(const std::vector<Demonstration>& demos, const Action& a1,
                                   const Action& a2, std::uint64_t seed, const EmOptions& options) {
  const auto pairs = collect_pairs(demos, a1, a2);
  if (pairs.empty()) {
    throw make_error("NoCooccurrence", a1.key() + " and " + a2.key() + " never co-occur");
  }
  const auto diffs = build_differences(pairs);
  ActionPairKeypointModel m;
  m.pair = {a1, a2};
  m.pair_count = pairs.size();
  for (Channel c : kAllChannels) m.mixture(c) = fit_best(diffs.channel(c), seed, options);
  return m;
}

std::vector<Action> action_vocabulary(const std::vector<Demonstration>& demos) {
  std::set<Action> actions;
  for (const auto& demo : demos) {
    for (const auto& o : demo.left) actions.insert(o.action);
    for (const auto& o : demo.right) actions.insert(o.action);
  }
  return {actions.begin(), actions.end()};
}

ApkmMap build_all(const std::vector<Demonstration>& demos, std::uint64_t seed, const EmOptions& options) {
  return build_pairs(demos, seed, options, false);
}

ApkmMap build_canonical(const std::vector<Demonstration>& demos, std::uint64_t seed,
                        const EmOptions& options) {
  return build_pairs(demos, seed, options, true);
}

}  // namespace ttm
