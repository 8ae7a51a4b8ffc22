#include "ttm/model.hpp"

#include <map>

namespace ttm {

const ActionStats* TaskModel::stats(const Action& a) const {
  for (const auto& s : actions) {
    if (s.action == a) return &s;
  }
  return nullptr;
}

const SsttcGroup* TaskModel::ssttc_group(const ActionPair& canonical_pair) const {
  for (const auto& g : ssttcs) {
    if (g.pair == canonical_pair) return &g;
  }
  return nullptr;
}

std::vector<ActionStats> action_statistics(const std::vector<Demonstration>& demos) {
  struct Acc {
    double total = 0.0;
    int count = 0, left = 0, right = 0;
  };
  std::map<Action, Acc> acc;
  for (const auto& d : demos) {
    for (Hand hand : {Hand::Left, Hand::Right}) {
      for (const auto& o : d.hand(hand)) {
        auto& a = acc[o.action];
        a.total += o.interval.duration();
        ++a.count;
        ++(hand == Hand::Left ? a.left : a.right);
      }
    }
  }
  std::vector<ActionStats> out;
  for (const auto& [action, a] : acc) {
    out.push_back({action, a.total / a.count, a.left >= a.right ? Hand::Left : Hand::Right, a.count});
  }
  return out;
}

TaskModel learn_model(const std::vector<Demonstration>& demos, std::string task, const LearningConfig& config) {
  TaskModel model;
  model.task = std::move(task);
  model.config = config;
  model.actions = action_statistics(demos);
  model.apkms = build_all(demos, config.seed, config.em);

  for (const auto& [pair, apkm] : model.apkms) model.profiles.emplace(pair, fuzzy_allen(apkm, config.fuzzy));

  std::map<ActionPair, FuzzyAllenProfile> canonical_profiles;
  for (const auto& [pair, profile] : model.profiles) {
    if (pair.is_self() || pair.first < pair.second) canonical_profiles.emplace(pair, profile);
  }
  model.sttcs = infer_sttcs(canonical_profiles, config.solver);

  auto quantify = [&](const ActionPair& pair, AllenRelation relation) {
    const auto it = model.apkms.find(pair);
    if (it == model.apkms.end()) return;
    try {
      model.ssttcs.push_back({pair, relation, extract_ssttcs(it->second, relation, config.fuzzy.epsilon)});
    } catch (const Error& e) {
      model.unquantified.push_back({pair, relation, e.what()});
    }
  };
  for (const auto& [pair, sttc] : model.sttcs.constraints) quantify(pair, sttc.relation);
  for (const auto& [action, membership] : model.sttcs.symmetric) quantify({action, action}, AllenRelation::Equals);
  return model;
}

BimanualProblem make_bimanual_problem(const TaskModel& model, const ActionPair& pair) {
  if (pair.is_self()) throw make_error("QueryError", "synchronization needs two distinct actions");
  const auto relation = model.sttcs.relation(pair.first, pair.second);
  if (!relation) throw make_error("QueryError", pair.key() + " is not constrained in the model");
  if (!is_containment_relation(*relation)) {
    throw make_error("QueryError", pair.key() + " is constrained as " + std::string(to_string(*relation)) +
                                       ", which cannot be synchronized by containment");
  }
  bool flipped = false;
  const auto key = canonical(pair, &flipped);
  const auto* group = model.ssttc_group(key);
  if (!group) throw make_error("QueryError", pair.key() + " has no subsymbolic constraints");

  BimanualProblem p;
  p.pair = pair;
  p.relation = *relation;
  p.epsilon = model.config.fuzzy.epsilon;
  for (auto s : group->constraints) {
    if (flipped) {
      // Differences of the reversed pair: negate, and swap the mixed channels.
      s.pair = pair;
      s.mean = -s.mean;
      if (s.channel == Channel::SE) {
        s.channel = Channel::ES;
      } else if (s.channel == Channel::ES) {
        s.channel = Channel::SE;
      }
    }
    p.ssttcs.push_back(s);
  }
  const auto* first = model.stats(pair.first);
  const auto* second = model.stats(pair.second);
  if (!first || !second) throw make_error("QueryError", "unknown action in " + pair.key());
  p.mean_duration_first = first->mean_duration;
  p.mean_duration_second = second->mean_duration;
  p.hand_first = first->hand;
  p.hand_second = second->hand;
  return p;
}

}  // namespace ttm
