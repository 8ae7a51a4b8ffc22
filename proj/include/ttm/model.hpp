#pragma once

#include <string>
#include <vector>

#include "ttm/eval.hpp"
#include "ttm/ssttc.hpp"

namespace ttm {

struct ActionStats {
  Action action;
  double mean_duration = 0.0;
  Hand hand = Hand::Left;  ///< hand that executed the action most often
  int count = 0;

  friend bool operator==(const ActionStats&, const ActionStats&) = default;
};

/// Subsymbolic constraints quantifying one assigned relation.
struct SsttcGroup {
  ActionPair pair;
  AllenRelation relation = AllenRelation::Equals;
  std::vector<Ssttc> constraints;

  friend bool operator==(const SsttcGroup&, const SsttcGroup&) = default;
};

/// An assigned relation for which no subsymbolic constraints could be
/// extracted (mixtures disagree with the relation).
struct Unquantified {
  ActionPair pair;
  AllenRelation relation = AllenRelation::Equals;
  std::string reason;

  friend bool operator==(const Unquantified&, const Unquantified&) = default;
};

/// Everything learned from one set of demonstrations.
struct TaskModel {
  static constexpr int kFormat = 1;

  std::string task;
  LearningConfig config;
  std::vector<ActionStats> actions;
  ApkmMap apkms;
  std::map<ActionPair, FuzzyAllenProfile> profiles;
  SttcSet sttcs;
  std::vector<SsttcGroup> ssttcs;
  std::vector<Unquantified> unquantified;

  const ActionStats* stats(const Action& a) const;
  const SsttcGroup* ssttc_group(const ActionPair& canonical_pair) const;
};

std::vector<ActionStats> action_statistics(const std::vector<Demonstration>& demos);

/// Full pipeline: APKMs for every ordered pair, fuzzy profiles, STTCs over
/// canonical pairs, then SSTTCs for every assigned relation.
TaskModel learn_model(const std::vector<Demonstration>& demos, std::string task, const LearningConfig& config);

/// Synchronization problem for a pair of the model; throws `QueryError` if
/// the pair is unconstrained or its relation is not a containment relation.
BimanualProblem make_bimanual_problem(const TaskModel& model, const ActionPair& pair);

}  // namespace ttm
