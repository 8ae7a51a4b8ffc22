#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ttm/apkm.hpp"

namespace ttm {

/// Gaussian constraint on the difference of one keypoint channel of an
/// action pair, taken from a single mixture component.
struct Ssttc {
  ActionPair pair;
  Channel channel = Channel::SS;
  double mean = 0.0;
  double variance = 0.0;
  double weight = 0.0;

  friend bool operator==(const Ssttc&, const Ssttc&) = default;
};

struct ChannelCondition {
  Channel channel;
  PointRelation required;

  friend bool operator==(const ChannelCondition&, const ChannelCondition&) = default;
};

/// Smallest set of channel conditions that singles out `r` among the 13
/// relations, in channel order (ss, se, es, ee). Among equally small sets
/// the first in channel order is returned.
std::vector<ChannelCondition> necessary_channels(AllenRelation r);

struct SsttcOptions {
  /// Also report the redundant channels (diagnostic output). Channels
  /// without a suitable component are skipped instead of raising.
  bool all_channels = false;
};

/// For every necessary channel, the heaviest component whose mean has the
/// sign the condition requires (before: mean < -eps, after: mean > eps,
/// equals: |mean| <= eps). Throws `NoSuitableComponent` when a necessary
/// channel has none.
std::vector<Ssttc> extract_ssttcs(const ActionPairKeypointModel& apkm, AllenRelation r, double epsilon,
                                  const SsttcOptions& options = {});

struct PlanEntry {
  Action action;
  Hand hand = Hand::Left;
  double start = 0.0;
  double duration = 0.0;

  TimeInterval interval() const { return {start, start + duration}; }

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

struct TimelinePlan {
  std::vector<PlanEntry> entries;
  double objective_value = 0.0;
};

/// Inputs of the two-action synchronization problem for a pair (first,
/// second) whose relation places one action inside the other.
struct BimanualProblem {
  ActionPair pair;
  AllenRelation relation = AllenRelation::During;  ///< relation of (first, second)
  std::vector<Ssttc> ssttcs;                        ///< must contain ss and ee
  double mean_duration_first = 0.0;
  double mean_duration_second = 0.0;
  Hand hand_first = Hand::Right;
  Hand hand_second = Hand::Left;
  double epsilon = 0.1;
};

/// Relations handled by `plan_bimanual`: one interval contains the other
/// (during, contains, starts, started_by, finishes, finished_by, equals).
bool is_containment_relation(AllenRelation r);

/// Chooses the containing duration t_m and contained duration t_c minimizing
///   J = | |t_m - t_c| - (d_start + d_end) | + |t_m - T_m| + |t_c - T_c|
/// subject to the planned intervals classifying to `relation`, where d_start
/// and d_end are the absolute ss / ee offsets and T_m, T_c the mean
/// durations. The containing action starts at 0 and the contained one at
/// d_start. J is piecewise linear, so the minimum is found among the
/// vertices of its linear pieces. Ties prefer durations closest to the
/// means, then plans that reproduce the offsets.
/// Throws `UnsupportedRelation` or `InfeasibleDurations`.
TimelinePlan plan_bimanual(const BimanualProblem& problem);

/// Objective J for given containing/contained durations.
double synchronization_objective(double t_m, double t_c, double offset_sum, double mean_m, double mean_c);

}  // namespace ttm
