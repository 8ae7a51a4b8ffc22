#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <vector>

#include "ttm/sttc.hpp"

namespace ttm {

struct ConfusionCounts {
  int tp = 0, fp = 0, fn = 0, tn = 0;

  /// tp / (tp + fp); 1 when nothing was predicted.
  double precision() const;
  /// tp / (tp + fn); 1 when the truth is empty.
  double recall() const;

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Per pair of `universe`: same relation -> tp; only predicted -> fp; only
/// in truth -> fn; neither -> tn; different relations -> fp and fn.
ConfusionCounts compare(const SttcSet& predicted, const SttcSet& truth, const std::set<ActionPair>& universe);

/// All unordered pairs of distinct actions appearing in the dataset.
std::set<ActionPair> pair_universe(const std::vector<Demonstration>& demos);

struct LearningConfig {
  FuzzyConfig fuzzy;
  SolverConfig solver;
  EmOptions em;
  std::uint64_t seed = 0;  ///< mixture fitting seed
};

/// APKMs -> fuzzy profiles -> STTCs, on canonical pairs only.
SttcSet learn_sttcs(const std::vector<Demonstration>& demos, const LearningConfig& config);

struct LearningCurvePoint {
  int n_demos = 0;
  double precision = 1.0;
  double recall = 1.0;
  ConfusionCounts counts;
};

/// Adds the demonstrations dataset[order[0]], dataset[order[1]], ... one at a
/// time and evaluates the learned STTCs after each addition.
std::vector<LearningCurvePoint> run_scenario(const std::vector<Demonstration>& dataset, const SttcSet& truth,
                                             const std::vector<std::size_t>& order,
                                             const LearningConfig& config);

struct ScenarioConfig {
  int n_scenarios = 100;
  int demos_per_scenario = 100;
  std::uint64_t seed = 0;  ///< scenario i shuffles with seed + i
  LearningConfig learning;
  int jobs = 1;
};

struct CurveStats {
  int n_demos = 0;
  double mean_precision = 0.0, std_precision = 0.0;
  double mean_recall = 0.0, std_recall = 0.0;
};

struct ScenarioResults {
  std::vector<std::vector<LearningCurvePoint>> scenarios;
  std::vector<CurveStats> curve;  ///< mean and population std per k
};

/// Demonstration order of scenario `index`: a seeded permutation truncated
/// to `demos_per_scenario`.
std::vector<std::size_t> scenario_order(std::size_t dataset_size, const ScenarioConfig& config, int index);

/// Throws `InvalidScenario` if demos_per_scenario exceeds the dataset.
ScenarioResults run_scenarios(const std::vector<Demonstration>& dataset, const SttcSet& truth,
                              const ScenarioConfig& config);

/// Header `n_demos,mean_precision,std_precision,mean_recall,std_recall`,
/// six decimals.
void write_curve_csv(std::ostream& os, const std::vector<CurveStats>& curve);

}  // namespace ttm
