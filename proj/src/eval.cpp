#include "ttm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

namespace ttm {

double ConfusionCounts::precision() const { return tp + fp == 0 ? 1.0 : double(tp) / double(tp + fp); }

double ConfusionCounts::recall() const { return tp + fn == 0 ? 1.0 : double(tp) / double(tp + fn); }

ConfusionCounts compare(const SttcSet& predicted, const SttcSet& truth, const std::set<ActionPair>& universe) {
  ConfusionCounts c;
  for (const auto& pair : universe) {
    const auto p = predicted.relation(pair.first, pair.second);
    const auto t = truth.relation(pair.first, pair.second);
    if (p && t) {
      if (*p == *t) {
        ++c.tp;
      } else {
        ++c.fp;
        ++c.fn;
      }
    } else if (p) {
      ++c.fp;
    } else if (t) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

std::set<ActionPair> pair_universe(const std::vector<Demonstration>& demos) {
  const auto actions = action_vocabulary(demos);
  std::set<ActionPair> out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    for (std::size_t j = i + 1; j < actions.size(); ++j) out.insert({actions[i], actions[j]});
  }
  return out;
}

SttcSet learn_sttcs(const std::vector<Demonstration>& demos, const LearningConfig& config) {
  std::map<ActionPair, FuzzyAllenProfile> profiles;
  for (const auto& [pair, apkm] : build_canonical(demos, config.seed, config.em)) {
    profiles.emplace(pair, fuzzy_allen(apkm, config.fuzzy));
  }
  return infer_sttcs(profiles, config.solver);
}

std::vector<LearningCurvePoint> run_scenario(const std::vector<Demonstration>& dataset, const SttcSet& truth,
                                             const std::vector<std::size_t>& order,
                                             const LearningConfig& config) {
  const auto universe = pair_universe(dataset);
  std::vector<Demonstration> prefix;
  std::vector<LearningCurvePoint> curve;
  for (std::size_t k = 0; k < order.size(); ++k) {
    prefix.push_back(dataset.at(order[k]));
    const auto predicted = learn_sttcs(prefix, config);
    const auto counts = compare(predicted, truth, universe);
    curve.push_back({static_cast<int>(k + 1), counts.precision(), counts.recall(), counts});
  }
  return curve;
}

std::vector<std::size_t> scenario_order(std::size_t dataset_size, const ScenarioConfig& config, int index) {
  std::vector<std::size_t> order(dataset_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(index));
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(static_cast<std::size_t>(config.demos_per_scenario));
  return order;
}

ScenarioResults run_scenarios(const std::vector<Demonstration>& dataset, const SttcSet& truth,
                              const ScenarioConfig& config) {
  if (config.n_scenarios < 1) throw make_error("InvalidScenario", "at least one scenario is required");
  if (config.demos_per_scenario < 1 ||
      static_cast<std::size_t>(config.demos_per_scenario) > dataset.size()) {
    throw make_error("InvalidScenario", "demos per scenario (" + std::to_string(config.demos_per_scenario) +
                                            ") must lie in [1, " + std::to_string(dataset.size()) + "]");
  }

  ScenarioResults results;
  results.scenarios.resize(static_cast<std::size_t>(config.n_scenarios));
  auto work = [&](int i) {
    results.scenarios[static_cast<std::size_t>(i)] =
        run_scenario(dataset, truth, scenario_order(dataset.size(), config, i), config.learning);
  };
  const int jobs = std::clamp(config.jobs, 1, config.n_scenarios);
  if (jobs == 1) {
    for (int i = 0; i < config.n_scenarios; ++i) work(i);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&, t] {
        for (int i = t; i < config.n_scenarios; i += jobs) work(i);
      });
    }
  }

  const auto n = static_cast<double>(config.n_scenarios);
  for (int k = 0; k < config.demos_per_scenario; ++k) {
    CurveStats s;
    s.n_demos = k + 1;
    for (const auto& sc : results.scenarios) {
      s.mean_precision += sc[static_cast<std::size_t>(k)].precision;
      s.mean_recall += sc[static_cast<std::size_t>(k)].recall;
    }
    s.mean_precision /= n;
    s.mean_recall /= n;
    for (const auto& sc : results.scenarios) {
      const auto& pt = sc[static_cast<std::size_t>(k)];
      s.std_precision += (pt.precision - s.mean_precision) * (pt.precision - s.mean_precision);
      s.std_recall += (pt.recall - s.mean_recall) * (pt.recall - s.mean_recall);
    }
    s.std_precision = std::sqrt(s.std_precision / n);
    s.std_recall = std::sqrt(s.std_recall / n);
    results.curve.push_back(s);
  }
  return results;
}

void write_curve_csv(std::ostream& os, const std::vector<CurveStats>& curve) {
  os << "n_demos,mean_precision,std_precision,mean_recall,std_recall\n";
  char line[160];
  for (const auto& s : curve) {
    std::snprintf(line, sizeof line, "%d,%.6f,%.6f,%.6f,%.6f\n", s.n_demos, s.mean_precision, s.std_precision,
                  s.mean_recall, s.std_recall);
    os << line;
  }
}

}  // namespace ttm
