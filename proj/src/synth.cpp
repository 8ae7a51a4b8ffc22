#include "ttm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

namespace ttm {

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw make_error("InvalidConfig", field + ": " + what);
}

// Relation of each unordered action pair in one mode; nullopt when the
// action occurs several times with disagreeing relations.
std::map<ActionPair, std::optional<AllenRelation>> mode_relations(const ModeTemplate& mode, double epsilon) {
  std::map<ActionPair, std::optional<AllenRelation>> out;
  for (const auto& x : mode.entries) {
    for (const auto& y : mode.entries) {
      if (!(x.action < y.action)) continue;
      const auto r = classify_interval({x.start, x.start + x.duration}, {y.start, y.start + y.duration}, epsilon);
      const ActionPair key{x.action, y.action};
      auto it = out.find(key);
      if (it == out.end()) {
        out.emplace(key, r);
      } else if (it->second && *it->second != r) {
        it->second.reset();
      }
    }
  }
  return out;
}

bool symmetric_in(const ModeTemplate& mode, const Action& a, double epsilon) {
  std::vector<TimeInterval> left, right;
  for (const auto& e : mode.entries) {
    if (e.action != a) continue;
    (e.hand == Hand::Left ? left : right).push_back({e.start, e.start + e.duration});
  }
  if (left.size() != 1 || right.size() != 1) return false;
  return classify_interval(left[0], right[0], epsilon) == AllenRelation::Equals;
}

std::vector<std::size_t> balanced_assignment(const std::vector<double>& weights, int n, std::mt19937_64& rng) {
  const std::size_t k = weights.size();
  std::vector<int> counts(k);
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double exact = weights[i] * n;
    counts[i] = static_cast<int>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - counts[i], i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[remainders[i % k].second];

  std::vector<std::size_t> modes;
  for (std::size_t i = 0; i < k; ++i) modes.insert(modes.end(), static_cast<std::size_t>(counts[i]), i);
  std::shuffle(modes.begin(), modes.end(), rng);
  return modes;
}

}  // namespace

void validate_config(const GeneratorConfig& c) {
  if (c.modes.empty()) config_error("modes", "at least one mode template is required");
  if (c.mode_weights.size() != c.modes.size()) {
    config_error("mode_weights", "expected one weight per mode");
  }
  double total = 0.0;
  for (double w : c.mode_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) config_error("mode_weights", "weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) config_error("mode_weights", "weights must sum to 1");
  if (!(c.jitter_sigma >= 0.0) || !std::isfinite(c.jitter_sigma)) {
    config_error("jitter_sigma", "must be a finite non-negative number");
  }
  if (c.n_demos < 1) config_error("n_demos", "must be at least 1");
  if (!(c.epsilon > 0.0)) config_error("epsilon", "must be positive");

  for (const auto& mode : c.modes) {
    if (mode.entries.empty()) config_error("modes", "mode '" + mode.name + "' has no entries");
    for (Hand hand : {Hand::Left, Hand::Right}) {
      std::vector<TemplateEntry> seq;
      for (const auto& e : mode.entries) {
        if (e.action.verb.empty() || e.action.object.empty()) {
          config_error("modes", "mode '" + mode.name + "' has an empty action name");
        }
        if (!(e.duration > 2.0 * c.epsilon) || !std::isfinite(e.start) || !std::isfinite(e.duration)) {
          config_error("modes", "mode '" + mode.name + "': duration of " + e.action.key() +
                                    " must exceed twice epsilon");
        }
        if (e.hand == hand) seq.push_back(e);
      }
      std::stable_sort(seq.begin(), seq.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
      for (std::size_t i = 1; i < seq.size(); ++i) {
        if (seq[i - 1].start + seq[i - 1].duration > seq[i].start) {
          config_error("modes", "mode '" + mode.name + "': " + seq[i].action.key() + " overlaps " +
                                    seq[i - 1].action.key() + " on the " + std::string(to_string(hand)) +
                                    " hand");
        }
      }
    }
  }
}

SttcSet derive_ground_truth(const std::vector<ModeTemplate>& modes, double epsilon) {
  SttcSet truth;
  if (modes.empty()) return truth;

  std::vector<std::map<ActionPair, std::optional<AllenRelation>>> per_mode;
  for (const auto& m : modes) per_mode.push_back(mode_relations(m, epsilon));

  for (const auto& [pair, relation] : per_mode.front()) {
    if (!relation) continue;
    bool invariant = true;
    for (std::size_t i = 1; i < per_mode.size() && invariant; ++i) {
      const auto it = per_mode[i].find(pair);
      invariant = it != per_mode[i].end() && it->second == relation;
    }
    if (invariant) truth.constraints[pair] = {*relation, 1.0};
  }

  std::set<Action> actions;
  for (const auto& e : modes.front().entries) actions.insert(e.action);
  for (const auto& a : actions) {
    const bool everywhere = std::all_of(modes.begin(), modes.end(),
                                        [&](const ModeTemplate& m) { return symmetric_in(m, a, epsilon); });
    if (everywhere) truth.symmetric[a] = 1.0;
  }
  return truth;
}

Demonstration sample_demo(const GeneratorConfig& config, const ModeTemplate& mode, std::mt19937_64& rng,
                          std::string id) {
  constexpr int kMaxAttempts = 1000;
  std::vector<const TemplateEntry*> order;
  for (const auto& e : mode.entries) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) { return a->start < b->start; });

  std::normal_distribution<double> noise(0.0, 1.0);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Demonstration demo;
    demo.id = id;
    for (const auto* e : order) {
      const double start = e->start + config.jitter_sigma * noise(rng);
      const double end = e->start + e->duration + config.jitter_sigma * noise(rng);
      (e->hand == Hand::Left ? demo.left : demo.right).push_back({e->action, {start, end}});
    }
    if (validate_demonstration(demo).empty()) return demo;
  }
  throw make_error("RejectionLimitExceeded", "no valid demonstration of mode '" + mode.name + "' after " +
                                                 std::to_string(kMaxAttempts) +
                                                 " attempts; jitter too large for the template spacing");
}

Dataset generate(const GeneratorConfig& config) {
  validate_config(config);
  std::mt19937_64 rng(config.seed);

  std::vector<std::size_t> modes;
  if (config.balanced_modes) {
    modes = balanced_assignment(config.mode_weights, config.n_demos, rng);
  } else {
    std::discrete_distribution<std::size_t> pick(config.mode_weights.begin(), config.mode_weights.end());
    for (int i = 0; i < config.n_demos; ++i) modes.push_back(pick(rng));
  }

  Dataset data;
  data.task = config.task;
  data.truth = derive_ground_truth(config.modes, config.epsilon);
  for (int i = 0; i < config.n_demos; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "demo_%04d", i);
    const auto m = modes[static_cast<std::size_t>(i)];
    data.demos.push_back(sample_demo(config, config.modes[m], rng, id));
    data.mode_of.push_back(m);
  }
  return data;
}

}  // namespace ttm
