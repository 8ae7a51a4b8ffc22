#pragma once

#include "ttm/synth.hpp"

namespace ttm::fixtures {

inline TemplateEntry entry(const char* key, Hand hand, double start, double end) {
  return {Action::parse(key), hand, start, end - start};
}

/// Eight actions over two hands, executed in two ways that differ only in
/// when the table is wiped relative to releasing the cup.
inline GeneratorConfig two_mode_config(int n_demos = 60, std::uint64_t seed = 1) {
  const std::vector<TemplateEntry> shared = {
      entry("grasp:cup", Hand::Left, 0.0, 2.0),      entry("hold:cup", Hand::Left, 2.5, 6.5),
      entry("place:cup", Hand::Left, 7.5, 9.0),      entry("release:cup", Hand::Left, 9.8, 11.0),
      entry("grasp:bottle", Hand::Right, 0.6, 1.5),  entry("pour:milk", Hand::Right, 2.5, 5.7),
      entry("place:bottle", Hand::Right, 7.0, 8.4),
  };
  ModeTemplate early{"wipe_early", shared};
  early.entries.push_back(entry("wipe:table", Hand::Right, 9.4, 10.5));
  ModeTemplate late{"wipe_late", shared};
  late.entries.push_back(entry("wipe:table", Hand::Right, 11.6, 12.8));

  GeneratorConfig c;
  c.task = "two_mode";
  c.modes = {early, late};
  c.mode_weights = {0.5, 0.5};
  c.jitter_sigma = 0.02;
  c.n_demos = n_demos;
  c.seed = seed;
  c.epsilon = 0.1;
  c.balanced_modes = true;
  return c;
}

/// Milk is poured with the right hand while the left hand holds the cup,
/// starting 0.5 s after the pour starts and ending 0.5 s before it ends.
inline GeneratorConfig pouring_config(double jitter, int n_demos = 20, std::uint64_t seed = 7) {
  GeneratorConfig c;
  c.task = "pouring";
  c.modes = {{"pour", {entry("pour:milk", Hand::Right, 0.0, 6.0), entry("hold:cup", Hand::Left, 0.5, 5.5)}}};
  c.mode_weights = {1.0};
  c.jitter_sigma = jitter;
  c.n_demos = n_demos;
  c.seed = seed;
  c.epsilon = 0.1;
  return c;
}

}  // namespace ttm::fixtures
