#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ttm/sttc.hpp"

namespace ttm {

struct TemplateEntry {
  Action action;
  Hand hand = Hand::Left;
  double start = 0.0;
  double duration = 1.0;
};

/// One qualitative way of executing the task, as nominal timings.
struct ModeTemplate {
  std::string name;
  std::vector<TemplateEntry> entries;
};

struct GeneratorConfig {
  std::string task = "synthetic";
  std::vector<ModeTemplate> modes;
  std::vector<double> mode_weights;
  double jitter_sigma = 0.02;
  int n_demos = 1;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  /// Allocate mode counts proportionally to the weights (largest remainder)
  /// and shuffle them, instead of drawing every demonstration independently.
  bool balanced_modes = false;
};

/// Throws `InvalidConfig` naming the offending field.
void validate_config(const GeneratorConfig& config);

/// Relations that hold identically in every mode. Pairs whose relation
/// differs between modes, or that are missing from a mode, stay open.
/// Actions executed by both hands with equal nominal intervals in every mode
/// are reported as symmetric.
SttcSet derive_ground_truth(const std::vector<ModeTemplate>& modes, double epsilon);

/// Perturbs every nominal keypoint with independent N(0, jitter^2) noise,
/// resampling the whole demonstration until it is valid. Throws
/// `RejectionLimitExceeded` after 1000 failed attempts.
Demonstration sample_demo(const GeneratorConfig& config, const ModeTemplate& mode, std::mt19937_64& rng,
                          std::string id = "demo");

struct Dataset {
  std::string task;
  std::vector<Demonstration> demos;
  std::vector<std::size_t> mode_of;  ///< mode index per demonstration
  SttcSet truth;
};

Dataset generate(const GeneratorConfig& config);

}  // namespace ttm
