#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttm/model.hpp"
#include "ttm/synth.hpp"

namespace ttm::io {

using Json = nlohmann::ordered_json;

struct DemonstrationFile {
  std::string task;
  std::vector<Demonstration> demos;
};

// Demonstrations:
// {"task": str, "demonstrations": [{"id": str, "left": [{"verb", "object",
//  "start", "end"}, ...], "right": [...]}, ...]}
Json to_json(const DemonstrationFile& file);
DemonstrationFile demonstrations_from_json(const Json& j);

// {"components": [{"w", "mu", "var"}], "n": int}
Json to_json(const GaussianMixture& m);
GaussianMixture mixture_from_json(const Json& j);

// {"constraints": [{"a": action, "b": action, "relation", "membership"}],
//  "symmetric": [{"action": action, "membership"}]}
Json to_json(const SttcSet& set);
SttcSet sttcs_from_json(const Json& j);

// {"pair": key, "relation": str, "constraints": [{"channel", "mean", "var", "weight"}]}
Json to_json(const SsttcGroup& group);
SsttcGroup ssttc_group_from_json(const Json& j);

// {"entries": [{"verb", "object", "hand", "start", "duration"}], "objective": number}
Json to_json(const TimelinePlan& plan);

Json to_json(const GeneratorConfig& config);
GeneratorConfig generator_config_from_json(const Json& j);

/// Versioned model file, `"format": 1`.
Json to_json(const TaskModel& model);
TaskModel model_from_json(const Json& j);

/// Throws `InvalidInput` for unreadable files or malformed JSON.
Json read_json(const std::filesystem::path& path);

/// Two-space indented JSON followed by a newline.
void write_json(const std::filesystem::path& path, const Json& j);
std::string dump(const Json& j);

}  // namespace ttm::io
