#pragma once

#include <string>

#include "json.hpp"
#include "shrinkerlab/harness.hpp"

namespace shrinkerlab {

// plain-text experiment configs: `key = value` lines under [section]
// headers, '#' comments; unknown keys are rejected so configs stay diff-able
// run provenance. Sections: [cylinder], [family], [harness].
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

// the manifest fully determines a run: replaying it reproduces report bytes
struct RunManifest {
  std::string config_path;
  ExperimentConfig resolved;
  std::uint64_t seed = 0;
  std::string wall_clock;  // informational; excluded from report payloads

  nlohmann::ordered_json to_json() const;
};

RunManifest make_manifest(const std::string& config_path,
                          const ExperimentConfig& cfg);

}  // namespace shrinkerlab
