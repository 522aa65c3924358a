// Aggregate run configuration: one JSON document (schema-versioned) holding
// every module's parameters, with defaults for all fields so an empty config
// is a complete experiment description.
#pragma once

#include <string>

#include <json.hpp>

#include "parkour/episode.hpp"
#include "parkour/evolution.hpp"
#include "parkour/physics.hpp"
#include "parkour/sensing.hpp"
#include "parkour/world.hpp"

namespace parkour {

inline constexpr int kRunConfigSchemaVersion = 1;

struct RunConfig {
    std::string mode = "cdr";  // "cdr" or "fixed"
    std::string course_path;   // fixed mode only
    GaConfig ga;
    CdrConfig cdr;
    EpisodeConfig episode;
    PhysicsConfig physics;
    SensorConfig sensors;
    std::string output_dir = "runs";
    int threads = 0;  // 0 = hardware concurrency
    bool trace = false;

    void validate() const;

    // Sensors with the cross-module values (clock normalizer, velocity
    // normalizer) synced from the episode and physics sections.
    SensorConfig wired_sensors() const;
};

nlohmann::json run_config_to_json(const RunConfig& config);
// Starts from defaults and applies present fields; rejects unknown keys with
// a field-level diagnostic.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& config, const std::string& path);

}  // namespace parkour
