#include "parkour/run_config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace parkour {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& section,
                const std::set<std::string>& allowed) {
    if (!j.is_object())
        throw std::invalid_argument("config." + section + ": expected an object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key()))
            throw std::invalid_argument("config." + section + ": unknown key '" + item.key() +
                                        "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

JitterSpec::Mode jitter_mode_from_string(const std::string& s) {
    if (s == "none") return JitterSpec::Mode::None;
    if (s == "fixed") return JitterSpec::Mode::Fixed;
    if (s == "bernoulli") return JitterSpec::Mode::Bernoulli;
    throw std::invalid_argument("config.episode.jitter.mode: unknown mode '" + s +
                                "' (expected none, fixed, or bernoulli)");
}

const char* jitter_mode_name(JitterSpec::Mode mode) {
    switch (mode) {
        case JitterSpec::Mode::None: return "none";
        case JitterSpec::Mode::Fixed: return "fixed";
        case JitterSpec::Mode::Bernoulli: return "bernoulli";
    }
    return "?";
}

}  // namespace

void RunConfig::validate() const {
    if (mode != "cdr" && mode != "fixed")
        throw std::invalid_argument("config.mode: must be 'cdr' or 'fixed'");
    if (mode == "fixed" && course_path.empty())
        throw std::invalid_argument("config.course_path: required when mode is 'fixed'");
    if (threads < 0) throw std::invalid_argument("config.threads: must be >= 0");
    ga.validate();
    cdr.validate();
    episode.validate();
    physics.validate();
    wired_sensors().validate();
}

SensorConfig RunConfig::wired_sensors() const {
    SensorConfig wired = sensors;
    wired.episode_timeout_ticks = episode.timeout_ticks;
    wired.speed_normalizer = physics.sprint_speed;
    return wired;
}

nlohmann::json run_config_to_json(const RunConfig& c) {
    json j;
    j["schema_version"] = kRunConfigSchemaVersion;
    j["mode"] = c.mode;
    j["course_path"] = c.course_path;
    j["output_dir"] = c.output_dir;
    j["threads"] = c.threads;
    j["trace"] = c.trace;
    j["ga"] = {
        {"population_size", c.ga.population_size},
        {"elite_count", c.ga.elite_count},
        {"mutation_rate", c.ga.mutation_rate},
        {"mutation_sigma", c.ga.mutation_sigma},
        {"adapt_sigma", c.ga.adapt_sigma},
        {"mutation_sigma_cap", c.ga.mutation_sigma_cap},
        {"plateau_delta", c.ga.plateau_delta},
        {"plateau_patience", c.ga.plateau_patience},
        {"trials_per_genome", c.ga.trials_per_genome},
        {"max_generations", c.ga.max_generations},
        {"early_stop_streak", c.ga.early_stop_streak},
        {"rng_seed", c.ga.rng_seed},
    };
    j["cdr"] = {
        {"cell_count", c.cdr.cell_count},
        {"max_gap", c.cdr.max_gap},
        {"block_probability", c.cdr.block_probability},
        {"death_threshold", c.cdr.death_threshold},
    };
    j["episode"] = {
        {"timeout_ticks", c.episode.timeout_ticks},
        {"stuck_window_ticks", c.episode.stuck_window_ticks},
        {"stuck_displacement", c.episode.stuck_displacement},
        {"early_death_ticks", c.episode.early_death_ticks},
        {"jitter",
         {{"mode", jitter_mode_name(c.episode.jitter.mode)},
          {"delay_ticks", c.episode.jitter.delay_ticks},
          {"probability", c.episode.jitter.probability}}},
        {"weights",
         {{"progress", c.episode.weights.progress},
          {"proximity", c.episode.weights.proximity},
          {"goal_bonus", c.episode.weights.goal_bonus},
          {"record_bonus", c.episode.weights.record_bonus},
          {"early_death_penalty", c.episode.weights.early_death_penalty},
          {"stuck_penalty", c.episode.weights.stuck_penalty}}},
    };
    j["physics"] = {
        {"tick_rate", c.physics.tick_rate},
        {"sprint_speed", c.physics.sprint_speed},
        {"jump_velocity", c.physics.jump_velocity},
        {"gravity", c.physics.gravity},
        {"vertical_drag", c.physics.vertical_drag},
        {"max_yaw_per_tick", c.physics.max_yaw_per_tick},
        {"strafe_speed_fraction", c.physics.strafe_speed_fraction},
        {"player_half_width", c.physics.player_half_width},
        {"player_height", c.physics.player_height},
    };
    if (c.physics.void_y) j["physics"]["void_y"] = *c.physics.void_y;
    j["sensors"] = {
        {"forward_ray_count", c.sensors.forward_ray_count},
        {"fan_degrees", c.sensors.fan_degrees},
        {"max_distance", c.sensors.max_distance},
        {"ground_ray_count", c.sensors.ground_ray_count},
        {"ceiling_ray_count", c.sensors.ceiling_ray_count},
        {"eye_height", c.sensors.eye_height},
        {"ground_ray_pitch_degrees", c.sensors.ground_ray_pitch_degrees},
        {"ground_ray_yaw_degrees", c.sensors.ground_ray_yaw_degrees},
        {"ceiling_ray_pitch_degrees", c.sensors.ceiling_ray_pitch_degrees},
        {"ceiling_ray_yaw_degrees", c.sensors.ceiling_ray_yaw_degrees},
    };
    return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    check_keys(j, "(root)",
               {"schema_version", "mode", "course_path", "output_dir", "threads", "trace", "ga",
                "cdr", "episode", "physics", "sensors"});
    if (j.contains("schema_version")) {
        const int version = j.at("schema_version").get<int>();
        if (version != kRunConfigSchemaVersion)
            throw std::invalid_argument("config.schema_version: version " +
                                        std::to_string(version) + " not supported (expected " +
                                        std::to_string(kRunConfigSchemaVersion) + ")");
    }

    RunConfig c;
    read(j, "mode", c.mode);
    read(j, "course_path", c.course_path);
    read(j, "output_dir", c.output_dir);
    read(j, "threads", c.threads);
    read(j, "trace", c.trace);

    if (j.contains("ga")) {
        const json& g = j.at("ga");
        check_keys(g, "ga",
                   {"population_size", "elite_count", "mutation_rate", "mutation_sigma",
                    "adapt_sigma", "mutation_sigma_cap", "plateau_delta", "plateau_patience",
                    "trials_per_genome", "max_generations", "early_stop_streak", "rng_seed"});
        read(g, "population_size", c.ga.population_size);
        read(g, "elite_count", c.ga.elite_count);
        read(g, "mutation_rate", c.ga.mutation_rate);
        read(g, "mutation_sigma", c.ga.mutation_sigma);
        read(g, "adapt_sigma", c.ga.adapt_sigma);
        read(g, "mutation_sigma_cap", c.ga.mutation_sigma_cap);
        read(g, "plateau_delta", c.ga.plateau_delta);
        read(g, "plateau_patience", c.ga.plateau_patience);
        read(g, "trials_per_genome", c.ga.trials_per_genome);
        read(g, "max_generations", c.ga.max_generations);
        read(g, "early_stop_streak", c.ga.early_stop_streak);
        read(g, "rng_seed", c.ga.rng_seed);
    }
    if (j.contains("cdr")) {
        const json& d = j.at("cdr");
        check_keys(d, "cdr", {"cell_count", "max_gap", "block_probability", "death_threshold"});
        read(d, "cell_count", c.cdr.cell_count);
        read(d, "max_gap", c.cdr.max_gap);
        read(d, "block_probability", c.cdr.block_probability);
        read(d, "death_threshold", c.cdr.death_threshold);
    }
    if (j.contains("episode")) {
        const json& e = j.at("episode");
        check_keys(e, "episode",
                   {"timeout_ticks", "stuck_window_ticks", "stuck_displacement",
                    "early_death_ticks", "jitter", "weights"});
        read(e, "timeout_ticks", c.episode.timeout_ticks);
        read(e, "stuck_window_ticks", c.episode.stuck_window_ticks);
        read(e, "stuck_displacement", c.episode.stuck_displacement);
        read(e, "early_death_ticks", c.episode.early_death_ticks);
        if (e.contains("jitter")) {
            const json& jt = e.at("jitter");
            check_keys(jt, "episode.jitter", {"mode", "delay_ticks", "probability"});
            if (jt.contains("mode"))
                c.episode.jitter.mode = jitter_mode_from_string(jt.at("mode").get<std::string>());
            read(jt, "delay_ticks", c.episode.jitter.delay_ticks);
            read(jt, "probability", c.episode.jitter.probability);
        }
        if (e.contains("weights")) {
            const json& w = e.at("weights");
            check_keys(w, "episode.weights",
                       {"progress", "proximity", "goal_bonus", "record_bonus",
                        "early_death_penalty", "stuck_penalty"});
            read(w, "progress", c.episode.weights.progress);
            read(w, "proximity", c.episode.weights.proximity);
            read(w, "goal_bonus", c.episode.weights.goal_bonus);
            read(w, "record_bonus", c.episode.weights.record_bonus);
            read(w, "early_death_penalty", c.episode.weights.early_death_penalty);
            read(w, "stuck_penalty", c.episode.weights.stuck_penalty);
        }
    }
    if (j.contains("physics")) {
        const json& p = j.at("physics");
        check_keys(p, "physics",
                   {"tick_rate", "sprint_speed", "jump_velocity", "gravity", "vertical_drag",
                    "max_yaw_per_tick", "strafe_speed_fraction", "player_half_width",
                    "player_height", "void_y"});
        read(p, "tick_rate", c.physics.tick_rate);
        read(p, "sprint_speed", c.physics.sprint_speed);
        read(p, "jump_velocity", c.physics.jump_velocity);
        read(p, "gravity", c.physics.gravity);
        read(p, "vertical_drag", c.physics.vertical_drag);
        read(p, "max_yaw_per_tick", c.physics.max_yaw_per_tick);
        read(p, "strafe_speed_fraction", c.physics.strafe_speed_fraction);
        read(p, "player_half_width", c.physics.player_half_width);
        read(p, "player_height", c.physics.player_height);
        if (p.contains("void_y") && !p.at("void_y").is_null())
            c.physics.void_y = p.at("void_y").get<double>();
    }
    if (j.contains("sensors")) {
        const json& s = j.at("sensors");
        check_keys(s, "sensors",
                   {"forward_ray_count", "fan_degrees", "max_distance", "ground_ray_count",
                    "ceiling_ray_count", "eye_height", "ground_ray_pitch_degrees",
                    "ground_ray_yaw_degrees", "ceiling_ray_pitch_degrees",
                    "ceiling_ray_yaw_degrees"});
        read(s, "forward_ray_count", c.sensors.forward_ray_count);
        read(s, "fan_degrees", c.sensors.fan_degrees);
        read(s, "max_distance", c.sensors.max_distance);
        read(s, "ground_ray_count", c.sensors.ground_ray_count);
        read(s, "ceiling_ray_count", c.sensors.ceiling_ray_count);
        read(s, "eye_height", c.sensors.eye_height);
        read(s, "ground_ray_pitch_degrees", c.sensors.ground_ray_pitch_degrees);
        read(s, "ground_ray_yaw_degrees", c.sensors.ground_ray_yaw_degrees);
        read(s, "ceiling_ray_pitch_degrees", c.sensors.ceiling_ray_pitch_degrees);
        read(s, "ceiling_ray_yaw_degrees", c.sensors.ceiling_ray_yaw_degrees);
    }
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config file " + path + ": " + e.what());
    }
    try {
        return run_config_from_json(j);
    } catch (const std::exception& e) {
        throw std::runtime_error("config file " + path + ": " + e.what());
    }
}

void save_run_config(const RunConfig& config, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open config file for writing: " + path);
    f << run_config_to_json(config).dump(2) << '\n';
}

}  // namespace parkour
