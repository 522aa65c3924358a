#include "parkour/policy.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "parkour/rng.hpp"

namespace parkour {

namespace {

void require_parameter_count(const Genome& genome) {
    if (genome.parameters.size() != static_cast<size_t>(kParameterCount))
        throw std::invalid_argument("genome: expected " + std::to_string(kParameterCount) +
                                    " parameters, got " +
                                    std::to_string(genome.parameters.size()));
}

}  // namespace

Genome zero_genome() {
    Genome genome;
    genome.parameters.assign(static_cast<size_t>(kParameterCount), 0.0);
    return genome;
}

Genome glorot_init(std::uint64_t rng_seed) {
    Genome genome = zero_genome();
    Rng rng(rng_seed);
    const double bound1 = std::sqrt(6.0 / (kInputWidth + kHiddenWidth));
    const double bound2 = std::sqrt(6.0 / (kHiddenWidth + kOutputWidth));
    for (int i = 0; i < kHiddenWidth * kInputWidth; ++i)
        genome.parameters[static_cast<size_t>(kW1Offset + i)] = rng.uniform_range(-bound1, bound1);
    for (int i = 0; i < kOutputWidth * kHiddenWidth; ++i)
        genome.parameters[static_cast<size_t>(kW2Offset + i)] = rng.uniform_range(-bound2, bound2);
    return genome;
}

std::array<double, kOutputWidth> forward_raw(const Genome& genome, const InputVector& input) {
    require_parameter_count(genome);
    const double* p = genome.parameters.data();

    std::array<double, kHiddenWidth> hidden;
    for (int h = 0; h < kHiddenWidth; ++h) {
        double sum = p[kB1Offset + h];
        const double* row = p + kW1Offset + h * kInputWidth;
        for (int i = 0; i < kInputWidth; ++i) sum += row[i] * input[i];
        hidden[static_cast<size_t>(h)] = std::tanh(sum);
    }

    std::array<double, kOutputWidth> out;
    for (int o = 0; o < kOutputWidth; ++o) {
        double sum = p[kB2Offset + o];
        const double* row = p + kW2Offset + o * kHiddenWidth;
        for (int h = 0; h < kHiddenWidth; ++h) sum += row[h] * hidden[static_cast<size_t>(h)];
        out[static_cast<size_t>(o)] = sum;
    }
    return out;
}

ActionCommand forward(const Genome& genome, const InputVector& input) {
    const auto raw = forward_raw(genome, input);
    ActionCommand action;
    // sigmoid(o) > 0.5 iff o > 0; exactly 0.5 means not pressed.
    action.jump = raw[0] > 0.0;
    action.strafe_left = raw[1] > 0.0;
    action.strafe_right = raw[2] > 0.0;
    action.yaw_delta = std::tanh(raw[3]);
    return action;
}

nlohmann::json genome_to_json(const Genome& genome) {
    require_parameter_count(genome);
    nlohmann::json meta;
    meta["generation"] = genome.metadata.generation;
    if (genome.metadata.fitness) meta["fitness"] = *genome.metadata.fitness;
    if (genome.metadata.course_id) meta["course_id"] = *genome.metadata.course_id;
    return nlohmann::json{
        {"schema_version", kGenomeSchemaVersion},
        {"topology",
         {{"input", kInputWidth}, {"hidden", kHiddenWidth}, {"output", kOutputWidth}}},
        {"parameters", genome.parameters},
        {"metadata", meta},
    };
}

Genome genome_from_json(const nlohmann::json& j) {
    const int version = j.at("schema_version").get<int>();
    if (version != kGenomeSchemaVersion)
        throw std::runtime_error("genome: schema_version " + std::to_string(version) +
                                 " not supported (expected " +
                                 std::to_string(kGenomeSchemaVersion) + ")");
    const auto& topo = j.at("topology");
    const int in = topo.at("input").get<int>();
    const int hid = topo.at("hidden").get<int>();
    const int out = topo.at("output").get<int>();
    if (in != kInputWidth || hid != kHiddenWidth || out != kOutputWidth)
        throw std::runtime_error("genome: topology " + std::to_string(in) + "-" +
                                 std::to_string(hid) + "-" + std::to_string(out) +
                                 " does not match the fixed " + std::to_string(kInputWidth) +
                                 "-" + std::to_string(kHiddenWidth) + "-" +
                                 std::to_string(kOutputWidth) + " network");
    Genome genome;
    genome.parameters = j.at("parameters").get<std::vector<double>>();
    if (genome.parameters.size() != static_cast<size_t>(kParameterCount))
        throw std::runtime_error("genome: expected " + std::to_string(kParameterCount) +
                                 " parameters, got " +
                                 std::to_string(genome.parameters.size()));
    for (double v : genome.parameters)
        if (!std::isfinite(v)) throw std::runtime_error("genome: non-finite parameter value");
    if (j.contains("metadata")) {
        const auto& meta = j.at("metadata");
        genome.metadata.generation = meta.value("generation", 0);
        if (meta.contains("fitness")) genome.metadata.fitness = meta.at("fitness").get<double>();
        if (meta.contains("course_id"))
            genome.metadata.course_id = meta.at("course_id").get<std::string>();
    }
    return genome;
}

void save_genome(const Genome& genome, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open genome file for writing: " + path);
    f << genome_to_json(genome).dump() << '\n';
}

Genome load_genome(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open genome file: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("genome file " + path + ": " + e.what());
    }
    try {
        return genome_from_json(j);
    } catch (const std::exception& e) {
        throw std::runtime_error("genome file " + path + ": " + e.what());
    }
}

}  // namespace parkour
