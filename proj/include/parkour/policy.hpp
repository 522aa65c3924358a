// Fixed-topology 33-32-4 control network: flat genome, Glorot initialization,
// forward pass with sigmoid-thresholded keys plus a tanh yaw output, and
// lossless JSON persistence.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "parkour/physics.hpp"
#include "parkour/sensing.hpp"

namespace parkour {

inline constexpr int kHiddenWidth = 32;
inline constexpr int kOutputWidth = 4;

// Flat parameter layout offsets.
inline constexpr int kW1Offset = 0;  // hidden x input, row-major by hidden neuron
inline constexpr int kB1Offset = kInputWidth * kHiddenWidth;
inline constexpr int kW2Offset = kB1Offset + kHiddenWidth;  // output x hidden, row-major
inline constexpr int kB2Offset = kW2Offset + kHiddenWidth * kOutputWidth;
inline constexpr int kParameterCount = kB2Offset + kOutputWidth;  // 1220

inline constexpr int kGenomeSchemaVersion = 1;

struct GenomeMetadata {
    int generation = 0;
    std::optional<double> fitness;
    std::optional<std::string> course_id;
};

struct Genome {
    std::vector<double> parameters;  // exactly kParameterCount entries
    GenomeMetadata metadata;
};

// All parameters zero: the canonical "no keys pressed, no turn" policy.
Genome zero_genome();

// Glorot-uniform weights (bounds scaled by layer fan-in + fan-out), zero
// biases; deterministic per seed.
Genome glorot_init(std::uint64_t rng_seed);

// Pre-activation outputs of the final layer.
std::array<double, kOutputWidth> forward_raw(const Genome& genome, const InputVector& input);

// Binary keys threshold the sigmoid strictly above 0.5 (equivalently, raw
// output > 0), yaw is tanh of the fourth raw output.
ActionCommand forward(const Genome& genome, const InputVector& input);

nlohmann::json genome_to_json(const Genome& genome);
Genome genome_from_json(const nlohmann::json& j);
void save_genome(const Genome& genome, const std::string& path);
Genome load_genome(const std::string& path);

}  // namespace parkour
