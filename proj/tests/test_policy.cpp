#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "parkour/policy.hpp"
#include "parkour/rng.hpp"

using namespace parkour;

namespace {

InputVector random_input(Rng& rng) {
    InputVector input;
    for (int i = 0; i < kInputWidth; ++i) input[i] = rng.uniform_range(-1.0, 1.0);
    return input;
}

Genome random_genome(Rng& rng) {
    Genome genome = zero_genome();
    for (double& p : genome.parameters) p = rng.uniform_range(-1.0, 1.0);
    return genome;
}

// Naive two-matrix-product reimplementation, kept deliberately independent
// of the flat-layout walking in forward_raw.
std::array<double, kOutputWidth> oracle_raw(const Genome& genome, const InputVector& input) {
    double w1[kHiddenWidth][kInputWidth], b1[kHiddenWidth];
    double w2[kOutputWidth][kHiddenWidth], b2[kOutputWidth];
    size_t k = 0;
    for (int h = 0; h < kHiddenWidth; ++h)
        for (int i = 0; i < kInputWidth; ++i) w1[h][i] = genome.parameters[k++];
    for (int h = 0; h < kHiddenWidth; ++h) b1[h] = genome.parameters[k++];
    for (int o = 0; o < kOutputWidth; ++o)
        for (int h = 0; h < kHiddenWidth; ++h) w2[o][h] = genome.parameters[k++];
    for (int o = 0; o < kOutputWidth; ++o) b2[o] = genome.parameters[k++];

    double hidden[kHiddenWidth];
    for (int h = 0; h < kHiddenWidth; ++h) {
        double sum = b1[h];
        for (int i = 0; i < kInputWidth; ++i) sum += w1[h][i] * input[i];
        hidden[h] = std::tanh(sum);
    }
    std::array<double, kOutputWidth> out{};
    for (int o = 0; o < kOutputWidth; ++o) {
        double sum = b2[o];
        for (int h = 0; h < kHiddenWidth; ++h) sum += w2[o][h] * hidden[h];
        out[static_cast<size_t>(o)] = sum;
    }
    return out;
}

}  // namespace

TEST_CASE("parameter count is exactly 1220") {
    CHECK(kParameterCount == 1220);
    CHECK(kParameterCount ==
          kInputWidth * kHiddenWidth + kHiddenWidth + kHiddenWidth * kOutputWidth + kOutputWidth);
    CHECK(glorot_init(1).parameters.size() == 1220);
}

TEST_CASE("glorot initialization respects the layer bounds, biases are zero") {
    const double bound1 = std::sqrt(6.0 / (33 + 32));  // ~0.3038
    const double bound2 = std::sqrt(6.0 / (32 + 4));   // ~0.4082
    const Genome genome = glorot_init(91);

    double max1 = 0.0, max2 = 0.0;
    for (int i = 0; i < kB1Offset; ++i) {
        CHECK(std::abs(genome.parameters[static_cast<size_t>(i)]) <= bound1);
        max1 = std::max(max1, std::abs(genome.parameters[static_cast<size_t>(i)]));
    }
    for (int i = kB1Offset; i < kW2Offset; ++i)
        CHECK(genome.parameters[static_cast<size_t>(i)] == 0.0);
    for (int i = kW2Offset; i < kB2Offset; ++i) {
        CHECK(std::abs(genome.parameters[static_cast<size_t>(i)]) <= bound2);
        max2 = std::max(max2, std::abs(genome.parameters[static_cast<size_t>(i)]));
    }
    for (int i = kB2Offset; i < kParameterCount; ++i)
        CHECK(genome.parameters[static_cast<size_t>(i)] == 0.0);

    // A uniform draw over 1056/128 samples should brush the bound.
    CHECK(max1 > 0.95 * bound1);
    CHECK(max2 > 0.9 * bound2);
}

TEST_CASE("glorot initialization is deterministic per seed") {
    CHECK(glorot_init(7).parameters == glorot_init(7).parameters);
    CHECK(glorot_init(7).parameters != glorot_init(8).parameters);
}

TEST_CASE("zero genome presses nothing and does not turn") {
    Rng rng(5);
    const Genome genome = zero_genome();
    for (int trial = 0; trial < 20; ++trial) {
        const ActionCommand action = forward(genome, random_input(rng));
        CHECK_FALSE(action.jump);  // sigmoid(0) = 0.5, strictly above is required
        CHECK_FALSE(action.strafe_left);
        CHECK_FALSE(action.strafe_right);
        CHECK(action.yaw_delta == 0.0);
    }
}

TEST_CASE("saturated jump bias presses jump on any input") {
    Rng rng(6);
    Genome genome = zero_genome();
    genome.parameters[static_cast<size_t>(kB2Offset)] = 10.0;
    for (int trial = 0; trial < 20; ++trial) {
        const ActionCommand action = forward(genome, random_input(rng));
        CHECK(action.jump);
        CHECK_FALSE(action.strafe_left);
    }
}

TEST_CASE("forward matches the straight-line matrix oracle") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const Genome genome = random_genome(rng);
        const InputVector input = random_input(rng);
        const auto raw = forward_raw(genome, input);
        const auto expected = oracle_raw(genome, input);
        for (int o = 0; o < kOutputWidth; ++o)
            CHECK(raw[static_cast<size_t>(o)] ==
                  doctest::Approx(expected[static_cast<size_t>(o)]).epsilon(1e-12));
        const ActionCommand action = forward(genome, input);
        CHECK(action.jump == (expected[0] > 0.0));
        CHECK(action.strafe_left == (expected[1] > 0.0));
        CHECK(action.strafe_right == (expected[2] > 0.0));
        CHECK(action.yaw_delta == doctest::Approx(std::tanh(expected[3])).epsilon(1e-12));
        CHECK(action.yaw_delta > -1.0);
        CHECK(action.yaw_delta < 1.0);
    }
}

TEST_CASE("wrong parameter count is a contract violation") {
    Genome genome = zero_genome();
    genome.parameters.pop_back();
    InputVector input;
    CHECK_THROWS_AS(forward(genome, input), std::invalid_argument);
}

TEST_CASE("json round trip preserves forward outputs bit-exactly") {
    Rng rng(123);
    Genome genome = glorot_init(99);
    for (double& p : genome.parameters) p += rng.uniform_range(-0.13, 0.13);
    genome.metadata.generation = 17;
    genome.metadata.fitness = 612.25;
    genome.metadata.course_id = "neo-right";

    const Genome reloaded = genome_from_json(genome_to_json(genome));
    CHECK(reloaded.parameters == genome.parameters);
    CHECK(reloaded.metadata.generation == 17);
    CHECK(reloaded.metadata.fitness == 612.25);
    CHECK(reloaded.metadata.course_id == "neo-right");

    for (int trial = 0; trial < 100; ++trial) {
        const InputVector input = random_input(rng);
        const auto a = forward_raw(genome, input);
        const auto b = forward_raw(reloaded, input);
        for (int o = 0; o < kOutputWidth; ++o)
            CHECK(a[static_cast<size_t>(o)] == b[static_cast<size_t>(o)]);
    }
}

TEST_CASE("genome files survive a disk round trip") {
    const std::string path =
        (std::filesystem::temp_directory_path() / "parkour_test_genome.json").string();
    Genome genome = glorot_init(4);
    genome.metadata.course_id = "two-gap";
    save_genome(genome, path);
    const Genome reloaded = load_genome(path);
    CHECK(reloaded.parameters == genome.parameters);
    CHECK(reloaded.metadata.course_id == "two-gap");
    std::filesystem::remove(path);
}

TEST_CASE("loader rejects bad documents with diagnostics") {
    Genome genome = glorot_init(8);
    nlohmann::json j = genome_to_json(genome);

    nlohmann::json missing = j;
    missing["parameters"].erase(missing["parameters"].size() - 1);
    try {
        genome_from_json(missing);
        FAIL("expected a parameter count error");
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        CHECK(what.find("1220") != std::string::npos);
        CHECK(what.find("1219") != std::string::npos);
    }

    nlohmann::json version = j;
    version["schema_version"] = 2;
    CHECK_THROWS_AS(genome_from_json(version), std::runtime_error);

    nlohmann::json topology = j;
    topology["topology"]["hidden"] = 64;
    CHECK_THROWS_AS(genome_from_json(topology), std::runtime_error);
}

TEST_CASE("single-weight perturbations stay within the linear bound") {
    Rng rng(3141);
    const double eps = 1e-6;
    for (int point = 0; point < 10; ++point) {
        const Genome genome = random_genome(rng);
        const InputVector input = random_input(rng);
        const auto base = forward_raw(genome, input);

        double input_norm = 1.0;
        for (int i = 0; i < kInputWidth; ++i) input_norm = std::max(input_norm, std::abs(input[i]));
        double w2_max = 1.0;
        for (int i = kW2Offset; i < kB2Offset; ++i)
            w2_max = std::max(w2_max, std::abs(genome.parameters[static_cast<size_t>(i)]));
        const double bound = eps * input_norm * w2_max * (1.0 + 1e-6);

        const int which = static_cast<int>(rng.uniform_below(kParameterCount));
        Genome perturbed = genome;
        perturbed.parameters[static_cast<size_t>(which)] += eps;
        const auto moved = forward_raw(perturbed, input);
        for (int o = 0; o < kOutputWidth; ++o) {
            const double delta =
                std::abs(moved[static_cast<size_t>(o)] - base[static_cast<size_t>(o)]);
            CHECK(delta <= bound);
        }
    }
}

TEST_CASE("positive scaling of the final layer never flips decisions") {
    Rng rng(999);
    for (int trial = 0; trial < 50; ++trial) {
        const Genome genome = random_genome(rng);
        const InputVector input = random_input(rng);
        const ActionCommand base = forward(genome, input);
        for (double scale : {0.25, 2.0, 10.0}) {
            Genome scaled = genome;
            for (int i = kW2Offset; i < kParameterCount; ++i)
                scaled.parameters[static_cast<size_t>(i)] *= scale;
            const ActionCommand action = forward(scaled, input);
            CHECK(action.jump == base.jump);
            CHECK(action.strafe_left == base.strafe_left);
            CHECK(action.strafe_right == base.strafe_right);
            CHECK(std::signbit(action.yaw_delta) == std::signbit(base.yaw_delta));
        }
    }
}
