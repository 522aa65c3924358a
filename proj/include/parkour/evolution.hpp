// Generational GA over fixed-topology genomes: population-scaled tournament
// selection, elitism, per-gene Gaussian mutation, and a plateau-triggered
// doubling schedule for the mutation parameters. Course regeneration is
// driven by the cumulative death count.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "parkour/episode.hpp"
#include "parkour/policy.hpp"
#include "parkour/rng.hpp"
#include "parkour/world.hpp"

namespace parkour {

struct GaConfig {
    int population_size = 100;
    int elite_count = 5;
    double mutation_rate = 0.1;   // initial per-gene mutation probability
    double mutation_sigma = 0.2;  // initial Gaussian perturbation stddev
    bool adapt_sigma = true;      // plateau doubling also applies to sigma
    double mutation_sigma_cap = 3.2;
    double plateau_delta = 50.0;  // fitness points
    int plateau_patience = 3;     // consecutive generations
    int trials_per_genome = 3;
    int max_generations = 100;
    int early_stop_streak = 0;    // stop after this many goal-reaching generations; 0 = off
    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct GenerationRecord {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    std::string best_genome_id;
    double current_mutation_rate = 0.0;
    double current_mutation_sigma = 0.0;
    int plateau_counter = 0;
    std::string course_id;
    int cumulative_deaths = 0;
    bool best_reached_goal = false;
};

// Tournament size from the population size: round(2 + sqrt(N) / 2), rounding
// half away from zero, clamped to the population.
int tournament_size(int population_size);

// Samples tournament_size(N) distinct individuals uniformly and returns the
// index of the fittest; ties break toward the lowest population index.
int select_parent_index(const std::vector<double>& fitness, Rng& rng);
const Genome& select_parent(const std::vector<Genome>& population,
                            const std::vector<double>& fitness, Rng& rng);

// Per-gene Gaussian mutation; untouched genes are copied exactly and the
// child's fitness metadata is cleared.
Genome mutate(const Genome& parent, double rate, double sigma, Rng& rng);

// Plateau schedule over the trailing best-fitness history (oldest first):
// doubles rate/sigma when the last plateau_patience improvements all fall at
// or below plateau_delta, restores the configured initial values when the
// most recent improvement exceeds it, and otherwise leaves them unchanged.
std::pair<double, double> adapt_mutation(const std::vector<double>& history,
                                         double current_rate, double current_sigma,
                                         const GaConfig& config);

// Next population: elites copied verbatim, remaining slots bred by mutating
// tournament winners with the current rate/sigma.
std::vector<Genome> evolve_generation(const std::vector<Genome>& population,
                                      const std::vector<double>& fitness, double rate,
                                      double sigma, const GaConfig& config, Rng& rng);

struct EvalOutcome {
    double fitness = 0.0;
    bool reached_goal = false;
    std::optional<int> completion_tick;
    int void_deaths = 0;
};

using Evaluator = std::function<EvalOutcome(const Genome& genome, const Course& course,
                                            std::uint64_t eval_seed,
                                            const std::optional<int>& best_record_ticks)>;

// Course supply for a run: a fixed course, or continual regeneration from a
// CDR config and seed stream.
struct CdrSource {
    CdrConfig config;
    std::uint64_t seed_base = 0;
};
using CourseSource = std::variant<Course, CdrSource>;

struct EvolutionResult {
    Genome best;  // best of the final evaluated generation
    std::vector<GenerationRecord> records;
};

// Full training loop. Deterministic in config.rng_seed for any thread count:
// every evaluation draws from a seed derived from (generation, index), and
// the course/record state advances only between evaluation waves.
EvolutionResult run_evolution(const GaConfig& config, const CourseSource& source,
                              const Evaluator& evaluator, int threads = 1);

// Adapts the episode module's multi-trial evaluation to the Evaluator
// signature used by run_evolution.
Evaluator make_episode_evaluator(const EpisodeConfig& episode, const PhysicsConfig& physics,
                                 const SensorConfig& sensors, int trials);

std::string genome_id(int generation, int index);

nlohmann::json generation_record_to_json(const GenerationRecord& record);

}  // namespace parkour
