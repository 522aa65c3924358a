#include "parkour/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace parkour {

namespace {

// Best index by fitness, ties toward the lowest index.
int best_index(const std::vector<double>& fitness) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(fitness.size()); ++i)
        if (fitness[static_cast<size_t>(i)] > fitness[static_cast<size_t>(best)]) best = i;
    return best;
}

std::vector<int> indices_by_fitness(const std::vector<double>& fitness) {
    std::vector<int> order(fitness.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return fitness[static_cast<size_t>(a)] > fitness[static_cast<size_t>(b)];
    });
    return order;
}

}  // namespace

void GaConfig::validate() const {
    if (population_size < 1) throw std::invalid_argument("ga.population_size: must be >= 1");
    if (elite_count < 1 || elite_count >= population_size)
        throw std::invalid_argument("ga.elite_count: must lie in [1, population_size)");
    if (!(mutation_rate > 0.0) || mutation_rate > 1.0)
        throw std::invalid_argument("ga.mutation_rate: must lie in (0, 1]");
    if (!(mutation_sigma > 0.0))
        throw std::invalid_argument("ga.mutation_sigma: must be positive");
    if (!(mutation_sigma_cap >= mutation_sigma))
        throw std::invalid_argument("ga.mutation_sigma_cap: must be >= mutation_sigma");
    if (!(plateau_delta > 0.0)) throw std::invalid_argument("ga.plateau_delta: must be positive");
    if (plateau_patience < 1) throw std::invalid_argument("ga.plateau_patience: must be >= 1");
    if (trials_per_genome < 1)
        throw std::invalid_argument("ga.trials_per_genome: must be >= 1");
    if (max_generations < 1) throw std::invalid_argument("ga.max_generations: must be >= 1");
    if (early_stop_streak < 0)
        throw std::invalid_argument("ga.early_stop_streak: must be >= 0");
}

int tournament_size(int population_size) {
    if (population_size < 1)
        throw std::invalid_argument("tournament_size: population must be >= 1");
    const long long size =
        std::llround(2.0 + std::sqrt(static_cast<double>(population_size)) / 2.0);
    return static_cast<int>(std::min<long long>(size, population_size));
}

int select_parent_index(const std::vector<double>& fitness, Rng& rng) {
    const int n = static_cast<int>(fitness.size());
    if (n == 0) throw std::invalid_argument("select_parent: empty population");
    const int k = tournament_size(n);

    // Partial Fisher-Yates: the first k entries become a uniform sample
    // without replacement.
    std::vector<int> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    int winner = -1;
    for (int j = 0; j < k; ++j) {
        const int pick = j + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - j)));
        std::swap(pool[static_cast<size_t>(j)], pool[static_cast<size_t>(pick)]);
        const int candidate = pool[static_cast<size_t>(j)];
        if (winner < 0 || fitness[static_cast<size_t>(candidate)] > fitness[static_cast<size_t>(winner)] ||
            (fitness[static_cast<size_t>(candidate)] == fitness[static_cast<size_t>(winner)] &&
             candidate < winner))
            winner = candidate;
    }
    return winner;
}

const Genome& select_parent(const std::vector<Genome>& population,
                            const std::vector<double>& fitness, Rng& rng) {
    return population[static_cast<size_t>(select_parent_index(fitness, rng))];
}

Genome mutate(const Genome& parent, double rate, double sigma, Rng& rng) {
    Genome child = parent;
    child.metadata.fitness.reset();
    for (double& gene : child.parameters)
        if (rng.uniform_double() < rate) gene += rng.gaussian() * sigma;
    return child;
}

std::pair<double, double> adapt_mutation(const std::vector<double>& history,
                                         double current_rate, double current_sigma,
                                         const GaConfig& config) {
    if (history.size() < 2) return {current_rate, current_sigma};
    const size_t n = history.size();
    const double latest = history[n - 1] - history[n - 2];
    if (latest > config.plateau_delta) return {config.mutation_rate, config.mutation_sigma};
    if (n >= static_cast<size_t>(config.plateau_patience) + 1) {
        bool plateau = true;
        for (int i = 0; i < config.plateau_patience; ++i) {
            const double improvement = history[n - 1 - static_cast<size_t>(i)] -
                                       history[n - 2 - static_cast<size_t>(i)];
            if (improvement > config.plateau_delta) {
                plateau = false;
                break;
            }
        }
        if (plateau) {
            const double rate = std::min(current_rate * 2.0, 1.0);
            const double sigma = config.adapt_sigma
                                     ? std::min(current_sigma * 2.0, config.mutation_sigma_cap)
                                     : current_sigma;
            return {rate, sigma};
        }
    }
    return {current_rate, current_sigma};
}

std::vector<Genome> evolve_generation(const std::vector<Genome>& population,
                                      const std::vector<double>& fitness, double rate,
                                      double sigma, const GaConfig& config, Rng& rng) {
    if (population.size() != fitness.size())
        throw std::invalid_argument("evolve_generation: fitness size mismatch");
    const std::vector<int> order = indices_by_fitness(fitness);

    std::vector<Genome> next;
    next.reserve(population.size());
    for (int e = 0; e < config.elite_count; ++e)
        next.push_back(population[static_cast<size_t>(order[static_cast<size_t>(e)])]);
    while (next.size() < population.size()) {
        const Genome& parent = select_parent(population, fitness, rng);
        next.push_back(mutate(parent, rate, sigma, rng));
    }
    return next;
}

std::string genome_id(int generation, int index) {
    return "g" + std::to_string(generation) + "i" + std::to_string(index);
}

nlohmann::json generation_record_to_json(const GenerationRecord& record) {
    return nlohmann::json{
        {"generation", record.generation},
        {"best_fitness", record.best_fitness},
        {"mean_fitness", record.mean_fitness},
        {"best_genome_id", record.best_genome_id},
        {"current_mutation_rate", record.current_mutation_rate},
        {"current_mutation_sigma", record.current_mutation_sigma},
        {"plateau_counter", record.plateau_counter},
        {"course_id", record.course_id},
        {"cumulative_deaths", record.cumulative_deaths},
        {"best_reached_goal", record.best_reached_goal},
    };
}

namespace {

// Runs one evaluation wave over the population. Results are written by
// index, so any worker schedule produces identical output.
std::vector<EvalOutcome> evaluate_wave(const std::vector<Genome>& population,
                                       const Course& course, const Evaluator& evaluator,
                                       const GaConfig& config, std::uint64_t seed_tag,
                                       int generation, const std::optional<int>& record_ticks,
                                       int threads) {
    const int n = static_cast<int>(population.size());
    std::vector<EvalOutcome> outcomes(static_cast<size_t>(n));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(n));

    auto eval_one = [&](int i) {
        const std::uint64_t seed =
            derive_seed(config.rng_seed, {seed_tag, static_cast<std::uint64_t>(generation),
                                          static_cast<std::uint64_t>(i)});
        try {
            outcomes[static_cast<size_t>(i)] =
                evaluator(population[static_cast<size_t>(i)], course, seed, record_ticks);
        } catch (...) {
            errors[static_cast<size_t>(i)] = std::current_exception();
        }
    };

    if (threads <= 1) {
        for (int i = 0; i < n; ++i) eval_one(i);
    } else {
        std::atomic<int> cursor{0};
        auto worker = [&] {
            for (int i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) eval_one(i);
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads - 1));
        for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
    }

    for (int i = 0; i < n; ++i) {
        if (errors[static_cast<size_t>(i)]) {
            try {
                std::rethrow_exception(errors[static_cast<size_t>(i)]);
            } catch (const std::exception& e) {
                throw std::runtime_error("evaluation failed at generation " +
                                         std::to_string(generation) + ", genome " +
                                         genome_id(generation, i) + ": " + e.what());
            }
        }
    }
    return outcomes;
}

}  // namespace

EvolutionResult run_evolution(const GaConfig& config, const CourseSource& source,
                              const Evaluator& evaluator, int threads) {
    config.validate();
    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw > 0 ? static_cast<int>(hw) : 1;
    }

    const bool cdr = std::holds_alternative<CdrSource>(source);
    int course_counter = 0;
    Course course;
    if (cdr) {
        const CdrSource& s = std::get<CdrSource>(source);
        course = generate_course(
            s.config, derive_seed(s.seed_base, {kSeedTagCourse, static_cast<std::uint64_t>(0)}));
    } else {
        course = std::get<Course>(source);
        validate_course(course);
    }

    // Trailing window of distinct training courses; the returned champion is
    // picked by mean fitness across these rather than by last-course luck,
    // which under continual regeneration would reward one-course specialists.
    std::vector<Course> recent_courses{course};
    constexpr size_t kChampionWindow = 5;

    std::vector<Genome> population;
    population.reserve(static_cast<size_t>(config.population_size));
    for (int i = 0; i < config.population_size; ++i) {
        population.push_back(glorot_init(
            derive_seed(config.rng_seed, {kSeedTagInit, static_cast<std::uint64_t>(i)})));
    }

    double rate = config.mutation_rate;
    double sigma = config.mutation_sigma;
    std::vector<double> best_history;  // trailing window, oldest first
    int plateau_counter = 0;
    int cumulative_deaths = 0;
    std::optional<int> record_ticks;
    int goal_streak = 0;

    EvolutionResult result;
    result.records.reserve(static_cast<size_t>(config.max_generations));

    for (int generation = 0; generation < config.max_generations; ++generation) {
        const std::vector<EvalOutcome> outcomes = evaluate_wave(
            population, course, evaluator, config, kSeedTagEval, generation, record_ticks,
            threads);

        std::vector<double> fitness(outcomes.size());
        double fitness_sum = 0.0;
        int deaths = 0;
        std::optional<int> wave_completion;
        for (size_t i = 0; i < outcomes.size(); ++i) {
            fitness[i] = outcomes[i].fitness;
            fitness_sum += outcomes[i].fitness;
            deaths += outcomes[i].void_deaths;
            if (outcomes[i].completion_tick &&
                (!wave_completion || *outcomes[i].completion_tick < *wave_completion))
                wave_completion = outcomes[i].completion_tick;
            population[i].metadata.fitness = outcomes[i].fitness;
        }
        const int best = best_index(fitness);
        cumulative_deaths += deaths;

        if (!best_history.empty()) {
            const double improvement = fitness[static_cast<size_t>(best)] - best_history.back();
            plateau_counter = improvement > config.plateau_delta ? 0 : plateau_counter + 1;
        }
        best_history.push_back(fitness[static_cast<size_t>(best)]);
        if (best_history.size() > static_cast<size_t>(config.plateau_patience) + 1)
            best_history.erase(best_history.begin());

        GenerationRecord record;
        record.generation = generation;
        record.best_fitness = fitness[static_cast<size_t>(best)];
        record.mean_fitness = fitness_sum / static_cast<double>(fitness.size());
        record.best_genome_id = genome_id(generation, best);
        record.current_mutation_rate = rate;
        record.current_mutation_sigma = sigma;
        record.plateau_counter = plateau_counter;
        record.course_id = course.course_id;
        record.cumulative_deaths = cumulative_deaths;
        record.best_reached_goal = outcomes[static_cast<size_t>(best)].reached_goal;
        result.records.push_back(record);

        goal_streak = outcomes[static_cast<size_t>(best)].reached_goal ? goal_streak + 1 : 0;
        if (config.early_stop_streak > 0 && goal_streak >= config.early_stop_streak) break;
        if (generation == config.max_generations - 1) break;

        // Fastest-completion record survives until the course changes.
        if (wave_completion && (!record_ticks || *wave_completion < *record_ticks))
            record_ticks = wave_completion;

        if (cdr && should_regenerate(cumulative_deaths, std::get<CdrSource>(source).config)) {
            ++course_counter;
            const CdrSource& s = std::get<CdrSource>(source);
            course = generate_course(
                s.config,
                derive_seed(s.seed_base, {kSeedTagCourse, static_cast<std::uint64_t>(course_counter)}));
            cumulative_deaths = 0;
            record_ticks.reset();
            recent_courses.push_back(course);
            if (recent_courses.size() > kChampionWindow)
                recent_courses.erase(recent_courses.begin());
        }

        std::tie(rate, sigma) = adapt_mutation(best_history, rate, sigma, config);

        Rng breed_rng(derive_seed(config.rng_seed,
                                  {kSeedTagBreed, static_cast<std::uint64_t>(generation)}));
        population = evolve_generation(population, fitness, rate, sigma, config, breed_rng);
        for (size_t i = static_cast<size_t>(config.elite_count); i < population.size(); ++i)
            population[i].metadata.generation = generation + 1;
    }

    // Champion: best mean fitness across the recent-course window. On a fixed
    // course with a deterministic evaluator this is the final generation's
    // best; under regeneration it filters out last-course specialists.
    std::vector<double> champion_score(population.size(), 0.0);
    for (size_t c = 0; c < recent_courses.size(); ++c) {
        const std::vector<EvalOutcome> outcomes =
            evaluate_wave(population, recent_courses[c], evaluator, config, kSeedTagChampion,
                          static_cast<int>(c), std::nullopt, threads);
        for (size_t i = 0; i < population.size(); ++i) champion_score[i] += outcomes[i].fitness;
    }
    const int champion = best_index(champion_score);
    result.best = population[static_cast<size_t>(champion)];
    result.best.metadata.fitness =
        champion_score[static_cast<size_t>(champion)] / static_cast<double>(recent_courses.size());
    result.best.metadata.course_id = course.course_id;

    return result;
}

Evaluator make_episode_evaluator(const EpisodeConfig& episode, const PhysicsConfig& physics,
                                 const SensorConfig& sensors, int trials) {
    return [episode, physics, sensors, trials](const Genome& genome, const Course& course,
                                               std::uint64_t eval_seed,
                                               const std::optional<int>& best_record_ticks) {
        const TrialSummary summary = evaluate_trials(genome, course, trials, eval_seed, episode,
                                                     physics, sensors, best_record_ticks);
        EvalOutcome outcome;
        outcome.fitness = summary.mean_fitness;
        outcome.reached_goal = summary.any_goal;
        outcome.completion_tick = summary.best_completion_tick;
        outcome.void_deaths = summary.void_deaths;
        return outcome;
    };
}

}  // namespace parkour
