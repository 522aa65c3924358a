#include "parkour/episode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parkour/rng.hpp"

namespace parkour {

void JitterSpec::validate() const {
    if (delay_ticks < 0) throw std::invalid_argument("jitter.delay_ticks: must be >= 0");
    if (probability < 0.0 || probability > 1.0 || std::isnan(probability))
        throw std::invalid_argument("jitter.probability: must lie in [0, 1]");
}

void EpisodeConfig::validate() const {
    if (timeout_ticks < 1) throw std::invalid_argument("episode.timeout_ticks: must be >= 1");
    if (stuck_window_ticks < 1 || stuck_window_ticks >= timeout_ticks)
        throw std::invalid_argument("episode.stuck_window_ticks: must lie in [1, timeout_ticks)");
    if (!(stuck_displacement > 0.0))
        throw std::invalid_argument("episode.stuck_displacement: must be positive");
    if (early_death_ticks < 1 || early_death_ticks >= timeout_ticks)
        throw std::invalid_argument("episode.early_death_ticks: must lie in [1, timeout_ticks)");
    jitter.validate();
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::Goal: return "goal";
        case Termination::Void: return "void";
        case Termination::Timeout: return "timeout";
    }
    return "?";
}

double score_episode(const EpisodeStats& stats, const EpisodeConfig& config,
                     const std::optional<int>& best_record_ticks) {
    const FitnessWeights& w = config.weights;
    const double progress_fraction =
        (stats.spawn_goal_distance - stats.min_goal_distance) / stats.spawn_goal_distance;
    const double proximity = 1.0 / (1.0 + stats.min_goal_distance);

    double fitness = w.progress * progress_fraction + w.proximity * proximity;
    if (stats.reached_goal) {
        fitness += w.goal_bonus;
        const int tick = *stats.completion_tick;
        if (!best_record_ticks || tick < *best_record_ticks)
            fitness += w.record_bonus * static_cast<double>(config.timeout_ticks - tick) /
                       config.timeout_ticks;
    }
    if (stats.termination == Termination::Void && stats.final_tick < config.early_death_ticks)
        fitness -= w.early_death_penalty;
    if (stats.stuck) fitness -= w.stuck_penalty;
    return fitness;
}

namespace detail {

bool stuck_at(const std::vector<Vec3>& track, int tick, int window_ticks,
              double min_displacement) {
    if (tick < window_ticks) return false;
    const Vec3 delta = track[static_cast<size_t>(tick)] -
                       track[static_cast<size_t>(tick - window_ticks)];
    return delta.horizontal_length() < min_displacement;
}

}  // namespace detail

void ActionDelayQueue::push(int emit_tick, int delay_ticks, const ActionCommand& command) {
    const int arrival = std::max(emit_tick + delay_ticks, last_arrival_ + 1);
    queue_.push_back({arrival, command});
    last_arrival_ = arrival;
}

ActionCommand ActionDelayQueue::pop_due(int tick) {
    if (!queue_.empty() && queue_.front().arrival <= tick) {
        const ActionCommand command = queue_.front().command;
        queue_.pop_front();
        return command;
    }
    return ActionCommand{};
}

FitnessReport run_episode(const Genome& genome, const Course& course,
                          const EpisodeConfig& config, const PhysicsConfig& physics,
                          const SensorConfig& sensors,
                          std::optional<int> best_record_ticks, std::uint64_t rng_seed,
                          bool record_trace) {
    config.validate();
    physics.validate();
    sensors.validate();

    AgentState state = spawn(course, physics);
    Rng jitter_rng(derive_seed(rng_seed, {kSeedTagTrial}));
    ActionDelayQueue queue;

    const Vec3 goal = course.goal_center();
    const double spawn_distance = distance(state.position, goal);
    double min_distance = spawn_distance;
    bool stuck = false;

    // Horizontal positions per tick, for the stuck-window check.
    std::vector<Vec3> track;
    track.reserve(static_cast<size_t>(config.timeout_ticks) + 1);
    track.push_back(state.position);

    FitnessReport report;
    if (record_trace)
        report.trace.push_back({0, state.position, state.yaw, ActionCommand{}, state.on_ground});

    while (state.alive && !state.reached_goal && state.tick < config.timeout_ticks) {
        const InputVector input = sense(state, course, sensors);
        const ActionCommand command = forward(genome, input);
        int delay = 0;
        switch (config.jitter.mode) {
            case JitterSpec::Mode::None: break;
            case JitterSpec::Mode::Fixed: delay = config.jitter.delay_ticks; break;
            case JitterSpec::Mode::Bernoulli:
                delay = jitter_rng.uniform_double() < config.jitter.probability
                            ? config.jitter.delay_ticks
                            : 0;
                break;
        }
        queue.push(state.tick, delay, command);
        const ActionCommand applied = queue.pop_due(state.tick);

        state = step(state, applied, course, physics);

        min_distance = std::min(min_distance, distance(state.position, goal));
        track.push_back(state.position);
        if (state.alive && !state.reached_goal && !stuck &&
            detail::stuck_at(track, state.tick, config.stuck_window_ticks,
                             config.stuck_displacement))
            stuck = true;
        if (record_trace)
            report.trace.push_back(
                {state.tick, state.position, state.yaw, applied, state.on_ground});
    }

    EpisodeStats stats;
    stats.spawn_goal_distance = spawn_distance;
    stats.min_goal_distance = min_distance;
    stats.reached_goal = state.reached_goal;
    stats.termination = state.reached_goal
                            ? Termination::Goal
                            : (!state.alive ? Termination::Void : Termination::Timeout);
    if (state.reached_goal) stats.completion_tick = state.tick;
    stats.final_tick = state.tick;
    stats.stuck = stuck;

    report.fitness = score_episode(stats, config, best_record_ticks);
    report.reached_goal = stats.reached_goal;
    report.termination = stats.termination;
    report.completion_tick = stats.completion_tick;
    report.best_progress = spawn_distance - min_distance;
    return report;
}

TrialSummary evaluate_trials(const Genome& genome, const Course& course, int trials,
                             std::uint64_t base_seed, const EpisodeConfig& config,
                             const PhysicsConfig& physics, const SensorConfig& sensors,
                             std::optional<int> best_record_ticks) {
    if (trials < 1) throw std::invalid_argument("evaluate_trials: trials must be >= 1");
    // Every trial of a deterministic episode is identical, so one suffices
    // and the mean is unchanged.
    const int runs = config.jitter.deterministic() ? 1 : trials;

    TrialSummary summary;
    summary.trials_run = runs;
    std::optional<int> record = best_record_ticks;
    double total = 0.0;
    for (int t = 0; t < runs; ++t) {
        const std::uint64_t seed = derive_seed(base_seed, {kSeedTagTrial, static_cast<std::uint64_t>(t)});
        const FitnessReport report =
            run_episode(genome, course, config, physics, sensors, record, seed, false);
        total += report.fitness;
        if (report.reached_goal) {
            summary.any_goal = true;
            if (!summary.best_completion_tick ||
                *report.completion_tick < *summary.best_completion_tick)
                summary.best_completion_tick = report.completion_tick;
            if (!record || *report.completion_tick < *record) record = report.completion_tick;
        }
        if (report.termination == Termination::Void) ++summary.void_deaths;
    }
    summary.mean_fitness = total / runs;
    return summary;
}

double evaluate_averaged(const Genome& genome, const Course& course, int trials,
                         std::uint64_t base_seed, const EpisodeConfig& config,
                         const PhysicsConfig& physics, const SensorConfig& sensors) {
    return evaluate_trials(genome, course, trials, base_seed, config, physics, sensors)
        .mean_fitness;
}

std::vector<JitterPoint> jitter_sweep(const Genome& genome, const Course& course,
                                      const std::vector<int>& delays, int trials,
                                      const EpisodeConfig& config,
                                      const PhysicsConfig& physics,
                                      const SensorConfig& sensors, std::uint64_t base_seed) {
    std::vector<int> sorted = delays;
    std::sort(sorted.begin(), sorted.end());

    std::vector<JitterPoint> points;
    points.reserve(sorted.size());
    for (int d : sorted) {
        EpisodeConfig sweep_config = config;
        sweep_config.jitter.mode = JitterSpec::Mode::Fixed;
        sweep_config.jitter.delay_ticks = d;
        const TrialSummary summary = evaluate_trials(
            genome, course, trials, derive_seed(base_seed, {static_cast<std::uint64_t>(d)}),
            sweep_config, physics, sensors);
        points.push_back({d, summary.mean_fitness, summary.any_goal ? 1.0 : 0.0});
    }
    return points;
}

}  // namespace parkour
