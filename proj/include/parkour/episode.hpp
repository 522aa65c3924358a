// Runs one policy through one course under the physics loop, scores the run
// with progression-shaped fitness, and can delay action delivery to model
// control-channel latency.
#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "parkour/physics.hpp"
#include "parkour/policy.hpp"
#include "parkour/sensing.hpp"
#include "parkour/world.hpp"

namespace parkour {

struct JitterSpec {
    enum class Mode { None, Fixed, Bernoulli };

    Mode mode = Mode::None;
    int delay_ticks = 0;      // Fixed / Bernoulli delay
    double probability = 0.0; // Bernoulli chance a command is delayed

    bool deterministic() const { return mode != Mode::Bernoulli; }
    void validate() const;
};

struct FitnessWeights {
    double progress = 100.0;
    double proximity = 200.0;
    double goal_bonus = 500.0;
    double record_bonus = 100.0;
    double early_death_penalty = 50.0;
    double stuck_penalty = 50.0;
};

struct EpisodeConfig {
    int timeout_ticks = 400;  // 20 s at 20 tps
    int stuck_window_ticks = 40;
    double stuck_displacement = 0.5;
    int early_death_ticks = 20;
    JitterSpec jitter;
    FitnessWeights weights;

    void validate() const;
};

enum class Termination { Goal, Void, Timeout };

const char* termination_name(Termination t);

struct TraceRow {
    int tick = 0;
    Vec3 position;
    double yaw = 0.0;
    ActionCommand action;  // the command applied on this tick
    bool on_ground = false;
};

struct FitnessReport {
    double fitness = 0.0;
    bool reached_goal = false;
    Termination termination = Termination::Timeout;
    std::optional<int> completion_tick;
    double best_progress = 0.0;  // blocks of goal-distance improvement over spawn
    std::vector<TraceRow> trace; // filled only when tracing is enabled
};

// Everything the scoring formula consumes; exposed so shaping properties can
// be tested without running physics.
struct EpisodeStats {
    double spawn_goal_distance = 1.0;
    double min_goal_distance = 1.0;
    bool reached_goal = false;
    Termination termination = Termination::Timeout;
    std::optional<int> completion_tick;
    int final_tick = 0;
    bool stuck = false;
};

double score_episode(const EpisodeStats& stats, const EpisodeConfig& config,
                     const std::optional<int>& best_record_ticks);

namespace detail {
// True when the horizontal displacement across the trailing window is below
// the threshold. track[t] is the position after tick t; tick is the index of
// the newest entry.
bool stuck_at(const std::vector<Vec3>& track, int tick, int window_ticks,
              double min_displacement);
}  // namespace detail

// FIFO delay line between the policy and the physics. One command is emitted
// per tick; each is applied exactly once, in emission order, once its arrival
// tick is due. Arrivals are forced non-decreasing so a late command can stall
// but never reorder the stream.
class ActionDelayQueue {
public:
    void push(int emit_tick, int delay_ticks, const ActionCommand& command);

    // The command to apply on this tick: the front of the queue if due,
    // otherwise the all-false idle action.
    ActionCommand pop_due(int tick);

    size_t pending() const { return queue_.size(); }

private:
    struct Pending {
        int arrival;
        ActionCommand command;
    };
    std::deque<Pending> queue_;
    int last_arrival_ = -1;
};

FitnessReport run_episode(const Genome& genome, const Course& course,
                          const EpisodeConfig& config, const PhysicsConfig& physics,
                          const SensorConfig& sensors,
                          std::optional<int> best_record_ticks = std::nullopt,
                          std::uint64_t rng_seed = 0, bool record_trace = false);

struct TrialSummary {
    double mean_fitness = 0.0;
    bool any_goal = false;
    std::optional<int> best_completion_tick;
    int void_deaths = 0;
    int trials_run = 0;
};

// Multi-trial evaluation with per-trial derived seeds. The fastest-completion
// record threads through the trials in order. Deterministic jitter collapses
// to a single executed trial since every trial would be identical.
TrialSummary evaluate_trials(const Genome& genome, const Course& course, int trials,
                             std::uint64_t base_seed, const EpisodeConfig& config,
                             const PhysicsConfig& physics, const SensorConfig& sensors,
                             std::optional<int> best_record_ticks = std::nullopt);

// Arithmetic-mean fitness over the trials.
double evaluate_averaged(const Genome& genome, const Course& course, int trials,
                         std::uint64_t base_seed, const EpisodeConfig& config,
                         const PhysicsConfig& physics, const SensorConfig& sensors);

struct JitterPoint {
    int delay_ticks = 0;
    double mean_fitness = 0.0;
    double success_rate = 0.0;
};

// Evaluates the genome under FixedDelay(d) for each requested delay; results
// are sorted ascending by delay.
std::vector<JitterPoint> jitter_sweep(const Genome& genome, const Course& course,
                                      const std::vector<int>& delays, int trials,
                                      const EpisodeConfig& config,
                                      const PhysicsConfig& physics,
                                      const SensorConfig& sensors,
                                      std::uint64_t base_seed = 0);

}  // namespace parkour
