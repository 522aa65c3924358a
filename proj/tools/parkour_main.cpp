// Command-line front end: train populations, evaluate and replay genomes,
// emit generated courses, and benchmark action-delay degradation.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "parkour/episode.hpp"
#include "parkour/evolution.hpp"
#include "parkour/policy.hpp"
#include "parkour/run_config.hpp"
#include "parkour/world.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace parkour;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

// Shortest round-trip formatting, identical to the JSON outputs.
std::string number_string(double v) { return json(v).dump(); }

struct CourseSelection {
    std::string path;
    std::optional<std::uint64_t> seed;
};

Course resolve_course(const CourseSelection& sel, const RunConfig& config) {
    if (!sel.path.empty()) return load_course(sel.path);
    if (sel.seed) return generate_course(config.cdr, *sel.seed);
    throw std::invalid_argument("either --course or --course-seed is required");
}

void add_course_options(CLI::App* cmd, CourseSelection& sel) {
    auto* path = cmd->add_option("--course", sel.path, "Course file to run on");
    cmd->add_option("--course-seed", sel.seed, "Generate the course from this seed instead")
        ->excludes(path);
}

json report_to_json(const FitnessReport& report, double mean_fitness, int trials_run) {
    json j;
    j["fitness"] = mean_fitness;
    j["reached_goal"] = report.reached_goal;
    j["termination"] = termination_name(report.termination);
    j["completion_tick"] = report.completion_tick ? json(*report.completion_tick) : json();
    j["best_progress"] = report.best_progress;
    j["trials"] = trials_run;
    return j;
}

int cmd_train(const std::string& config_path, const std::optional<std::uint64_t>& seed,
              const std::optional<int>& population, const std::optional<int>& max_generations,
              const std::optional<int>& elite, const std::optional<int>& trials,
              const std::optional<int>& threads, const std::string& course_path,
              const std::string& output_dir) {
    RunConfig config;
    EvolutionResult result;
    try {
        if (!config_path.empty()) config = load_run_config(config_path);
        if (seed) config.ga.rng_seed = *seed;
        if (population) config.ga.population_size = *population;
        if (max_generations) config.ga.max_generations = *max_generations;
        if (elite) config.ga.elite_count = *elite;
        if (trials) config.ga.trials_per_genome = *trials;
        if (threads) config.threads = *threads;
        if (!course_path.empty()) {
            config.mode = "fixed";
            config.course_path = course_path;
        }
        if (!output_dir.empty()) config.output_dir = output_dir;
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        CourseSource source;
        if (config.mode == "fixed") source = load_course(config.course_path);
        else source = CdrSource{config.cdr, config.ga.rng_seed};

        const Evaluator evaluator =
            make_episode_evaluator(config.episode, config.physics, config.wired_sensors(),
                                   config.ga.trials_per_genome);
        result = run_evolution(config.ga, source, evaluator, config.threads);

        fs::create_directories(config.output_dir);
        const fs::path out(config.output_dir);

        std::ofstream telemetry(out / "telemetry.jsonl");
        if (!telemetry)
            throw std::runtime_error("cannot write telemetry to " + config.output_dir);
        for (const GenerationRecord& record : result.records)
            telemetry << generation_record_to_json(record).dump() << '\n';

        const std::string best_name = "best_" +
                                      result.best.metadata.course_id.value_or("unknown") +
                                      "_gen" + std::to_string(result.best.metadata.generation) +
                                      ".json";
        save_genome(result.best, (out / best_name).string());
        save_run_config(config, (out / "config.json").string());

        const GenerationRecord& last = result.records.back();
        json summary;
        summary["generations_run"] = static_cast<int>(result.records.size());
        summary["best_fitness"] = last.best_fitness;
        summary["best_genome_file"] = best_name;
        summary["course_id"] = last.course_id;
        summary["reached_goal"] = last.best_reached_goal;
        summary["deterministic_trial_shortcut"] = config.episode.jitter.mode !=
                                                  JitterSpec::Mode::Bernoulli;
        std::ofstream summary_file(out / "summary.json");
        summary_file << summary.dump(2) << '\n';

        std::cout << summary.dump() << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cmd_eval(const std::string& genome_path, const CourseSelection& sel,
             const std::string& config_path, int trials, const std::optional<int>& jitter) {
    try {
        RunConfig config;
        if (!config_path.empty()) config = load_run_config(config_path);
        if (jitter) {
            config.episode.jitter.mode = JitterSpec::Mode::Fixed;
            config.episode.jitter.delay_ticks = *jitter;
        }
        const Genome genome = load_genome(genome_path);
        const Course course = resolve_course(sel, config);
        config.episode.validate();

        const SensorConfig sensors = config.wired_sensors();
        const FitnessReport first =
            run_episode(genome, course, config.episode, config.physics, sensors, std::nullopt,
                        derive_seed(0, {kSeedTagTrial, 0}));
        const TrialSummary summary = evaluate_trials(genome, course, trials, 0, config.episode,
                                                     config.physics, sensors);
        std::cout << report_to_json(first, summary.mean_fitness, summary.trials_run).dump()
                  << '\n';
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

int cmd_replay(const std::string& genome_path, const CourseSelection& sel,
               const std::string& config_path, const std::string& trace_path,
               const std::optional<int>& jitter) {
    Genome genome;
    Course course;
    RunConfig config;
    try {
        if (!config_path.empty()) config = load_run_config(config_path);
        if (jitter) {
            config.episode.jitter.mode = JitterSpec::Mode::Fixed;
            config.episode.jitter.delay_ticks = *jitter;
        }
        genome = load_genome(genome_path);
        course = resolve_course(sel, config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    try {
        const FitnessReport report =
            run_episode(genome, course, config.episode, config.physics, config.wired_sensors(),
                        std::nullopt, derive_seed(0, {kSeedTagTrial, 0}), true);
        std::ofstream out(trace_path);
        if (!out) throw std::runtime_error("cannot open trace output: " + trace_path);
        for (const TraceRow& row : report.trace) {
            json line;
            line["tick"] = row.tick;
            line["x"] = row.position.x;
            line["y"] = row.position.y;
            line["z"] = row.position.z;
            line["yaw"] = row.yaw;
            line["jump"] = row.action.jump;
            line["strafe_left"] = row.action.strafe_left;
            line["strafe_right"] = row.action.strafe_right;
            line["yaw_delta"] = row.action.yaw_delta;
            line["on_ground"] = row.on_ground;
            out << line.dump() << '\n';
        }
        if (!out.flush())
            throw std::runtime_error("failed writing trace output: " + trace_path);
        std::cout << report_to_json(report, report.fitness, 1).dump() << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cmd_course(std::uint64_t seed, const std::string& config_path,
               const std::optional<int>& cells, const std::optional<int>& max_gap,
               const std::optional<double>& block_probability,
               const std::optional<int>& death_threshold) {
    try {
        RunConfig config;
        if (!config_path.empty()) config = load_run_config(config_path);
        if (cells) config.cdr.cell_count = *cells;
        if (max_gap) config.cdr.max_gap = *max_gap;
        if (block_probability) config.cdr.block_probability = *block_probability;
        if (death_threshold) config.cdr.death_threshold = *death_threshold;
        const Course course = generate_course(config.cdr, seed);
        std::cout << course_to_json(course).dump(2) << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

int cmd_jitter_bench(const std::string& genome_path, const CourseSelection& sel,
                     const std::string& config_path, const std::vector<int>& delays,
                     int trials) {
    try {
        RunConfig config;
        if (!config_path.empty()) config = load_run_config(config_path);
        const Genome genome = load_genome(genome_path);
        const Course course = resolve_course(sel, config);

        const std::vector<JitterPoint> points =
            jitter_sweep(genome, course, delays, trials, config.episode, config.physics,
                         config.wired_sensors());
        std::cout << "delay_ticks,mean_fitness,success_rate\n";
        for (const JitterPoint& p : points)
            std::cout << p.delay_ticks << ',' << number_string(p.mean_fitness) << ','
                      << number_string(p.success_rate) << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neuroevolution sandbox for voxel parkour agents"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "Evolve a population and save the best genome");
    std::string train_config, train_course, train_output;
    std::optional<std::uint64_t> train_seed;
    std::optional<int> train_pop, train_gens, train_elite, train_trials, train_threads;
    train->add_option("--config", train_config, "Run configuration file (JSON)");
    train->add_option("--seed", train_seed, "Override ga.rng_seed");
    train->add_option("--population", train_pop, "Override ga.population_size");
    train->add_option("--max-generations", train_gens, "Override ga.max_generations");
    train->add_option("--elite", train_elite, "Override ga.elite_count");
    train->add_option("--trials", train_trials, "Override ga.trials_per_genome");
    train->add_option("--threads", train_threads, "Concurrent evaluations (0 = auto)");
    train->add_option("--course", train_course, "Train on this fixed course file");
    train->add_option("--output-dir", train_output, "Directory for telemetry and genomes");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a genome on a course");
    std::string eval_genome, eval_config;
    CourseSelection eval_course;
    int eval_trials = 1;
    std::optional<int> eval_jitter;
    eval->add_option("genome", eval_genome, "Genome JSON file")->required();
    add_course_options(eval, eval_course);
    eval->add_option("--config", eval_config, "Run configuration file (JSON)");
    eval->add_option("--trials", eval_trials, "Trials to average");
    eval->add_option("--jitter", eval_jitter, "Fixed action delay in ticks");

    // replay
    auto* replay = app.add_subcommand("replay", "Run one episode and dump a tick trace");
    std::string replay_genome, replay_config, replay_trace;
    CourseSelection replay_course;
    std::optional<int> replay_jitter;
    replay->add_option("genome", replay_genome, "Genome JSON file")->required();
    add_course_options(replay, replay_course);
    replay->add_option("--config", replay_config, "Run configuration file (JSON)");
    replay->add_option("--trace-out", replay_trace, "Trace JSONL output path")->required();
    replay->add_option("--jitter", replay_jitter, "Fixed action delay in ticks");

    // course
    auto* course = app.add_subcommand("course", "Generate a course and print its file");
    std::string course_config;
    std::uint64_t course_seed = 0;
    std::optional<int> course_cells, course_max_gap, course_death;
    std::optional<double> course_prob;
    course->add_option("--seed", course_seed, "Generation seed")->required();
    course->add_option("--config", course_config, "Run configuration file (JSON)");
    course->add_option("--cells", course_cells, "Override cdr.cell_count");
    course->add_option("--max-gap", course_max_gap, "Override cdr.max_gap");
    course->add_option("--block-probability", course_prob, "Override cdr.block_probability");
    course->add_option("--death-threshold", course_death, "Override cdr.death_threshold");

    // jitter-bench
    auto* bench = app.add_subcommand("jitter-bench", "Fitness vs action delay, as CSV");
    std::string bench_genome, bench_config;
    CourseSelection bench_course;
    std::vector<int> bench_delays;
    int bench_trials = 1;
    bench->add_option("genome", bench_genome, "Genome JSON file")->required();
    add_course_options(bench, bench_course);
    bench->add_option("--config", bench_config, "Run configuration file (JSON)");
    bench->add_option("--delays", bench_delays, "Delays (ticks) to sweep")
        ->required()
        ->delimiter(',');
    bench->add_option("--trials", bench_trials, "Trials per delay");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    if (train->parsed())
        return cmd_train(train_config, train_seed, train_pop, train_gens, train_elite,
                         train_trials, train_threads, train_course, train_output);
    if (eval->parsed())
        return cmd_eval(eval_genome, eval_course, eval_config, eval_trials, eval_jitter);
    if (replay->parsed())
        return cmd_replay(replay_genome, replay_course, replay_config, replay_trace,
                          replay_jitter);
    if (course->parsed())
        return cmd_course(course_seed, course_config, course_cells, course_max_gap, course_prob,
                          course_death);
    if (bench->parsed())
        return cmd_jitter_bench(bench_genome, bench_course, bench_config, bench_delays,
                                bench_trials);
    return kExitValidation;
}
