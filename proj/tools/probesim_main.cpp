// probesim command-line front end: single trials, seeded batches, and batch
// analysis. Exit codes: 0 success, 1 usage/config error, 2 mission failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "probesim/probesim.hpp"

namespace fs = std::filesystem;
using namespace probesim;

namespace {

int thread_cap_from_env() {
    const char* env = std::getenv("SIM_THREADS");
    if (!env) return 0;
    const int n = std::atoi(env);
    return n > 0 ? n : 0;
}

nlohmann::json batch_manifest(const std::string& scenario_path, int team,
                              const std::vector<std::uint64_t>& seeds,
                              const std::vector<TrialRecord>& records,
                              const std::string& out_dir) {
    nlohmann::json outcomes = nlohmann::json::array();
    int n_success = 0;
    for (const auto& r : records) {
        outcomes.push_back({{"seed", r.seed}, {"outcome", to_string(r.outcome)}});
        if (r.outcome == TrialOutcome::SUCCESS) ++n_success;
    }
    return {{"version", "1"},
            {"scenario_path", scenario_path},
            {"team", team},
            {"seeds", seeds},
            {"output_dir", out_dir},
            {"trials", records.size()},
            {"n_success", n_success},
            {"success_rate", records.empty() ? 0.0 : double(n_success) / records.size()},
            {"outcomes", outcomes}};
}

int cmd_run(const std::string& scenario_path, int team, std::uint64_t seed, bool seed_given,
            const std::string& out_dir) {
    const Scenario scenario = load_scenario(scenario_path);
    if (!seed_given) seed = scenario.default_seed;
    const TrialRecord record = run_trial(scenario, team, seed);
    write_trial(record, out_dir, scenario_path);
    std::printf("trial %s: outcome=%s duration=%.2fs events=%zu\n", trial_id(record).c_str(),
                to_string(record.outcome), record.duration(), record.events.size());
    return record.outcome == TrialOutcome::SUCCESS ? 0 : 2;
}

int cmd_batch(const std::string& scenario_path, int team, int trials, std::uint64_t base_seed,
              const std::string& out_dir) {
    const Scenario scenario = load_scenario(scenario_path);
    const auto records = run_batch(scenario, team, base_seed, trials, thread_cap_from_env());

    std::vector<std::uint64_t> seeds;
    int n_success = 0;
    for (const auto& record : records) {
        seeds.push_back(record.seed);
        if (record.outcome == TrialOutcome::SUCCESS) ++n_success;
        write_trial(record, fs::path(out_dir) / ("trial_seed" + std::to_string(record.seed)),
                    scenario_path);
    }
    write_text(fs::path(out_dir) / "batch_manifest.json",
               batch_manifest(scenario_path, team, seeds, records, out_dir).dump(2) + "\n");

    const double rate = trials > 0 ? double(n_success) / trials : 0.0;
    std::printf("batch team=%d trials=%d success=%d/%d (%.0f%%)\n", team, trials, n_success,
                trials, 100.0 * rate);
    return rate >= 0.9 ? 0 : 2;
}

int cmd_analyze(const std::string& team1_dir, const std::string& team2_dir,
                const std::string& out_dir, double grid_dt) {
    const auto team1_records = read_batch(team1_dir);
    const auto team2_records = read_batch(team2_dir);
    const CompareReport report = compare_report(team1_records, team2_records, grid_dt);
    write_report(report, out_dir);
    std::printf("analyze: %zu vs %zu trials -> %s\n", team1_records.size(),
                team2_records.size(), (fs::path(out_dir) / "metrics.json").string().c_str());
    for (int s = 0; s < 3; ++s)
        std::printf("  step %d: faster=%s more_consistent=%s\n", s + 1,
                    report.faster_team[s].c_str(), report.more_consistent_team[s].c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale sUAS probe-recovery mission simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    int team = 2;
    std::uint64_t seed = 0;
    int trials = 20;
    std::uint64_t base_seed = 0;
    double grid_dt = 0.5;
    std::string team1_dir, team2_dir;

    auto* run = app.add_subcommand("run", "Run a single trial");
    run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--team", team, "Team autonomy stack (1 or 2)")->check(CLI::Range(1, 2));
    auto* seed_opt = run->add_option("--seed", seed, "Trial seed");
    run->add_option("--out", out_dir, "Output directory");

    auto* batch = app.add_subcommand("batch", "Run a seeded batch of trials");
    batch->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    batch->add_option("--team", team, "Team autonomy stack (1 or 2)")->check(CLI::Range(1, 2));
    batch->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
    batch->add_option("--base-seed", base_seed, "First seed; trial i uses base-seed + i");
    batch->add_option("--out", out_dir, "Output directory");

    auto* analyze = app.add_subcommand("analyze", "Compare two batch directories");
    analyze->add_option("--team1", team1_dir, "Team 1 batch directory")->required();
    analyze->add_option("--team2", team2_dir, "Team 2 batch directory")->required();
    analyze->add_option("--out", out_dir, "Output directory");
    analyze->add_option("--grid-dt", grid_dt, "Ensemble resampling step, s")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints the message / help text
        return code == 0 ? 0 : 1;      // usage errors are exit 1
    }

    try {
        if (run->parsed()) return cmd_run(scenario_path, team, seed, seed_opt->count() > 0, out_dir);
        if (batch->parsed()) return cmd_batch(scenario_path, team, trials, base_seed, out_dir);
        if (analyze->parsed()) return cmd_analyze(team1_dir, team2_dir, out_dir, grid_dt);
    } catch (const ScenarioInvalid& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const InsufficientTrials& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const SimError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
