#pragma once

#include <cstdint>
#include <thread>
#include <vector>

#include "probesim/autonomy.hpp"
#include "probesim/scenario.hpp"

namespace probesim {

// Seeds base_seed .. base_seed + trials - 1, run independently (results do not
// depend on execution order). max_threads <= 0 means hardware concurrency.
inline std::vector<TrialRecord> run_batch(const Scenario& scenario, int team,
                                          std::uint64_t base_seed, int trials,
                                          int max_threads = 0) {
    if (trials < 1) throw ScenarioInvalid("batch: trials must be >= 1");
    std::vector<TrialRecord> records(trials);

    int n_threads = max_threads > 0 ? max_threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = std::min(n_threads, trials);

    if (n_threads == 1) {
        for (int i = 0; i < trials; ++i)
            records[i] = run_trial(scenario, team, base_seed + i);
        return records;
    }

    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w) {
        workers.emplace_back([&, w]() {
            for (int i = w; i < trials; i += n_threads)
                records[i] = run_trial(scenario, team, base_seed + i);
        });
    }
    for (auto& worker : workers) worker.join();
    return records;
}

}  // namespace probesim
