#pragma once

#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "probesim/io.hpp"
#include "probesim/metrics.hpp"

namespace probesim {

namespace detail {

inline nlohmann::json stats_json(const StepStats& s) {
    return {{"mean_s", s.mean}, {"std_s", s.std}, {"n", s.n}};
}

inline nlohmann::json spread_json(const StepSpread& s) {
    return {{"x", s.per_axis.x}, {"y", s.per_axis.y}, {"z", s.per_axis.z}, {"mean", s.mean}};
}

inline nlohmann::json team_json(const TeamSummary& t) {
    nlohmann::json j;
    j["n_trials"] = t.n_trials;
    j["n_success"] = t.n_success;
    j["success_rate"] = t.success_rate;
    for (int s = 0; s < 3; ++s) {
        const std::string key = "step" + std::to_string(s + 1);
        j["cumulative_time"][key] = stats_json(t.cumulative[s]);
        j["duration"][key] = stats_json(t.durations[s]);
        j["position_std"][key] = spread_json(t.step_spread[s]);
    }
    return j;
}

}  // namespace detail

inline nlohmann::json metrics_json(const CompareReport& report) {
    nlohmann::json j;
    j["version"] = "1";
    j["team1"] = detail::team_json(report.team1);
    j["team2"] = detail::team_json(report.team2);
    for (int s = 0; s < 3; ++s) {
        const std::string key = "step" + std::to_string(s + 1);
        j["comparison"]["faster_team"][key] = report.faster_team[s];
        j["comparison"]["more_consistent_team"][key] = report.more_consistent_team[s];
    }
    return j;
}

// Table-1-shaped timing summary.
inline std::string timing_csv_string(const CompareReport& report) {
    std::string out = "step,team1_mean_s,team2_mean_s,team1_std_s,team2_std_s\n";
    char buf[160];
    for (int s = 0; s < 3; ++s) {
        std::snprintf(buf, sizeof(buf), "%d,%.3f,%.3f,%.3f,%.3f\n", s + 1,
                      report.team1.cumulative[s].mean, report.team2.cumulative[s].mean,
                      report.team1.cumulative[s].std, report.team2.cumulative[s].std);
        out += buf;
    }
    return out;
}

// Resampled per-team ensemble mean/std curves, one row per (team, grid time).
inline std::string ensemble_csv_string(const CompareReport& report) {
    std::string out = "team,t,mean_x,mean_y,mean_z,std_x,std_y,std_z\n";
    char buf[256];
    const auto emit = [&](int team, const EnsembleStats& ens) {
        for (std::size_t j = 0; j < ens.time_grid.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%d,%.2f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", team,
                          ens.time_grid[j], ens.mean_xyz[j].x, ens.mean_xyz[j].y,
                          ens.mean_xyz[j].z, ens.std_xyz[j].x, ens.std_xyz[j].y,
                          ens.std_xyz[j].z);
            out += buf;
        }
    };
    emit(1, report.ensemble_team1);
    emit(2, report.ensemble_team2);
    return out;
}

inline void write_report(const CompareReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text(dir / "metrics.json", metrics_json(report).dump(2) + "\n");
    write_text(dir / "timing.csv", timing_csv_string(report));
    write_text(dir / "ensemble.csv", ensemble_csv_string(report));
}

}  // namespace probesim
