#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "probesim/autonomy.hpp"
#include "probesim/errors.hpp"

namespace probesim {

// Cumulative completion times of the three mission steps (ATTACH, DETACH,
// TOUCHDOWN); absent when the trial never reached the event.
struct StepTiming {
    std::optional<double> step1_end;
    std::optional<double> step2_end;
    std::optional<double> step3_end;

    bool complete() const { return step1_end && step2_end && step3_end; }
};

inline StepTiming step_times(const TrialRecord& record) {
    StepTiming timing;
    timing.step1_end = record.event_time(MissionEventKind::ATTACH);
    timing.step2_end = record.event_time(MissionEventKind::DETACH);
    timing.step3_end = record.event_time(MissionEventKind::TOUCHDOWN);
    return timing;
}

struct StepStats {
    double mean = 0.0;
    double std = 0.0;  // sample std, n-1 denominator
    int n = 0;
};

namespace detail {

inline StepStats sample_stats(const std::vector<double>& values) {
    StepStats s;
    s.n = static_cast<int>(values.size());
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.n;
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (s.n - 1));
    }
    return s;
}

}  // namespace detail

// Per-step mean and sample std over complete trials only.
inline std::array<StepStats, 3> timing_summary(const std::vector<StepTiming>& timings) {
    std::array<std::vector<double>, 3> values;
    for (const auto& t : timings) {
        if (!t.complete()) continue;
        values[0].push_back(*t.step1_end);
        values[1].push_back(*t.step2_end);
        values[2].push_back(*t.step3_end);
    }
    if (values[0].size() < 2)
        throw InsufficientTrials("timing_summary: need >= 2 complete trials");
    return {detail::sample_stats(values[0]), detail::sample_stats(values[1]),
            detail::sample_stats(values[2])};
}

struct EnsembleStats {
    std::vector<double> time_grid;
    std::vector<Vec3> mean_xyz;
    std::vector<Vec3> std_xyz;
    int n_trials = 0;
};

namespace detail {

// Linear interpolation of a logged trajectory at time t; trials that ended
// earlier hold their final position.
inline Vec3 sample_position(const TrialRecord& record, double t) {
    const auto& rows = record.rows;
    if (rows.empty()) return {};
    if (t <= rows.front().t) return rows.front().position;
    if (t >= rows.back().t) return rows.back().position;
    auto it = std::lower_bound(rows.begin(), rows.end(), t,
                               [](const TrialRow& row, double value) { return row.t < value; });
    const TrialRow& hi = *it;
    if (hi.t == t) return hi.position;
    const TrialRow& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return lo.position + w * (hi.position - lo.position);
}

}  // namespace detail

inline EnsembleStats ensemble_stats(const std::vector<TrialRecord>& records, double grid_dt) {
    if (records.size() < 2) throw InsufficientTrials("ensemble_stats: need >= 2 records");
    if (grid_dt <= 0.0) throw SimError("ensemble_stats: grid_dt must be > 0");

    double max_duration = 0.0;
    for (const auto& r : records) max_duration = std::max(max_duration, r.duration());

    EnsembleStats stats;
    stats.n_trials = static_cast<int>(records.size());
    const int n_points = static_cast<int>(std::floor(max_duration / grid_dt)) + 1;
    const double n = static_cast<double>(records.size());
    for (int j = 0; j < n_points; ++j) {
        const double t = j * grid_dt;
        Vec3 mean;
        for (const auto& r : records) mean = mean + detail::sample_position(r, t);
        mean = (1.0 / n) * mean;
        Vec3 ss;
        for (const auto& r : records) {
            const Vec3 d = detail::sample_position(r, t) - mean;
            ss = ss + Vec3{d.x * d.x, d.y * d.y, d.z * d.z};
        }
        const double denom = n - 1.0;
        stats.time_grid.push_back(t);
        stats.mean_xyz.push_back(mean);
        stats.std_xyz.push_back(
            {std::sqrt(ss.x / denom), std::sqrt(ss.y / denom), std::sqrt(ss.z / denom)});
    }
    return stats;
}

// Mean per-axis positional std over a step's time window (window taken from
// the batch's mean cumulative step times, so each team is normalized to its
// own step span).
struct StepSpread {
    Vec3 per_axis;
    double mean = 0.0;
};

namespace detail {

inline StepSpread window_spread(const EnsembleStats& ens, double t_begin, double t_end) {
    Vec3 acc;
    int count = 0;
    for (std::size_t j = 0; j < ens.time_grid.size(); ++j) {
        const double t = ens.time_grid[j];
        if (t < t_begin || t > t_end) continue;
        acc = acc + ens.std_xyz[j];
        ++count;
    }
    StepSpread spread;
    if (count > 0) {
        spread.per_axis = (1.0 / count) * acc;
        spread.mean = (spread.per_axis.x + spread.per_axis.y + spread.per_axis.z) / 3.0;
    }
    return spread;
}

}  // namespace detail

struct TeamSummary {
    int n_trials = 0;
    int n_success = 0;
    double success_rate = 0.0;
    std::array<StepStats, 3> cumulative;  // mean/std of cumulative step times
    std::array<StepStats, 3> durations;   // per-step durations, for transparency
    std::array<StepSpread, 3> step_spread;
};

struct CompareReport {
    TeamSummary team1;
    TeamSummary team2;
    std::array<std::string, 3> faster_team;           // "team1" | "team2" | "EQUAL"
    std::array<std::string, 3> more_consistent_team;  // lower mean positional std
    EnsembleStats ensemble_team1;
    EnsembleStats ensemble_team2;
};

namespace detail {

inline TeamSummary summarize_team(const std::vector<TrialRecord>& records,
                                  const EnsembleStats& ens) {
    TeamSummary summary;
    summary.n_trials = static_cast<int>(records.size());
    std::vector<StepTiming> timings;
    for (const auto& r : records) {
        if (r.outcome == TrialOutcome::SUCCESS) ++summary.n_success;
        timings.push_back(step_times(r));
    }
    summary.success_rate =
        summary.n_trials > 0 ? static_cast<double>(summary.n_success) / summary.n_trials : 0.0;
    summary.cumulative = timing_summary(timings);

    std::array<std::vector<double>, 3> durations;
    for (const auto& t : timings) {
        if (!t.complete()) continue;
        durations[0].push_back(*t.step1_end);
        durations[1].push_back(*t.step2_end - *t.step1_end);
        durations[2].push_back(*t.step3_end - *t.step2_end);
    }
    for (int s = 0; s < 3; ++s) summary.durations[s] = sample_stats(durations[s]);

    const double t1 = summary.cumulative[0].mean;
    const double t2 = summary.cumulative[1].mean;
    const double t3 = summary.cumulative[2].mean;
    summary.step_spread[0] = window_spread(ens, 0.0, t1);
    summary.step_spread[1] = window_spread(ens, t1, t2);
    summary.step_spread[2] = window_spread(ens, t2, t3);
    return summary;
}

inline std::string pick_lower(double a, double b) {
    if (a < b) return "team1";
    if (b < a) return "team2";
    return "EQUAL";
}

}  // namespace detail

inline CompareReport compare_report(const std::vector<TrialRecord>& team1_records,
                                    const std::vector<TrialRecord>& team2_records,
                                    double grid_dt = 0.5) {
    if (team1_records.empty() || team2_records.empty())
        throw InsufficientTrials("compare_report: both batches must be non-empty");

    CompareReport report;
    report.ensemble_team1 = ensemble_stats(team1_records, grid_dt);
    report.ensemble_team2 = ensemble_stats(team2_records, grid_dt);
    report.team1 = detail::summarize_team(team1_records, report.ensemble_team1);
    report.team2 = detail::summarize_team(team2_records, report.ensemble_team2);
    for (int s = 0; s < 3; ++s) {
        report.faster_team[s] =
            detail::pick_lower(report.team1.cumulative[s].mean, report.team2.cumulative[s].mean);
        report.more_consistent_team[s] = detail::pick_lower(report.team1.step_spread[s].mean,
                                                            report.team2.step_spread[s].mean);
    }
    return report;
}

}  // namespace probesim
