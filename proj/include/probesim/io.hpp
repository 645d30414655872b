#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "probesim/autonomy.hpp"
#include "probesim/errors.hpp"

namespace probesim {

inline std::string trial_id(const TrialRecord& record) {
    return "team" + std::to_string(record.team) + "_seed" + std::to_string(record.seed);
}

// RFC-4180 CSV, header row, '.' decimal separator. Times are exact at two
// decimals (t is always a multiple of dt); positions carry six.
inline std::string trajectory_csv_string(const TrialRecord& record) {
    std::string out;
    out.reserve(record.rows.size() * 120 + 128);
    out += "trial_id,team,seed,t,x,y,z,vx,vy,vz,phase,tracker_px,tracker_py,cov_trace\n";
    const std::string id = trial_id(record);
    char buf[256];
    for (const auto& row : record.rows) {
        std::snprintf(buf, sizeof(buf),
                      "%s,%d,%llu,%.2f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%s,%.6f,%.6f,%.6f\n",
                      id.c_str(), record.team, static_cast<unsigned long long>(record.seed),
                      row.t, row.position.x, row.position.y, row.position.z, row.velocity.x,
                      row.velocity.y, row.velocity.z, row.phase.c_str(), row.tracker_px,
                      row.tracker_py, row.cov_trace);
        out += buf;
    }
    return out;
}

inline nlohmann::json events_json(const TrialRecord& record) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : record.events) {
        events.push_back({{"kind", to_string(e.kind)},
                          {"t", e.t},
                          {"x", e.position.x},
                          {"y", e.position.y},
                          {"z", e.position.z}});
    }
    return {{"version", "1"}, {"trial_id", trial_id(record)}, {"events", events}};
}

inline nlohmann::json manifest_json(const TrialRecord& record, const std::string& scenario_path) {
    return {{"version", "1"},
            {"trial_id", trial_id(record)},
            {"scenario", record.scenario_name},
            {"scenario_path", scenario_path},
            {"team", record.team},
            {"seed", record.seed},
            {"outcome", to_string(record.outcome)},
            {"duration_s", record.duration()},
            {"ticks", record.rows.size()}};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimError("cannot write " + path.string());
    out << text;
}

// trajectory.csv + events.json + manifest.json under dir.
inline void write_trial(const TrialRecord& record, const std::filesystem::path& dir,
                        const std::string& scenario_path) {
    std::filesystem::create_directories(dir);
    write_text(dir / "trajectory.csv", trajectory_csv_string(record));
    write_text(dir / "events.json", events_json(record).dump(2) + "\n");
    write_text(dir / "manifest.json", manifest_json(record, scenario_path).dump(2) + "\n");
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

inline MissionEventKind event_kind_from_string(const std::string& s) {
    if (s == "ATTACH") return MissionEventKind::ATTACH;
    if (s == "DETACH") return MissionEventKind::DETACH;
    if (s == "TOUCHDOWN") return MissionEventKind::TOUCHDOWN;
    if (s == "TRACKING_LOST") return MissionEventKind::TRACKING_LOST;
    if (s == "TRACKING_RECOVERED") return MissionEventKind::TRACKING_RECOVERED;
    throw SimError("unknown event kind: " + s);
}

inline TrialOutcome outcome_from_string(const std::string& s) {
    if (s == "SUCCESS") return TrialOutcome::SUCCESS;
    if (s == "TIMEOUT") return TrialOutcome::TIMEOUT;
    if (s == "CRASH") return TrialOutcome::CRASH;
    if (s == "LOST") return TrialOutcome::LOST;
    throw SimError("unknown outcome: " + s);
}

}  // namespace detail

// Rebuild a TrialRecord from a trial directory written by write_trial.
inline TrialRecord read_trial(const std::filesystem::path& dir) {
    TrialRecord record;

    std::ifstream manifest_in(dir / "manifest.json");
    if (!manifest_in) throw SimError("cannot open " + (dir / "manifest.json").string());
    nlohmann::json manifest;
    manifest_in >> manifest;
    record.team = manifest.at("team").get<int>();
    record.seed = manifest.at("seed").get<std::uint64_t>();
    record.scenario_name = manifest.value("scenario", "");
    record.outcome = detail::outcome_from_string(manifest.at("outcome").get<std::string>());

    std::ifstream events_in(dir / "events.json");
    if (!events_in) throw SimError("cannot open " + (dir / "events.json").string());
    nlohmann::json events;
    events_in >> events;
    for (const auto& e : events.at("events")) {
        MissionEvent event;
        event.kind = detail::event_kind_from_string(e.at("kind").get<std::string>());
        event.t = e.at("t").get<double>();
        event.position = {e.at("x").get<double>(), e.at("y").get<double>(),
                          e.at("z").get<double>()};
        record.events.push_back(event);
    }

    std::ifstream csv_in(dir / "trajectory.csv");
    if (!csv_in) throw SimError("cannot open " + (dir / "trajectory.csv").string());
    std::string line;
    std::getline(csv_in, line);  // header
    while (std::getline(csv_in, line)) {
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 14) throw SimError("malformed trajectory row in " + dir.string());
        TrialRow row;
        row.t = std::stod(fields[3]);
        row.position = {std::stod(fields[4]), std::stod(fields[5]), std::stod(fields[6])};
        row.velocity = {std::stod(fields[7]), std::stod(fields[8]), std::stod(fields[9])};
        row.phase = fields[10];
        row.tracker_px = std::stod(fields[11]);
        row.tracker_py = std::stod(fields[12]);
        row.cov_trace = std::stod(fields[13]);
        record.rows.push_back(row);
    }
    return record;
}

// All trial subdirectories of a batch output directory, sorted by name.
inline std::vector<TrialRecord> read_batch(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> trial_dirs;
    if (!std::filesystem::is_directory(dir)) throw SimError("not a directory: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "manifest.json"))
            trial_dirs.push_back(entry.path());
    }
    std::sort(trial_dirs.begin(), trial_dirs.end());
    std::vector<TrialRecord> records;
    records.reserve(trial_dirs.size());
    for (const auto& d : trial_dirs) records.push_back(read_trial(d));
    return records;
}

}  // namespace probesim
