#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "probesim/autonomy.hpp"
#include "probesim/batch.hpp"
#include "probesim/io.hpp"

using namespace probesim;

namespace {

Scenario default_scenario() {
    return load_scenario(std::string(PROBESIM_SCENARIO_DIR) + "/default.json");
}

Scenario low_feature_scenario() {
    return load_scenario(std::string(PROBESIM_SCENARIO_DIR) + "/low_feature.json");
}

int phase_rank_team1(const std::string& p) {
    if (p == "PROBE") return 0;
    if (p == "DROP") return 1;
    if (p == "ROVER") return 2;
    if (p == "END") return 3;
    return -1;
}

int phase_rank_team2(const std::string& p) {
    if (p == "SEARCH") return 0;
    if (p == "DOCK_DESCENT") return 1;
    if (p == "TRANSIT") return 2;
    if (p == "DEPLOY") return 3;
    if (p == "PURSUIT") return 4;
    if (p == "LAND") return 5;
    if (p == "DONE") return 6;
    return -1;
}

}  // namespace

TEST(DockingAllowed, WithinBothThresholds) {
    // distance 0.5 m, inclination 20 deg -> allowed.
    const double incl = deg2rad(20.0);
    const Vec3 vehicle{0.0, 0.0, 1.0};
    const Vec3 probe{0.5 * std::sin(incl), 0.0, 1.0 - 0.5 * std::cos(incl)};
    EXPECT_TRUE(docking_allowed(vehicle, probe, 0.6, deg2rad(30.0)));
}

TEST(DockingAllowed, DistanceGateRejects) {
    // distance 0.7 m, inclination 10 deg -> rejected.
    const double incl = deg2rad(10.0);
    const Vec3 vehicle{0.0, 0.0, 1.0};
    const Vec3 probe{0.7 * std::sin(incl), 0.0, 1.0 - 0.7 * std::cos(incl)};
    EXPECT_FALSE(docking_allowed(vehicle, probe, 0.6, deg2rad(30.0)));
}

TEST(DockingAllowed, InclinationGateRejects) {
    // distance 0.5 m, inclination 35 deg -> rejected.
    const double incl = deg2rad(35.0);
    const Vec3 vehicle{0.0, 0.0, 1.0};
    const Vec3 probe{0.5 * std::sin(incl), 0.0, 1.0 - 0.5 * std::cos(incl)};
    EXPECT_FALSE(docking_allowed(vehicle, probe, 0.6, deg2rad(30.0)));
}

TEST(DockingAllowed, ProbeAboveVehicleRejected) {
    EXPECT_FALSE(docking_allowed({0.0, 0.0, 1.0}, {0.0, 0.0, 1.4}, 0.6, deg2rad(30.0)));
}

TEST(Team1Executive, EndModeIsTerminalZeroCommand) {
    Scenario sc = default_scenario();
    Team1Executive exec(sc);
    exec.mode = Team1Mode::END;
    exec.touchdown_emitted = true;
    SensorFrame frame;
    VehicleState vehicle;
    ContactGates gates;
    RoverTrackState tracker;
    for (int i = 0; i < 10; ++i) {
        const StepOutput out = exec.step(frame, tracker, vehicle, gates, i * sc.dt);
        EXPECT_DOUBLE_EQ(norm(out.command), 0.0);
        EXPECT_TRUE(out.events.empty());
        EXPECT_EQ(exec.mode, Team1Mode::END);
    }
}

TEST(Team1Executive, EndWithoutTouchdownThrows) {
    Scenario sc = default_scenario();
    Team1Executive exec(sc);
    exec.mode = Team1Mode::END;
    SensorFrame frame;
    VehicleState vehicle;
    ContactGates gates;
    RoverTrackState tracker;
    EXPECT_THROW(exec.step(frame, tracker, vehicle, gates, 0.0), InvalidTransition);
}

TEST(Team1Executive, AttachTransitionsToDropAndEmitsEvent) {
    Scenario sc = default_scenario();
    Team1Executive exec(sc);
    SensorFrame frame;
    VehicleState vehicle;
    vehicle.position = {30.0, 20.0, 0.5};
    ContactGates gates;
    gates.docking_ok = true;
    RoverTrackState tracker;
    const StepOutput out = exec.step(frame, tracker, vehicle, gates, 12.3);
    ASSERT_EQ(out.events.size(), 1u);
    EXPECT_EQ(out.events[0].kind, MissionEventKind::ATTACH);
    EXPECT_DOUBLE_EQ(out.events[0].t, 12.3);
    EXPECT_EQ(exec.mode, Team1Mode::DROP);
}

TEST(Team1Executive, HoversWhileTrackingLost) {
    Scenario sc = default_scenario();
    Team1Executive exec(sc);
    exec.mode = Team1Mode::ROVER;
    SensorFrame frame;
    VehicleState vehicle;
    vehicle.position = {0.0, 40.0, 10.0};
    ContactGates gates;
    gates.alt_above_trunk = 8.0;
    gates.horizontal_offset = 25.0;
    RoverTrackState tracker;
    tracker.tracking_lost = true;
    StepOutput out = exec.step(frame, tracker, vehicle, gates, 100.0);
    ASSERT_EQ(out.events.size(), 1u);
    EXPECT_EQ(out.events[0].kind, MissionEventKind::TRACKING_LOST);
    EXPECT_DOUBLE_EQ(norm(out.command), 0.0);
    EXPECT_EQ(exec.mode, Team1Mode::ROVER);
    // Still lost: hover continues, no duplicate event.
    out = exec.step(frame, tracker, vehicle, gates, 100.05);
    EXPECT_TRUE(out.events.empty());
    EXPECT_DOUBLE_EQ(norm(out.command), 0.0);
    // Recovery emits the paired event.
    tracker.tracking_lost = false;
    out = exec.step(frame, tracker, vehicle, gates, 100.10);
    ASSERT_EQ(out.events.size(), 1u);
    EXPECT_EQ(out.events[0].kind, MissionEventKind::TRACKING_RECOVERED);
}

TEST(Team2Executive, SearchTransitionsOnProbeDetection) {
    Scenario sc = default_scenario();
    Team2Executive exec(sc);
    SensorFrame frame;
    frame.probe = Detection{0.0, 0.0, 250.0, 10.0};
    VehicleState vehicle;
    vehicle.position = {30.0, 20.0, 10.0};
    ContactGates gates;
    const StepOutput out = exec.step(frame, vehicle, gates, 5.0);
    EXPECT_EQ(exec.phase, Team2Phase::DOCK_DESCENT);
    EXPECT_TRUE(out.events.empty());
}

TEST(Team2Executive, PursuitAltitudeScheduleMatchesLinearRule) {
    // At 10 m horizontal range: target = 0.5 + (5 - 0.5) * 10 / 20 = 2.75 m.
    Scenario sc = default_scenario();
    const double range = 10.0;
    const double target = sc.team2.pursuit_near_altitude +
                          (sc.team2.pursuit_far_altitude - sc.team2.pursuit_near_altitude) *
                              std::min(range, sc.team2.pursuit_far_range) /
                              sc.team2.pursuit_far_range;
    EXPECT_NEAR(target, 2.75, 1e-12);
}

TEST(Team2Executive, DoneWithoutTouchdownThrows) {
    Scenario sc = default_scenario();
    Team2Executive exec(sc);
    exec.phase = Team2Phase::DONE;
    SensorFrame frame;
    VehicleState vehicle;
    ContactGates gates;
    EXPECT_THROW(exec.step(frame, vehicle, gates, 0.0), InvalidTransition);
}

TEST(RunTrial, SuccessTrialsHaveOrderedEvents) {
    Scenario sc = default_scenario();
    for (int team : {1, 2}) {
        for (std::uint64_t seed : {0, 7, 13}) {
            const TrialRecord rec = run_trial(sc, team, seed);
            ASSERT_EQ(rec.outcome, TrialOutcome::SUCCESS) << "team " << team << " seed " << seed;
            const auto attach = rec.event_time(MissionEventKind::ATTACH);
            const auto detach = rec.event_time(MissionEventKind::DETACH);
            const auto touchdown = rec.event_time(MissionEventKind::TOUCHDOWN);
            ASSERT_TRUE(attach && detach && touchdown);
            EXPECT_LT(*attach, *detach);
            EXPECT_LT(*detach, *touchdown);
        }
    }
}

TEST(RunTrial, InvalidTeamThrows) {
    Scenario sc = default_scenario();
    EXPECT_THROW(run_trial(sc, 3, 0), ScenarioInvalid);
}

TEST(RunTrial, DeterministicRerunsAreByteIdentical) {
    Scenario sc = default_scenario();
    const TrialRecord a = run_trial(sc, 2, 7);
    const TrialRecord b = run_trial(sc, 2, 7);
    EXPECT_EQ(trajectory_csv_string(a), trajectory_csv_string(b));
    EXPECT_EQ(events_json(a).dump(2), events_json(b).dump(2));
    const TrialRecord c = run_trial(sc, 1, 3);
    const TrialRecord d = run_trial(sc, 1, 3);
    EXPECT_EQ(trajectory_csv_string(c), trajectory_csv_string(d));
}

TEST(RunTrial, PhaseSequencesAreMonotone) {
    Scenario sc = default_scenario();
    for (int team : {1, 2}) {
        const TrialRecord rec = run_trial(sc, team, 4);
        int prev = -1;
        for (const auto& row : rec.rows) {
            const int rank =
                team == 1 ? phase_rank_team1(row.phase) : phase_rank_team2(row.phase);
            ASSERT_GE(rank, prev) << "backward transition at t=" << row.t;
            prev = std::max(prev, rank);
        }
    }
}

TEST(RunTrial, AttachSatisfiesDockingGateWhenRecheckedFromLog) {
    Scenario sc = default_scenario();
    for (int team : {1, 2}) {
        const TrialRecord rec = run_trial(sc, team, 0);
        const auto attach_t = rec.event_time(MissionEventKind::ATTACH);
        ASSERT_TRUE(attach_t.has_value());
        const Vec3 probe{sc.probe.spawn.x, sc.probe.spawn.y,
                         terrain_height(sc.terrain, sc.probe.spawn.x, sc.probe.spawn.y)};
        bool found = false;
        for (const auto& row : rec.rows) {
            if (row.t == *attach_t) {
                EXPECT_TRUE(docking_allowed(row.position, probe, 0.6, deg2rad(30.0)))
                    << "team " << team;
                found = true;
                break;
            }
        }
        EXPECT_TRUE(found) << "no logged row at the attach tick for team " << team;
    }
}

TEST(RunTrial, VehicleStaysAboveTerrainOnSuccess) {
    Scenario sc = default_scenario();
    for (int team : {1, 2}) {
        const TrialRecord rec = run_trial(sc, team, 5);
        ASSERT_EQ(rec.outcome, TrialOutcome::SUCCESS);
        for (const auto& row : rec.rows)
            ASSERT_GE(row.position.z,
                      terrain_height(sc.terrain, row.position.x, row.position.y));
    }
}

TEST(RunTrial, LowFeatureScenarioReproducesTrackingFailure) {
    Scenario sc = low_feature_scenario();
    const TrialRecord team1 = run_trial(sc, 1, 0);
    EXPECT_TRUE(team1.event_time(MissionEventKind::TRACKING_LOST).has_value());
    EXPECT_FALSE(team1.event_time(MissionEventKind::TOUCHDOWN).has_value());
    EXPECT_TRUE(team1.outcome == TrialOutcome::LOST || team1.outcome == TrialOutcome::TIMEOUT);

    const TrialRecord team2 = run_trial(sc, 2, 0);
    EXPECT_EQ(team2.outcome, TrialOutcome::SUCCESS);
}

TEST(RunTrial, Team2TouchdownBelowAltitudeThreshold) {
    Scenario sc = default_scenario();
    const TrialRecord rec = run_trial(sc, 2, 11);
    ASSERT_EQ(rec.outcome, TrialOutcome::SUCCESS);
    const auto td = rec.event_time(MissionEventKind::TOUCHDOWN);
    ASSERT_TRUE(td.has_value());
    const RoverPose rover = rover_pose(sc.rover, sc.terrain, *td);
    for (const auto& e : rec.events) {
        if (e.kind != MissionEventKind::TOUCHDOWN) continue;
        EXPECT_LT(e.position.z - rover.position.z, sc.team2.touchdown_altitude);
        EXPECT_LE(std::abs(e.position.x - rover.position.x), sc.rover.trunk_half_extent);
        EXPECT_LE(std::abs(e.position.y - rover.position.y), sc.rover.trunk_half_extent);
    }
}

TEST(RunTrial, Team2VelocityFeedforwardOptionStillLands) {
    Scenario sc = default_scenario();
    sc.team2.velocity_feedforward = true;
    const TrialRecord rec = run_trial(sc, 2, 0);
    EXPECT_EQ(rec.outcome, TrialOutcome::SUCCESS);
    EXPECT_TRUE(rec.event_time(MissionEventKind::TOUCHDOWN).has_value());
}

TEST(RunBatch, ParallelBatchMatchesSequentialTrials) {
    Scenario sc = default_scenario();
    const auto batch = run_batch(sc, 2, 40, 3, /*max_threads=*/2);
    ASSERT_EQ(batch.size(), 3u);
    for (int i = 0; i < 3; ++i) {
        const TrialRecord solo = run_trial(sc, 2, 40 + i);
        EXPECT_EQ(trajectory_csv_string(batch[i]), trajectory_csv_string(solo));
        EXPECT_EQ(batch[i].outcome, solo.outcome);
    }
}

TEST(RunTrial, EventsAreUniquePerKind) {
    Scenario sc = default_scenario();
    for (int team : {1, 2}) {
        const TrialRecord rec = run_trial(sc, team, 2);
        int attach = 0, detach = 0, touchdown = 0;
        for (const auto& e : rec.events) {
            if (e.kind == MissionEventKind::ATTACH) ++attach;
            if (e.kind == MissionEventKind::DETACH) ++detach;
            if (e.kind == MissionEventKind::TOUCHDOWN) ++touchdown;
        }
        EXPECT_LE(attach, 1);
        EXPECT_LE(detach, 1);
        EXPECT_LE(touchdown, 1);
    }
}
