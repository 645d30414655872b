#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "probesim/control.hpp"
#include "probesim/errors.hpp"
#include "probesim/estimation.hpp"
#include "probesim/geometry.hpp"
#include "probesim/rng.hpp"
#include "probesim/scenario.hpp"
#include "probesim/sensing.hpp"
#include "probesim/vehicle.hpp"
#include "probesim/world.hpp"

namespace probesim {

enum class Team1Mode { PROBE, DROP, ROVER, END };
enum class Team2Phase { SEARCH, DOCK_DESCENT, TRANSIT, DEPLOY, PURSUIT, LAND, DONE };

inline const char* to_string(Team1Mode m) {
    switch (m) {
        case Team1Mode::PROBE: return "PROBE";
        case Team1Mode::DROP: return "DROP";
        case Team1Mode::ROVER: return "ROVER";
        case Team1Mode::END: return "END";
    }
    return "?";
}

inline const char* to_string(Team2Phase p) {
    switch (p) {
        case Team2Phase::SEARCH: return "SEARCH";
        case Team2Phase::DOCK_DESCENT: return "DOCK_DESCENT";
        case Team2Phase::TRANSIT: return "TRANSIT";
        case Team2Phase::DEPLOY: return "DEPLOY";
        case Team2Phase::PURSUIT: return "PURSUIT";
        case Team2Phase::LAND: return "LAND";
        case Team2Phase::DONE: return "DONE";
    }
    return "?";
}

enum class MissionEventKind { ATTACH, DETACH, TOUCHDOWN, TRACKING_LOST, TRACKING_RECOVERED };

inline const char* to_string(MissionEventKind k) {
    switch (k) {
        case MissionEventKind::ATTACH: return "ATTACH";
        case MissionEventKind::DETACH: return "DETACH";
        case MissionEventKind::TOUCHDOWN: return "TOUCHDOWN";
        case MissionEventKind::TRACKING_LOST: return "TRACKING_LOST";
        case MissionEventKind::TRACKING_RECOVERED: return "TRACKING_RECOVERED";
    }
    return "?";
}

struct MissionEvent {
    MissionEventKind kind;
    double t = 0.0;
    Vec3 position;  // vehicle position at the event
};

// Docking gate: within max_distance of the probe and the line of sight to it
// within max_inclination of vertical.
inline bool docking_allowed(Vec3 vehicle_position, Vec3 probe_position, double max_distance,
                            double max_inclination) {
    const Vec3 d = probe_position - vehicle_position;
    if (norm(d) >= max_distance) return false;
    const double inclination = std::atan2(std::hypot(d.x, d.y), -d.z);
    return inclination < max_inclination;
}

// Physical-contact inputs evaluated from ground truth each tick. These stand
// in for the attach plugin and landing contact checks; pursuit and navigation
// run on sensed data only.
struct ContactGates {
    Vec3 probe_position;
    bool probe_attached = false;
    bool probe_deployed = false;
    bool docking_ok = false;
    Vec3 rover_position;
    Vec2 rover_velocity;
    double alt_above_trunk = 0.0;
    double horizontal_offset = 0.0;
    bool inside_trunk = false;
};

struct StepOutput {
    Vec3 command;
    Vec3 command_before_avoidance;  // equals command except when the climb override fired
    std::vector<MissionEvent> events;
};

// Hold-then-climb fallback used when a visual target is lost mid-descent.
struct ReacquireHelper {
    double hold_elapsed = 0.0;
    std::optional<double> climb_target_z;

    void reset() {
        hold_elapsed = 0.0;
        climb_target_z.reset();
    }

    Vec3 step(const VehicleState& vehicle, double dt, double hold_s = 2.0, double climb_m = 2.0,
              double climb_rate = 1.0) {
        if (climb_target_z) {
            if (vehicle.position.z >= *climb_target_z) {
                climb_target_z.reset();
                hold_elapsed = 0.0;
                return {0.0, 0.0, 0.0};
            }
            return {0.0, 0.0, climb_rate};
        }
        hold_elapsed += dt;
        if (hold_elapsed > hold_s) {
            climb_target_z = vehicle.position.z + climb_m;
            return {0.0, 0.0, climb_rate};
        }
        return {0.0, 0.0, 0.0};
    }
};

// Team 1: master-controller state machine. Lawnmower search and servo descent
// onto the probe, deployment at the drop point, then pursuit of the Kalman
// rover estimate with a fiducial-refined landing. Hovers while tracking is
// lost.
struct Team1Executive {
    const Scenario& scenario;
    Team1Mode mode = Team1Mode::PROBE;
    SearchPattern pattern;
    ReacquireHelper reacquire;
    bool descending_on_probe = false;
    bool lost_announced = false;
    bool touchdown_emitted = false;

    explicit Team1Executive(const Scenario& sc)
        : scenario(sc),
          pattern(lawnmower_waypoints(sc.team1.search_xmin, sc.team1.search_ymin,
                                      sc.team1.search_xmax, sc.team1.search_ymax,
                                      sc.team1.search_spacing, sc.team1.search_altitude)) {}

    StepOutput step(const SensorFrame& frame, const RoverTrackState& tracker,
                    const VehicleState& vehicle, const ContactGates& gates, double t) {
        const Team1Config& cfg = scenario.team1;
        StepOutput out;

        switch (mode) {
            case Team1Mode::PROBE: {
                if (gates.docking_ok) {
                    out.events.push_back({MissionEventKind::ATTACH, t, vehicle.position});
                    mode = Team1Mode::DROP;
                    break;
                }
                if (frame.probe) {
                    reacquire.reset();
                    descending_on_probe = true;
                    out.command = servo_descent_command(*frame.probe, scenario.camera, vehicle,
                                                        cfg.descent_rate, cfg.centering_gain);
                } else if (descending_on_probe) {
                    out.command = reacquire.step(vehicle, scenario.dt);
                } else {
                    pattern.advance(vehicle.position, cfg.capture_radius);
                    out.command = position_setpoint_command(vehicle, pattern.current(),
                                                            cfg.setpoint_gain, scenario.limits);
                }
                break;
            }
            case Team1Mode::DROP: {
                const Vec2 drop = scenario.drop_zone;
                const double ground = terrain_height(scenario.terrain, drop.x, drop.y);
                const double release_z = ground + cfg.drop_release_altitude;
                const double horiz = std::hypot(vehicle.position.x - drop.x,
                                                vehicle.position.y - drop.y);
                if (horiz > 1.0) {
                    out.command = position_setpoint_command(
                        vehicle, {drop.x, drop.y, cfg.search_altitude}, cfg.setpoint_gain,
                        scenario.limits);
                } else if (vehicle.position.z - release_z > 0.15) {
                    out.command = position_setpoint_command(vehicle, {drop.x, drop.y, release_z},
                                                            cfg.setpoint_gain, scenario.limits);
                } else {
                    out.events.push_back({MissionEventKind::DETACH, t, vehicle.position});
                    mode = Team1Mode::ROVER;
                }
                break;
            }
            case Team1Mode::ROVER: {
                if (gates.alt_above_trunk < cfg.touchdown_altitude &&
                    gates.horizontal_offset < cfg.touchdown_radius) {
                    out.events.push_back({MissionEventKind::TOUCHDOWN, t, vehicle.position});
                    touchdown_emitted = true;
                    mode = Team1Mode::END;
                    break;
                }
                if (tracker.tracking_lost) {
                    if (!lost_announced) {
                        out.events.push_back({MissionEventKind::TRACKING_LOST, t, vehicle.position});
                        lost_announced = true;
                    }
                    out.command = {0.0, 0.0, 0.0};  // hover fallback
                    break;
                }
                if (lost_announced) {
                    out.events.push_back(
                        {MissionEventKind::TRACKING_RECOVERED, t, vehicle.position});
                    lost_announced = false;
                }

                const Vec2 est = tracker.position();
                const Vec2 est_v = tracker.velocity();
                const double trunk_z_est =
                    terrain_height(scenario.terrain, est.x, est.y) + scenario.rover.trunk_height;
                const double range = std::hypot(est.x - vehicle.position.x,
                                                est.y - vehicle.position.y);
                const double alt_above = vehicle.position.z - trunk_z_est;
                const Vec3 feedforward{est_v.x, est_v.y, 0.0};

                if (range > cfg.rover_engage_radius) {
                    out.command = position_setpoint_command(
                                      vehicle, {est.x, est.y, cfg.search_altitude},
                                      cfg.setpoint_gain, scenario.limits) +
                                  feedforward;
                } else if (alt_above > cfg.fiducial_engage_altitude) {
                    out.command =
                        position_setpoint_command(
                            vehicle, {est.x, est.y, trunk_z_est + cfg.fiducial_engage_altitude - 1.0},
                            cfg.setpoint_gain, scenario.limits) +
                        feedforward;
                } else if (frame.fiducial) {
                    reacquire.reset();
                    out.command = servo_descent_command(*frame.fiducial, scenario.camera, vehicle,
                                                        cfg.descent_rate, cfg.centering_gain) +
                                  feedforward;
                } else {
                    out.command = reacquire.step(vehicle, scenario.dt) + feedforward;
                }
                break;
            }
            case Team1Mode::END: {
                if (!touchdown_emitted)
                    throw InvalidTransition("team1_step: END reached without touchdown");
                out.command = {0.0, 0.0, 0.0};
                break;
            }
        }
        out.command_before_avoidance = out.command;
        return out;
    }
};

// Team 2: square-spiral search, set-point docking, terrain-avoiding transit,
// then GPS-only PID pursuit with a linear descent schedule and a red-trunk
// visual confirmation before the final approach.
struct Team2Executive {
    const Scenario& scenario;
    Team2Phase phase = Team2Phase::SEARCH;
    SearchPattern spiral;
    PidState pid;
    ReacquireHelper reacquire;
    std::optional<Vec2> rover_estimate;  // smoothed GPS track
    Vec2 rover_velocity_estimate{0.0, 0.0};
    bool trunk_confirmed = false;
    bool touchdown_emitted = false;

    explicit Team2Executive(const Scenario& sc)
        : scenario(sc),
          spiral(spiral_waypoints(sc.team2.spiral_center, sc.team2.spiral_step,
                                  sc.team2.spiral_max_radius, sc.team2.search_altitude)) {}

    void ingest_gps(const SensorFrame& frame) {
        if (!frame.gps) return;
        const Vec2 fix = frame.gps->xy();
        if (!rover_estimate) {
            rover_estimate = fix;
            return;
        }
        const double beta = scenario.team2.gps_smoothing;
        const Vec2 prev = *rover_estimate;
        rover_estimate = Vec2{prev.x + beta * (fix.x - prev.x), prev.y + beta * (fix.y - prev.y)};
        const Vec2 delta = *rover_estimate - prev;
        rover_velocity_estimate = {
            0.9 * rover_velocity_estimate.x + 0.1 * (delta.x / scenario.dt),
            0.9 * rover_velocity_estimate.y + 0.1 * (delta.y / scenario.dt)};
    }

    StepOutput step(const SensorFrame& frame, const VehicleState& vehicle,
                    const ContactGates& gates, double t) {
        const Team2Config& cfg = scenario.team2;
        StepOutput out;
        bool avoidance_applied = false;
        ingest_gps(frame);

        switch (phase) {
            case Team2Phase::SEARCH: {
                if (frame.probe) {
                    phase = Team2Phase::DOCK_DESCENT;
                    out.command = dock_descent_command(frame, vehicle);
                    break;
                }
                spiral.advance(vehicle.position, cfg.capture_radius);
                out.command = position_setpoint_command(vehicle, spiral.current(),
                                                        cfg.setpoint_gain, scenario.limits);
                break;
            }
            case Team2Phase::DOCK_DESCENT: {
                if (gates.docking_ok) {
                    out.events.push_back({MissionEventKind::ATTACH, t, vehicle.position});
                    phase = Team2Phase::TRANSIT;
                    break;
                }
                out.command = dock_descent_command(frame, vehicle);
                break;
            }
            case Team2Phase::TRANSIT: {
                const Vec2 drop = scenario.drop_zone;
                const double ground = terrain_height(scenario.terrain, drop.x, drop.y);
                const double release_z = ground + cfg.drop_release_altitude;
                const double horiz = std::hypot(vehicle.position.x - drop.x,
                                                vehicle.position.y - drop.y);
                Vec3 base;
                if (horiz > 1.0) {
                    base = position_setpoint_command(vehicle, {drop.x, drop.y, cfg.search_altitude},
                                                     cfg.setpoint_gain, scenario.limits);
                } else if (vehicle.position.z - release_z > 0.15) {
                    base = position_setpoint_command(vehicle, {drop.x, drop.y, release_z},
                                                     cfg.setpoint_gain, scenario.limits);
                } else {
                    out.events.push_back({MissionEventKind::DETACH, t, vehicle.position});
                    phase = Team2Phase::DEPLOY;
                    base = {0.0, 0.0, 0.0};
                }
                // Climb override is active on every transit tick.
                out.command_before_avoidance = base;
                out.command =
                    terrain_avoidance_command(base, frame.sonar, cfg.trigger_range, cfg.climb_rate);
                avoidance_applied = true;
                break;
            }
            case Team2Phase::DEPLOY: {
                const Vec2 drop = scenario.drop_zone;
                if (vehicle.position.z >= cfg.search_altitude - 0.3) {
                    phase = Team2Phase::PURSUIT;
                    break;
                }
                out.command =
                    position_setpoint_command(vehicle, {drop.x, drop.y, cfg.search_altitude},
                                              cfg.setpoint_gain, scenario.limits);
                break;
            }
            case Team2Phase::PURSUIT: {
                if (!rover_estimate) {
                    out.command = {0.0, 0.0, 0.0};  // no fix yet, hold
                    break;
                }
                if (frame.trunk) trunk_confirmed = true;

                if (trunk_confirmed && gates.alt_above_trunk < cfg.touchdown_altitude &&
                    gates.inside_trunk) {
                    out.events.push_back({MissionEventKind::TOUCHDOWN, t, vehicle.position});
                    touchdown_emitted = true;
                    phase = Team2Phase::LAND;
                    break;
                }

                const Vec2 est = *rover_estimate;
                const double range = std::hypot(est.x - vehicle.position.x,
                                                est.y - vehicle.position.y);
                const double trunk_z_est =
                    terrain_height(scenario.terrain, est.x, est.y) + scenario.rover.trunk_height;

                // Linear descent schedule, clamped by the confirmation rule.
                double target_alt = cfg.pursuit_near_altitude +
                                    (cfg.pursuit_far_altitude - cfg.pursuit_near_altitude) *
                                        std::min(range, cfg.pursuit_far_range) /
                                        cfg.pursuit_far_range;
                if (!trunk_confirmed) {
                    target_alt = std::max(target_alt, cfg.confirm_altitude);
                } else if (range < scenario.rover.trunk_half_extent) {
                    target_alt = cfg.commit_altitude;  // final approach
                }

                PidResult res = pursuit_command(pid, scenario.team2.pid, est, vehicle, target_alt,
                                                trunk_z_est);
                pid = res.state;
                out.command = res.command;
                if (cfg.velocity_feedforward) {
                    out.command.x += rover_velocity_estimate.x;
                    out.command.y += rover_velocity_estimate.y;
                }
                break;
            }
            case Team2Phase::LAND: {
                phase = Team2Phase::DONE;
                out.command = {0.0, 0.0, 0.0};
                break;
            }
            case Team2Phase::DONE: {
                if (!touchdown_emitted)
                    throw InvalidTransition("team2_step: DONE reached without touchdown");
                out.command = {0.0, 0.0, 0.0};
                break;
            }
        }
        if (!avoidance_applied) out.command_before_avoidance = out.command;
        return out;
    }

private:
    // Set-point servo onto the detected probe: move over the implied ground
    // position, stepping the vertical setpoint down as centering improves.
    Vec3 dock_descent_command(const SensorFrame& frame, const VehicleState& vehicle) {
        const Team2Config& cfg = scenario.team2;
        if (!frame.probe) return reacquire.step(vehicle, scenario.dt);
        reacquire.reset();

        const Detection& det = *frame.probe;
        const double f = scenario.camera.focal_length_px();
        const double z = det.world_range;
        const double half_width = scenario.camera.image_width / 2.0;
        const double radial = std::hypot(det.centroid_u, det.centroid_v);
        const double quality =
            std::clamp((half_width - radial) / (half_width - 0.1 * half_width), 0.0, 1.0);

        const Vec3 setpoint{vehicle.position.x + det.centroid_u * z / f,
                            vehicle.position.y + det.centroid_v * z / f,
                            vehicle.position.z - cfg.descent_step * quality};
        return position_setpoint_command(vehicle, setpoint, cfg.setpoint_gain, scenario.limits);
    }
};

enum class TrialOutcome { SUCCESS, TIMEOUT, CRASH, LOST };

inline const char* to_string(TrialOutcome o) {
    switch (o) {
        case TrialOutcome::SUCCESS: return "SUCCESS";
        case TrialOutcome::TIMEOUT: return "TIMEOUT";
        case TrialOutcome::CRASH: return "CRASH";
        case TrialOutcome::LOST: return "LOST";
    }
    return "?";
}

struct TrialRow {
    double t = 0.0;
    Vec3 position;
    Vec3 velocity;
    std::string phase;
    double tracker_px = 0.0;
    double tracker_py = 0.0;
    double cov_trace = 0.0;
};

struct TrialRecord {
    int team = 0;
    std::uint64_t seed = 0;
    std::string scenario_name;
    std::vector<TrialRow> rows;
    std::vector<MissionEvent> events;
    TrialOutcome outcome = TrialOutcome::TIMEOUT;

    double duration() const { return rows.empty() ? 0.0 : rows.back().t; }

    std::optional<double> event_time(MissionEventKind kind) const {
        for (const auto& e : events)
            if (e.kind == kind) return e.t;
        return std::nullopt;
    }
};

// Per-tick instrumentation for tests; command_before/after differ only when
// the terrain-avoidance override fired.
struct TickDebug {
    int tick = 0;
    double t = 0.0;
    const char* phase = "";
    Vec3 command_before_avoidance;
    Vec3 command_after_avoidance;
    std::array<SonarReading, kSonarCount> sonar;
    Vec3 vehicle_position;
};

struct TrialHooks {
    std::function<void(const TickDebug&)> on_tick;
};

inline SensorFrame sense(const WorldState& world, const VehicleState& vehicle,
                         const Scenario& sc, double t, RngStream& rng) {
    SensorFrame frame;
    frame.t = t;
    if (!world.probe_attached)
        frame.probe = detect_target(sc.camera, vehicle, world.probe_position, sc.probe.radius, rng);
    frame.trunk = detect_target(sc.camera, vehicle, world.rover_position,
                                sc.rover_visual.trunk_radius, rng);
    frame.fiducial = detect_target(sc.camera, vehicle, world.rover_position,
                                   sc.rover_visual.fiducial_radius, rng);
    frame.sonar = sonar_scan(vehicle, sc.terrain, sc.sonar.max_range);
    if (!sc.gps.in_outage(t))
        frame.gps = gps_read(world.rover_position, sc.gps.sigma, rng);
    frame.odometry = odometry_read(vehicle, world.rover_position, sc.terrain,
                                   sc.odometry.density_threshold, sc.odometry.sigma, rng);
    return frame;
}

inline ContactGates make_gates(const WorldState& world, const VehicleState& vehicle,
                               const Scenario& sc, int team) {
    const double max_dist =
        team == 1 ? sc.team1.docking_max_distance : sc.team2.docking_max_distance;
    const double max_incl =
        team == 1 ? sc.team1.docking_max_inclination : sc.team2.docking_max_inclination;

    ContactGates g;
    g.probe_position = world.probe_position;
    g.probe_attached = world.probe_attached;
    g.probe_deployed = world.probe_deployed;
    g.docking_ok = !world.probe_attached && !world.probe_deployed &&
                   docking_allowed(vehicle.position, world.probe_position, max_dist, max_incl);
    g.rover_position = world.rover_position;
    g.rover_velocity = world.rover_velocity;
    g.alt_above_trunk = vehicle.position.z - world.rover_position.z;
    g.horizontal_offset = horizontal_distance(vehicle.position, world.rover_position);
    g.inside_trunk =
        std::abs(vehicle.position.x - world.rover_position.x) <= sc.rover.trunk_half_extent &&
        std::abs(vehicle.position.y - world.rover_position.y) <= sc.rover.trunk_half_extent;
    return g;
}

// Closed-loop trial: sense -> estimate -> autonomy -> limiter -> vehicle step
// -> world step, logged every tick, terminated on touchdown, crash, tracking
// loss (team 1) or timeout.
inline TrialRecord run_trial(const Scenario& sc, int team, std::uint64_t seed,
                             const TrialHooks* hooks = nullptr) {
    sc.validate();
    if (team != 1 && team != 2) throw ScenarioInvalid("team must be 1 or 2");

    RngStream rng(seed);
    WorldState world = make_world(sc.rover, sc.terrain, sc.probe.spawn);
    VehicleState vehicle;
    vehicle.position = sc.vehicle_start;

    Team1Executive team1(sc);
    Team2Executive team2(sc);
    RoverTrackState tracker = make_tracker(sc.rover.waypoints.front(), 1.0, 1.0);

    TrialRecord record;
    record.team = team;
    record.seed = seed;
    record.scenario_name = sc.name;

    double lost_since = -1.0;
    for (int tick = 0;; ++tick) {
        const double t = tick * sc.dt;

        SensorFrame frame = sense(world, vehicle, sc, t, rng);

        if (team == 1) {
            if (tick == 0) {
                if (frame.gps) tracker = kf_update(tracker, frame.gps->xy(), sc.kalman.gps_sigma);
                if (frame.odometry) {
                    tracker = kf_update(tracker, frame.odometry->xy(), sc.kalman.odometry_sigma);
                    tracker.last_odometry_time = t;
                }
            } else {
                std::optional<Vec2> gps_xy =
                    frame.gps ? std::optional<Vec2>(frame.gps->xy()) : std::nullopt;
                std::optional<Vec2> odo_xy =
                    frame.odometry ? std::optional<Vec2>(frame.odometry->xy()) : std::nullopt;
                tracker = track_rover(tracker, sc.kalman, t, gps_xy, odo_xy, sc.dt);
            }
        }

        const ContactGates gates = make_gates(world, vehicle, sc, team);
        StepOutput out = team == 1 ? team1.step(frame, tracker, vehicle, gates, t)
                                   : team2.step(frame, vehicle, gates, t);

        for (const auto& event : out.events) {
            switch (event.kind) {
                case MissionEventKind::ATTACH:
                    world = attach_probe(world, vehicle.position, sc.probe.carry_offset);
                    vehicle.probe_attached = true;
                    break;
                case MissionEventKind::DETACH:
                    world = detach_probe(world, sc.terrain);
                    vehicle.probe_attached = false;
                    break;
                case MissionEventKind::TOUCHDOWN:
                    vehicle.landed = true;
                    break;
                default:
                    break;
            }
            record.events.push_back(event);
        }

        TrialRow row;
        row.t = t;
        row.position = vehicle.position;
        row.velocity = vehicle.velocity;
        row.phase = team == 1 ? to_string(team1.mode) : to_string(team2.phase);
        if (team == 1) {
            row.tracker_px = tracker.mean(0);
            row.tracker_py = tracker.mean(1);
            row.cov_trace = tracker.cov_trace();
        } else if (team2.rover_estimate) {
            row.tracker_px = team2.rover_estimate->x;
            row.tracker_py = team2.rover_estimate->y;
        }
        record.rows.push_back(row);

        const Vec3 limited = velocity_limiter(out.command, sc.limits);
        if (hooks && hooks->on_tick) {
            TickDebug dbg;
            dbg.tick = tick;
            dbg.t = t;
            dbg.phase = row.phase.c_str();
            dbg.command_before_avoidance = out.command_before_avoidance;
            dbg.command_after_avoidance = out.command;
            dbg.sonar = frame.sonar;
            dbg.vehicle_position = vehicle.position;
            hooks->on_tick(dbg);
        }

        if (vehicle.landed) {
            record.outcome = TrialOutcome::SUCCESS;
            break;
        }
        if (vehicle.position.z <
            terrain_height(sc.terrain, vehicle.position.x, vehicle.position.y)) {
            record.outcome = TrialOutcome::CRASH;
            break;
        }
        if (team == 1) {
            if (tracker.tracking_lost) {
                if (lost_since < 0.0) lost_since = t;
                if (t - lost_since > sc.team1.lost_fail_s) {
                    record.outcome = TrialOutcome::LOST;
                    break;
                }
            } else {
                lost_since = -1.0;
            }
        }
        if (t >= sc.timeout) {
            record.outcome = TrialOutcome::TIMEOUT;
            break;
        }

        vehicle = step_vehicle(vehicle, limited, sc.limits, sc.dt);
        world = step_world(world, sc.rover, sc.terrain, vehicle.position, sc.dt,
                           sc.probe.carry_offset);
    }
    return record;
}

}  // namespace probesim
