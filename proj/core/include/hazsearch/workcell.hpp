#pragma once

#include <memory>

#include "hazsearch/behavior.hpp"
#include "hazsearch/geometry.hpp"
#include "hazsearch/risk.hpp"
#include "hazsearch/simulator.hpp"
#include "hazsearch/workflow.hpp"

namespace hazsearch {

// Layout of the bundled two-robot cell.  A mobile manipulator serves a work
// table; an AGV ferries finished pieces away along a corridor that crosses
// the worker's walking route to the remote storage station.
struct WorkcellGeometry {
    Vec2 robot_station{0.0, -0.6};    // worker-side stop at the table
    Vec2 storage_station{3.0, 0.0};   // worker-side stop at the storage rack
    Vec2 shelf{3.4, 0.0};             // where raw pieces sit
    Vec2 robot_home{0.0, 0.6};
    Vec2 agv_load{0.9, 0.0};          // arm hand-off point for the AGV
    Vec2 agv_park{1.5, -3.0};
    Vec2 agv_away{1.5, 3.0};
    Vec2 agv_half{0.2, 0.3};          // AGV footprint half-extents
    Rect mat{{-0.6, -1.0}, {0.6, -0.2}};  // pressure mat in front of the table
    double guard_margin = 0.15;       // mat detection zone reaches this far out
    Rect apron{{-0.6, -0.2}, {0.6, 0.6}}; // table apron, covered only when the
                                          // mat blind spot is fixed
    double body_radius = 0.25;
    double reach = 0.5;               // arm's-length the worker stops short of a target
    Vec2 nominal_placement{0.0, 0.3}; // where the first piece already sits
};

struct WorkcellTiming {
    double dt = 0.05;
    double process_s = 3.0;       // arm processing time per piece
    double handling_s = 2.0;      // worker pick/place dwell
    double wait_timeout_s = 10.0; // w gives up after this long
    double agv_dwell_s = 2.0;     // AGV unload pause at the far end
    double cap_s = 120.0;         // episode hard stop
};

struct WorkcellSpeeds {
    double ee = 1.0;   // arm end-effector
    double agv = 1.0;
};

// Transient contact model: F = v_rel * sqrt(mu * k).
struct ContactModel {
    double mu = 2.7;        // effective mass, kg
    double k = 75000.0;     // stiffness, N/m
    double eps = 1e-3;      // separations below this count as contact
};

struct SafetySystem {
    double arm_stop = 0.3;    // arm halts under this separation (when tracking)
    double arm_resume = 0.4;
    double agv_stop = 0.5;    // AGV halts under this separation (if it can see)
    double agv_resume = 0.6;
};

// The two seeded defects the search is meant to find.
struct WorkcellFlaws {
    bool mat_blind_spot = true;   // true: only the mat zone is sensed; the
                                  // table apron is invisible to the arm
    bool agv_no_detection = true; // true: the AGV drives blind
};

struct WorkcellConfig {
    WorkflowFsm fsm;
    std::string nominal_sequence;
    ParameterSpace parameters;    // v, x_p, y_p
    WorkcellGeometry geometry;
    WorkcellTiming timing;
    WorkcellSpeeds speeds;
    ContactModel contact;
    SafetySystem safety;
    WorkcellFlaws flaws;

    void validate() const;
};

// The cell the toolkit ships with: 6-action reference scenario, flaws seeded.
WorkcellConfig reference_workcell_config();

double collision_force(double relative_speed, double mu, double k);
double collision_force(double relative_speed, const ContactModel& contact);

// Read-only snapshot of one instant of a stepped episode, for diagnostics
// and invariant checks; everything that affects the dynamics is inside the
// stepper itself.
struct WorkcellState {
    double clock = 0.0;        // seconds since the episode began
    Vec2 worker_position;
    bool worker_holding = false;
    bool hand_extended = false;
    int action_index = 0;      // position in the action sequence
    char action = 0;           // current action, 0 once the sequence is done
    int action_phase = 0;      // pick/place: 0 step-in, 1 hold, 2 step-out
    Vec2 arm_end_effector;
    std::string arm_mode;      // idle | approach | process | load | stopped
    Vec2 agv_position;
    std::string agv_mode;      // parked | outbound | dwell | returning
};

// One episode advanced a step at a time.  ReferenceWorkcell::simulate is the
// batched form of this; the stepper exposes the identical dynamics for tests
// and step-level tooling.  Never share one instance across threads.
class WorkcellEpisode {
public:
    // Copies the config and behavior; validates both like simulate() does.
    WorkcellEpisode(const WorkcellConfig& cfg, const Behavior& behavior,
                    RiskConfig risk = {});
    ~WorkcellEpisode();
    WorkcellEpisode(WorkcellEpisode&&) noexcept;
    WorkcellEpisode& operator=(WorkcellEpisode&&) noexcept;

    bool done() const;
    void advance_step();  // one dt tick; UsageError once done
    WorkcellState state() const;
    const RiskTrace& trace() const;
    const std::vector<SimEvent>& events() const;
    SimulationOutcome finish();  // valid once done; consumes the episode data

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Deterministic fixed-step simulator of the cell.  Pure: no hidden state, no
// randomness; the same behavior always yields the same trace byte for byte.
// The risk config is used to annotate outcomes with their peak risk.
class ReferenceWorkcell : public SimulatorInterface {
public:
    explicit ReferenceWorkcell(WorkcellConfig cfg, RiskConfig risk = {});

    const SimulatorInfo& info() const override { return info_; }
    const WorkcellConfig& config() const { return cfg_; }
    const RiskConfig& risk() const { return risk_; }

    SimulationOutcome simulate(const Behavior& behavior) const override;

private:
    WorkcellConfig cfg_;
    RiskConfig risk_;
    SimulatorInfo info_;
};

} // namespace hazsearch
