#pragma once

#include <string>
#include <vector>

namespace hazsearch {

struct RiskConfig {
    double v_critical = 0.25;    // robot speed below which no harm is possible
    double f_max = 140.0;        // maximum tolerable contact force
    double distance_scale = 1.0; // sharpness of the proximity decay, per meter
    double r_threshold = 1.7;    // peak risk above which a behavior is unsafe

    void validate() const;  // ConfigError on non-positive scales/limits
};

// Instantaneous observation of one robot relative to the human.
struct RobotSample {
    int robot = 0;            // index into the simulator's robot names
    double speed = 0.0;       // robot speed magnitude
    double separation = 0.0;  // human-robot distance, 0 on contact
    double force = 0.0;       // contact force; meaningful only when separation == 0
};

// One time step: the risk of the moment is the worst robot's risk.
struct RiskSample {
    double time = 0.0;
    std::vector<RobotSample> robots;
};

using RiskTrace = std::vector<RiskSample>;

// Risk of a single robot observation:
//   slow robot                -> 0
//   fast robot, clear of human -> exp(-distance_scale * separation), in (0, 1]
//   fast robot, in contact     -> force / f_max + 1, in [1, inf)
// so any contact by a moving robot outranks any near miss.
// Negative inputs throw UsageError.
double robot_risk(const RobotSample& s, const RiskConfig& cfg);

// Max over the robots present at one instant; 0 when none are.
double step_risk(const RiskSample& s, const RiskConfig& cfg);

struct PeakRisk {
    double value = 0.0;
    double time = 0.0;  // earliest time the peak is attained
};

// Peak risk over a trace.  Empty traces throw UsageError.
PeakRisk trace_peak_risk(const RiskTrace& trace, const RiskConfig& cfg);

} // namespace hazsearch
