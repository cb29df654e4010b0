#pragma once

#include <string>
#include <vector>

#include "hazsearch/behavior.hpp"
#include "hazsearch/risk.hpp"
#include "hazsearch/workflow.hpp"

namespace hazsearch {

// Something noteworthy that happened during a simulated episode, for
// diagnostics and tests; the time is the step at which it was observed.
struct SimEvent {
    double time = 0.0;
    std::string kind;    // e.g. "actionStart", "contact", "protectiveStop"
    std::string detail;
};

struct SimulationOutcome {
    RiskTrace trace;
    std::vector<std::string> robot_names;  // indexed by RobotSample::robot
    std::vector<SimEvent> events;
    PeakRisk peak;           // highest instantaneous risk over the trace
    double end_time = 0.0;
    bool truncated = false;  // episode hit the time cap before finishing
};

// What a simulator expects of the behaviors fed to it.
struct SimulatorInfo {
    std::string nominal_sequence;
    ParameterSpace parameters;
};

// A deterministic episode simulator: one behavior in, one risk trace out.
// Implementations must be pure (same behavior, same outcome) and must accept
// any feasible sequence with in-box parameters.  `peak` in the outcome must
// equal the peak risk recomputed from the trace, so callers may rely on
// either; the search engine reads `peak`.
class SimulatorInterface {
public:
    virtual ~SimulatorInterface() = default;
    virtual const SimulatorInfo& info() const = 0;
    virtual SimulationOutcome simulate(const Behavior& behavior) const = 0;
};

} // namespace hazsearch
