#include "hazsearch/risk.hpp"

#include <cmath>

#include "hazsearch/errors.hpp"

namespace hazsearch {

void RiskConfig::validate() const {
    if (!(v_critical > 0.0)) throw ConfigError("risk.v_crit: must be positive");
    if (!(f_max > 0.0)) throw ConfigError("risk.f_max: must be positive");
    if (!(distance_scale > 0.0)) throw ConfigError("risk.distance_scale: must be positive");
    if (!(r_threshold > 0.0)) throw ConfigError("r_th: must be positive");
}

double robot_risk(const RobotSample& s, const RiskConfig& cfg) {
    if (s.speed < 0.0) throw UsageError("risk: negative robot speed");
    if (s.separation < 0.0) throw UsageError("risk: negative separation");
    if (s.force < 0.0) throw UsageError("risk: negative contact force");
    if (s.speed < cfg.v_critical) return 0.0;
    if (s.separation > 0.0) return std::exp(-cfg.distance_scale * s.separation);
    return s.force / cfg.f_max + 1.0;
}

double step_risk(const RiskSample& s, const RiskConfig& cfg) {
    double worst = 0.0;
    for (const RobotSample& r : s.robots) worst = std::max(worst, robot_risk(r, cfg));
    return worst;
}

PeakRisk trace_peak_risk(const RiskTrace& trace, const RiskConfig& cfg) {
    if (trace.empty()) throw UsageError("risk: empty trace has no peak");
    PeakRisk peak{-1.0, 0.0};
    for (const RiskSample& s : trace) {
        const double r = step_risk(s, cfg);
        if (r > peak.value) peak = {r, s.time};
    }
    return peak;
}

} // namespace hazsearch
