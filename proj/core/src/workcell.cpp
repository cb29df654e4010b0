#include "hazsearch/workcell.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

#include "hazsearch/errors.hpp"

namespace hazsearch {

void WorkcellConfig::validate() const {
    fsm.validate();
    parameters.validate();
    if (parameters.dims() != 3)
        throw ConfigError("parameters: the cell expects exactly v, x_p, y_p");
    if (nominal_sequence.empty()) throw ConfigError("nominal_sequence: empty");
    if (!fsm.accepts(nominal_sequence))
        throw ConfigError("nominal_sequence '" + nominal_sequence +
                          "' is not feasible under the workflow model");
    if (!(timing.dt > 0.0)) throw ConfigError("timing.dt: must be positive");
    for (double v : {timing.process_s, timing.handling_s, timing.wait_timeout_s,
                     timing.agv_dwell_s, timing.cap_s})
        if (!(v > 0.0)) throw ConfigError("timing: durations must be positive");
    if (!(speeds.ee > 0.0) || !(speeds.agv > 0.0))
        throw ConfigError("speeds: must be positive");
    if (!(geometry.body_radius > 0.0) || !(geometry.reach > 0.0))
        throw ConfigError("geometry: body_radius and reach must be positive");
    if (!(geometry.guard_margin >= 0.0))
        throw ConfigError("geometry.guard_margin: must be non-negative");
    if (geometry.mat.lo.x > geometry.mat.hi.x || geometry.mat.lo.y > geometry.mat.hi.y)
        throw ConfigError("geometry.mat: corners out of order");
    if (geometry.apron.lo.x > geometry.apron.hi.x || geometry.apron.lo.y > geometry.apron.hi.y)
        throw ConfigError("geometry.apron: corners out of order");
    if (!(contact.mu > 0.0) || !(contact.k > 0.0) || !(contact.eps > 0.0))
        throw ConfigError("contact: mu, k, eps must be positive");
    if (!(safety.arm_stop > 0.0) || !(safety.arm_resume >= safety.arm_stop))
        throw ConfigError("safety: arm resume distance must be at or above stop distance");
    if (!(safety.agv_stop > 0.0) || !(safety.agv_resume >= safety.agv_stop))
        throw ConfigError("safety: agv resume distance must be at or above stop distance");
}

WorkcellConfig reference_workcell_config() {
    WorkcellConfig cfg;
    cfg.fsm = WorkflowFsm::from_transitions(
        "tpwd",
        {"RR", "RS", "RH", "SR", "SS", "SH"},
        // worker position x piece position; worker at the robot station,
        // piece on the storage shelf
        "RS",
        {
            // t: worker switches stations (a held piece travels along)
            {"RR", 't', "SR"}, {"RS", 't', "SS"}, {"RH", 't', "SH"},
            {"SR", 't', "RR"}, {"SS", 't', "RS"}, {"SH", 't', "RH"},
            // w: waiting is always allowed
            {"RR", 'w', "RR"}, {"RS", 'w', "RS"}, {"RH", 'w', "RH"},
            {"SR", 'w', "SR"}, {"SS", 'w', "SS"}, {"SH", 'w', "SH"},
            // p: pick up the piece where the worker stands
            {"RR", 'p', "RH"}, {"SS", 'p', "SH"},
            // d: put the held piece down where the worker stands
            {"RH", 'd', "RR"}, {"SH", 'd', "SS"},
        });
    cfg.nominal_sequence = "tpwtdw";
    cfg.parameters.names = {"v", "x_p", "y_p"};
    cfg.parameters.lower = {0.5, -0.4, 0.1};
    cfg.parameters.upper = {2.0, 0.4, 0.5};
    cfg.parameters.nominal = {1.2, 0.0, 0.3};
    return cfg;  // geometry/timing/speeds/contact/safety/flaws use the defaults
}

double collision_force(double relative_speed, double mu, double k) {
    if (relative_speed < 0.0) throw UsageError("collision_force: negative speed");
    if (!(mu > 0.0) || !(k > 0.0))
        throw UsageError("collision_force: mu and k must be positive");
    return relative_speed * std::sqrt(mu * k);
}

double collision_force(double relative_speed, const ContactModel& contact) {
    return collision_force(relative_speed, contact.mu, contact.k);
}

namespace {

int steps_round(double seconds, double dt) {
    return static_cast<int>(std::llround(seconds / dt));
}

// Whole simulation steps to cover `dist` at `speed`: at least one step when
// there is any distance at all, and the final step may be partial.
int steps_for(double dist, double speed, double dt) {
    if (dist <= 0.0) return 0;
    return std::max(1, static_cast<int>(std::ceil(dist / (speed * dt) - 1e-9)));
}

// Where the worker stands to handle a piece at `target`: at the station if
// within arm's length, otherwise stepped in to arm's length of the target.
Vec2 stand_point(Vec2 target, Vec2 station, double reach) {
    const double d = distance(target, station);
    if (d <= reach) return station;
    const Vec2 u = (1.0 / d) * (target - station);
    return target - reach * u;
}

double rect_dist(Vec2 p, Vec2 center, Vec2 half) {
    const double dx = std::max(std::abs(p.x - center.x) - half.x, 0.0);
    const double dy = std::max(std::abs(p.y - center.y) - half.y, 0.0);
    return std::hypot(dx, dy);
}

enum class ArmMode { idle, approach, process, load, stopped };
enum class AgvMode { parked, outbound, dwell, returning };
enum class PathThen { idle, process, load_return };

struct MotionPath {
    Vec2 from, to;
    int i = 0, n = 0;
    PathThen then = PathThen::idle;
};

struct TablePiece {
    int id = 0;
    Vec2 pos;
    bool processed = false;
};

struct ActionState {
    char kind = 0;  // 't' walk, 'w' wait, 'p'/'d' handling
    Vec2 from, to;
    int i = 0, n = 0;
    // handling extras
    Vec2 stand, target;
    int phase = 0;  // 0 step-in, 1 hold, 2 step-out
    int n_in = 0, n_hold = 0, n_out = 0;
};

class Episode {
public:
    Episode(const WorkcellConfig& cfg, const Behavior& b)
        : c(cfg), seq(b.sequence), v(b.parameters[0]),
          placement{b.parameters[1], b.parameters[2]} {
        const auto& g = c.geometry;
        w_pos = g.robot_station;
        at_storage = false;
        ee = g.nominal_placement;
        ee_prev = ee;
        mode = ArmMode::process;
        mode_timer = steps_round(c.timing.process_s, c.timing.dt);
        proc_piece = 0;
        table_piece = TablePiece{0, g.nominal_placement, false};
        shelf_piece = true;
        arrival_latch = true;  // the worker starts on the mat
        agv = g.agv_park;
        agv_prev = agv;
        cap_steps = steps_round(c.timing.cap_s, c.timing.dt);
        begin_action();
    }

    bool finished() const {
        return out.truncated || w_act >= static_cast<int>(seq.size());
    }

    void step_once() {
        ++step_i;
        if (step_i > cap_steps) {
            out.truncated = true;
            event((step_i - 1) * c.timing.dt, "sequenceTruncated", "");
            return;
        }
        advance_agv();
        advance_robot();
        advance_worker();
        sample();
    }

    SimulationOutcome take(const RiskConfig& risk) {
        out.robot_names = {"arm", "agv"};
        out.end_time = static_cast<double>(out.trace.size()) * c.timing.dt;
        if (!out.trace.empty()) out.peak = trace_peak_risk(out.trace, risk);
        return std::move(out);
    }

    const RiskTrace& trace() const { return out.trace; }
    const std::vector<SimEvent>& events() const { return out.events; }

    WorkcellState snapshot() const {
        WorkcellState s;
        s.clock = now();
        s.worker_position = w_pos;
        s.worker_holding = holding;
        s.hand_extended = hand.has_value();
        s.action_index = w_act;
        const bool active = w_act < static_cast<int>(seq.size());
        s.action = active ? seq[w_act] : 0;
        s.action_phase = active && (act.kind == 'p' || act.kind == 'd') ? act.phase : 0;
        s.arm_end_effector = ee;
        switch (mode) {
            case ArmMode::idle: s.arm_mode = "idle"; break;
            case ArmMode::approach: s.arm_mode = "approach"; break;
            case ArmMode::process: s.arm_mode = "process"; break;
            case ArmMode::load: s.arm_mode = "load"; break;
            case ArmMode::stopped: s.arm_mode = "stopped"; break;
        }
        s.agv_position = agv;
        switch (agv_mode) {
            case AgvMode::parked: s.agv_mode = "parked"; break;
            case AgvMode::outbound: s.agv_mode = "outbound"; break;
            case AgvMode::dwell: s.agv_mode = "dwell"; break;
            case AgvMode::returning: s.agv_mode = "returning"; break;
        }
        return s;
    }

private:
    const WorkcellConfig& c;
    const std::string& seq;
    double v;        // worker walking speed
    Vec2 placement;  // (x_p, y_p)

    // worker
    Vec2 w_pos, w_vel{0.0, 0.0};
    bool at_storage = false;          // which station the worker is based at
    int w_act = 0;
    bool holding = false;
    std::optional<Vec2> hand;         // extended hand during pick/place holds
    ActionState act;

    // arm
    Vec2 ee, ee_prev;
    ArmMode mode;
    ArmMode stop_saved = ArmMode::idle;
    int mode_timer = 0;
    int proc_piece = 0;
    MotionPath path;

    // pieces
    std::optional<TablePiece> table_piece;
    bool shelf_piece = true;
    bool arrival_latch = false;

    // agv
    Vec2 agv, agv_prev;
    AgvMode agv_mode = AgvMode::parked;
    int agv_timer = 0;
    MotionPath agv_path;
    int agv_pending_trips = 0;
    bool leg_completed_this_step = false;
    bool agv_halted = false;

    int step_i = 0;
    int cap_steps = 0;
    bool contact_prev[2] = {false, false};
    SimulationOutcome out;

    void event(double t, const char* kind, const std::string& detail) {
        out.events.push_back(SimEvent{t, kind, detail});
    }

    double now() const { return step_i * c.timing.dt; }

    // --- sensing ---

    bool guard_region_contains(Vec2 p) const {
        if (c.geometry.mat.expanded(c.geometry.guard_margin).contains(p)) return true;
        if (!c.flaws.mat_blind_spot && c.geometry.apron.contains(p)) return true;
        return false;
    }

    double min_dist_to_ee() const {
        double best = distance(w_pos, ee) - c.geometry.body_radius;
        if (hand) best = std::min(best, distance(*hand, ee));
        return std::max(0.0, best);
    }

    double min_dist_to_agv() const {
        double best = rect_dist(w_pos, agv, c.geometry.agv_half) - c.geometry.body_radius;
        if (hand) best = std::min(best, rect_dist(*hand, agv, c.geometry.agv_half));
        return std::max(0.0, best);
    }

    // --- worker ---

    Vec2 station() const {
        return at_storage ? c.geometry.storage_station : c.geometry.robot_station;
    }

    void begin_action() {
        if (w_act >= static_cast<int>(seq.size())) return;
        const char a = seq[w_act];
        event(now(), "actionStart", std::string(1, a) + std::to_string(w_act));
        const double dt = c.timing.dt;
        act = ActionState{};
        act.kind = a;
        if (a == 't') {
            arrival_latch = false;  // the worker is leaving the table area
            const Vec2 dest =
                at_storage ? c.geometry.robot_station : c.geometry.storage_station;
            act.from = w_pos;
            act.to = dest;
            act.n = steps_for(distance(dest, w_pos), v, dt);
        } else if (a == 'w') {
            act.n = steps_round(c.timing.wait_timeout_s, dt);
        } else {  // p or d
            const Vec2 target = at_storage ? c.geometry.shelf : placement;
            act.stand = stand_point(target, station(), c.geometry.reach);
            act.target = target;
            act.from = w_pos;
            act.n_in = steps_for(distance(act.stand, station()), v, dt);
            act.n_hold = steps_round(c.timing.handling_s, dt);
        }
    }

    void finish_action() {
        event(now(), "actionEnd", std::string(1, seq[w_act]) + std::to_string(w_act));
        ++w_act;
        hand.reset();
        begin_action();
    }

    void advance_worker() {
        const Vec2 prev = w_pos;
        if (w_act >= static_cast<int>(seq.size())) {
            w_vel = {0.0, 0.0};
            return;
        }
        bool done = false;
        if (act.kind == 't') {
            ++act.i;
            const double f = act.n ? std::min(1.0, double(act.i) / act.n) : 1.0;
            w_pos = lerp(act.from, act.to, f);
            if (act.i >= act.n) {
                at_storage = !at_storage;
                done = true;
            }
        } else if (act.kind == 'w') {
            ++act.i;
            if (leg_completed_this_step || act.i >= act.n) done = true;
        } else {  // p / d
            if (act.phase == 0) {
                ++act.i;
                const double f = act.n_in ? std::min(1.0, double(act.i) / act.n_in) : 1.0;
                w_pos = lerp(act.from, act.stand, f);
                if (act.i >= act.n_in) {
                    act.phase = 1;
                    act.i = 0;
                    hand = act.target;
                }
            } else if (act.phase == 1) {
                ++act.i;
                if (act.i == act.n_hold / 2) piece_exchange(act.kind);
                if (act.i >= act.n_hold) {
                    act.phase = 2;
                    act.i = 0;
                    hand.reset();
                    act.from = w_pos;
                    act.to = station();
                    act.n_out = steps_for(distance(act.to, w_pos), v, c.timing.dt);
                    if (act.n_out == 0) done = true;
                }
            } else {  // step-out
                ++act.i;
                const double f = act.n_out ? std::min(1.0, double(act.i) / act.n_out) : 1.0;
                w_pos = lerp(act.from, act.to, f);
                if (act.i >= act.n_out) done = true;
            }
        }
        w_vel = (1.0 / c.timing.dt) * (w_pos - prev);
        if (done) finish_action();
    }

    void piece_exchange(char kind) {
        if (kind == 'p') {
            if (at_storage && shelf_piece) {
                shelf_piece = false;
                holding = true;
            } else if (!at_storage && table_piece && table_piece->id == 1) {
                table_piece.reset();
                holding = true;
            }
        } else {  // d
            if (!holding) return;
            if (at_storage) {
                shelf_piece = true;
                holding = false;
            } else if (!table_piece) {
                table_piece = TablePiece{1, placement, false};
                holding = false;
            }
        }
    }

    // --- arm ---

    void set_path(Vec2 from, Vec2 to, PathThen then) {
        path = MotionPath{from, to, 0,
                          steps_for(distance(to, from), c.speeds.ee, c.timing.dt), then};
    }

    void advance_robot() {
        ee_prev = ee;
        if (c.geometry.mat.contains(w_pos)) arrival_latch = true;
        const bool moving = mode == ArmMode::approach || mode == ArmMode::load;
        if (moving && guard_region_contains(w_pos) && min_dist_to_ee() < c.safety.arm_stop) {
            stop_saved = mode;
            mode = ArmMode::stopped;
            event(now(), "protectiveStop", "arm");
        }
        if (mode == ArmMode::stopped) {
            if (!guard_region_contains(w_pos) || min_dist_to_ee() > c.safety.arm_resume)
                mode = stop_saved;  // resumes and moves this same step
            else
                return;
        }
        switch (mode) {
            case ArmMode::idle:
                if (arrival_latch && table_piece && !table_piece->processed) {
                    proc_piece = table_piece->id;
                    set_path(ee, table_piece->pos, PathThen::process);
                    mode = ArmMode::approach;
                }
                break;
            case ArmMode::approach:
                if (!table_piece || table_piece->id != proc_piece) {
                    abort_to_home();
                    return;
                }
                step_path();
                break;
            case ArmMode::process:
                if (!table_piece || table_piece->id != proc_piece) {
                    abort_to_home();
                    return;
                }
                if (--mode_timer <= 0) {
                    // processing done: the arm picks the piece off the table
                    // and carries it to the AGV hand-off point
                    table_piece->processed = true;
                    table_piece.reset();
                    set_path(ee, c.geometry.agv_load, PathThen::load_return);
                    mode = ArmMode::load;
                }
                break;
            case ArmMode::load:
                step_path();
                break;
            case ArmMode::stopped:
                break;
        }
    }

    void abort_to_home() {
        set_path(ee, c.geometry.robot_home, PathThen::idle);
        mode = ArmMode::load;
    }

    void step_path() {
        ++path.i;
        const double f = path.n ? std::min(1.0, double(path.i) / path.n) : 1.0;
        ee = lerp(path.from, path.to, f);
        if (path.i >= path.n) {
            switch (path.then) {
                case PathThen::process:
                    mode = ArmMode::process;
                    mode_timer = steps_round(c.timing.process_s, c.timing.dt);
                    break;
                case PathThen::load_return:
                    // piece onto the AGV; a delivery trip is due
                    ++agv_pending_trips;
                    set_path(ee, c.geometry.robot_home, PathThen::idle);
                    mode = ArmMode::load;
                    break;
                case PathThen::idle:
                    mode = ArmMode::idle;
                    break;
            }
        }
    }

    // --- agv ---

    void advance_agv() {
        agv_prev = agv;
        leg_completed_this_step = false;
        const double dt = c.timing.dt;
        if (agv_mode == AgvMode::parked) {
            if (agv_pending_trips > 0) {
                --agv_pending_trips;
                agv_path = MotionPath{
                    c.geometry.agv_park, c.geometry.agv_away, 0,
                    steps_for(distance(c.geometry.agv_away, c.geometry.agv_park),
                              c.speeds.agv, dt),
                    PathThen::idle};
                agv_mode = AgvMode::outbound;
            }
            return;
        }
        if (agv_mode == AgvMode::dwell) {
            if (--agv_timer <= 0) {
                agv_path = MotionPath{
                    c.geometry.agv_away, c.geometry.agv_park, 0,
                    steps_for(distance(c.geometry.agv_park, c.geometry.agv_away),
                              c.speeds.agv, dt),
                    PathThen::idle};
                agv_mode = AgvMode::returning;
            }
            return;
        }
        // driving a leg
        if (!c.flaws.agv_no_detection) {
            const double d = min_dist_to_agv();
            if (agv_halted) {
                if (d > c.safety.agv_resume)
                    agv_halted = false;
                else
                    return;
            } else if (d < c.safety.agv_stop) {
                agv_halted = true;
                event(now(), "protectiveStop", "agv");
                return;
            }
        }
        ++agv_path.i;
        const double f = agv_path.n ? std::min(1.0, double(agv_path.i) / agv_path.n) : 1.0;
        agv = lerp(agv_path.from, agv_path.to, f);
        if (agv_path.i >= agv_path.n) {
            leg_completed_this_step = true;
            if (agv_mode == AgvMode::outbound) {
                agv_mode = AgvMode::dwell;
                agv_timer = steps_round(c.timing.agv_dwell_s, dt);
                event(now(), "agvLegComplete", "outbound");
            } else {
                agv_mode = AgvMode::parked;
                event(now(), "agvLegComplete", "return");
            }
        }
    }

    // --- per-step observation ---

    void sample() {
        const double dt = c.timing.dt;
        RiskSample rs;
        rs.time = now();
        const Vec2 ee_vel = (1.0 / dt) * (ee - ee_prev);
        const Vec2 agv_vel = (1.0 / dt) * (agv - agv_prev);
        for (int rid = 0; rid < 2; ++rid) {
            const Vec2 vel = rid == 0 ? ee_vel : agv_vel;
            double best_d = -1.0;
            Vec2 best_part_vel{0.0, 0.0};
            // body, then hand when extended
            for (int part = 0; part < (hand ? 2 : 1); ++part) {
                const Vec2 pos = part == 0 ? w_pos : *hand;
                const double deflate = part == 0 ? c.geometry.body_radius : 0.0;
                double d;
                if (rid == 0)
                    d = distance(pos, ee) - deflate;
                else
                    d = rect_dist(pos, agv, c.geometry.agv_half) - deflate;
                d = std::max(0.0, d);
                if (best_d < 0.0 || d < best_d) {
                    best_d = d;
                    best_part_vel = part == 0 ? w_vel : Vec2{0.0, 0.0};
                }
            }
            const double d_hr = best_d < c.contact.eps ? 0.0 : best_d;
            double f_c = 0.0;
            if (d_hr == 0.0) f_c = collision_force(norm(vel - best_part_vel), c.contact);
            rs.robots.push_back(RobotSample{rid, norm(vel), d_hr, f_c});
            if (d_hr == 0.0 && f_c > 0.0) {
                if (!contact_prev[rid]) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%s F=%.1f", rid == 0 ? "arm" : "agv",
                                  f_c);
                    event(rs.time, "contact", buf);
                }
                contact_prev[rid] = true;
            } else {
                contact_prev[rid] = false;
            }
        }
        out.trace.push_back(std::move(rs));
    }
};

void validate_behavior(const WorkcellConfig& cfg, const Behavior& b) {
    if (b.sequence.size() != cfg.nominal_sequence.size())
        throw UsageError("simulate: sequence length " + std::to_string(b.sequence.size()) +
                         ", expected " + std::to_string(cfg.nominal_sequence.size()));
    if (!cfg.fsm.accepts(b.sequence))
        throw UsageError("simulate: sequence '" + b.sequence +
                         "' is infeasible under the workflow model");
    if (b.parameters.size() != static_cast<std::size_t>(cfg.parameters.dims()))
        throw UsageError("simulate: expected " + std::to_string(cfg.parameters.dims()) +
                         " parameters, got " + std::to_string(b.parameters.size()));
    if (!cfg.parameters.contains(b.parameters, 1e-9))
        throw UsageError("simulate: parameters outside the motion box");
}

} // namespace

struct WorkcellEpisode::Impl {
    WorkcellConfig cfg;
    RiskConfig risk;
    Behavior behavior;
    Episode ep;  // references cfg and behavior.sequence above

    Impl(const WorkcellConfig& c, const Behavior& b, const RiskConfig& r)
        : cfg(c), risk(r), behavior(b), ep(cfg, behavior) {}
};

WorkcellEpisode::WorkcellEpisode(const WorkcellConfig& cfg, const Behavior& behavior,
                                 RiskConfig risk) {
    cfg.validate();
    risk.validate();
    validate_behavior(cfg, behavior);
    impl_ = std::make_unique<Impl>(cfg, behavior, risk);
}

WorkcellEpisode::~WorkcellEpisode() = default;
WorkcellEpisode::WorkcellEpisode(WorkcellEpisode&&) noexcept = default;
WorkcellEpisode& WorkcellEpisode::operator=(WorkcellEpisode&&) noexcept = default;

bool WorkcellEpisode::done() const { return impl_->ep.finished(); }

void WorkcellEpisode::advance_step() {
    if (impl_->ep.finished()) throw UsageError("advance_step: episode already finished");
    impl_->ep.step_once();
}

WorkcellState WorkcellEpisode::state() const { return impl_->ep.snapshot(); }

const RiskTrace& WorkcellEpisode::trace() const { return impl_->ep.trace(); }

const std::vector<SimEvent>& WorkcellEpisode::events() const {
    return impl_->ep.events();
}

SimulationOutcome WorkcellEpisode::finish() {
    if (!impl_->ep.finished()) throw UsageError("finish: episode still in progress");
    return impl_->ep.take(impl_->risk);
}

ReferenceWorkcell::ReferenceWorkcell(WorkcellConfig cfg, RiskConfig risk)
    : cfg_(std::move(cfg)), risk_(risk) {
    cfg_.validate();
    risk_.validate();
    info_.nominal_sequence = cfg_.nominal_sequence;
    info_.parameters = cfg_.parameters;
}

SimulationOutcome ReferenceWorkcell::simulate(const Behavior& b) const {
    validate_behavior(cfg_, b);
    Episode ep(cfg_, b);
    while (!ep.finished()) ep.step_once();
    return ep.take(risk_);
}

} // namespace hazsearch
