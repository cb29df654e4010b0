#include "hazsearch/config_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hazsearch/errors.hpp"
#include "hazsearch/version.hpp"

namespace hazsearch {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path.empty() ? what : path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const ordered_json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) fail(join(path, key), "unknown key");
    }
}

double get_num(const ordered_json& j, const std::string& path, const char* key,
               double def) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_number()) fail(join(path, key), "expected a number");
    return v.get<double>();
}

std::int64_t get_int(const ordered_json& j, const std::string& path, const char* key,
                     std::int64_t def) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
    return v.get<std::int64_t>();
}

std::uint64_t get_uint(const ordered_json& j, const std::string& path, const char* key,
                       std::uint64_t def) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) fail(join(path, key), "expected a non-negative integer");
    if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)
        fail(join(path, key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

bool get_bool(const ordered_json& j, const std::string& path, const char* key, bool def) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_boolean()) fail(join(path, key), "expected a boolean");
    return v.get<bool>();
}

std::string get_str(const ordered_json& j, const std::string& path, const char* key,
                    const std::string& def) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    return v.get<std::string>();
}

Vec2 get_vec2(const ordered_json& j, const std::string& path, const char* key, Vec2 def) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        fail(join(path, key), "expected [x, y]");
    return Vec2{v[0].get<double>(), v[1].get<double>()};
}

Rect get_rect(const ordered_json& j, const std::string& path, const char* key, Rect def) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2)
        fail(join(path, key), "expected [[x0, y0], [x1, y1]]");
    ordered_json wrap;
    wrap["lo"] = v[0];
    wrap["hi"] = v[1];
    return Rect{get_vec2(wrap, join(path, key), "lo", {}),
                get_vec2(wrap, join(path, key), "hi", {})};
}

std::vector<double> get_nums(const ordered_json& j, const std::string& path,
                             const char* key, const std::vector<double>& def) {
    if (!j.contains(key)) return def;
    const auto& v = j.at(key);
    if (!v.is_array()) fail(join(path, key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number())
            fail(join(path, key) + "[" + std::to_string(out.size()) + "]",
                 "expected a number");
        out.push_back(e.get<double>());
    }
    return out;
}

ordered_json vec2_json(Vec2 v) { return ordered_json::array({v.x, v.y}); }

ordered_json rect_json(const Rect& r) {
    return ordered_json::array({vec2_json(r.lo), vec2_json(r.hi)});
}

ordered_json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

} // namespace

WorkcellConfig workcell_config_from_json(const ordered_json& j) {
    // defaults come from the reference cell; the file overrides field by field
    WorkcellConfig cfg = reference_workcell_config();
    check_keys(j, "", {"workflow", "nominal_sequence", "parameters", "geometry", "timing",
                       "speeds", "contact", "safety", "flaws"});

    if (j.contains("workflow")) {
        const auto& w = j.at("workflow");
        const std::string p = "workflow";
        check_keys(w, p, {"alphabet", "states", "initial", "transitions"});
        const std::string alphabet = get_str(w, p, "alphabet", "");
        if (alphabet.empty()) fail(join(p, "alphabet"), "required");
        if (!w.contains("states") || !w.at("states").is_array())
            fail(join(p, "states"), "expected an array of state names");
        std::vector<std::string> states;
        for (const auto& s : w.at("states")) {
            if (!s.is_string())
                fail(join(p, "states") + "[" + std::to_string(states.size()) + "]",
                     "expected a string");
            states.push_back(s.get<std::string>());
        }
        const std::string initial = get_str(w, p, "initial", "");
        if (!w.contains("transitions") || !w.at("transitions").is_array())
            fail(join(p, "transitions"), "expected an array");
        std::vector<std::tuple<std::string, char, std::string>> transitions;
        std::size_t ti = 0;
        for (const auto& t : w.at("transitions")) {
            const std::string tp = join(p, "transitions") + "[" + std::to_string(ti++) + "]";
            check_keys(t, tp, {"from", "action", "to"});
            const std::string from = get_str(t, tp, "from", "");
            const std::string action = get_str(t, tp, "action", "");
            const std::string to = get_str(t, tp, "to", "");
            if (action.size() != 1) fail(join(tp, "action"), "expected a single character");
            transitions.emplace_back(from, action[0], to);
        }
        try {
            cfg.fsm = WorkflowFsm::from_transitions(alphabet, states, initial, transitions);
        } catch (const ConfigError& e) {
            fail(p, e.what());
        }
    }

    cfg.nominal_sequence = get_str(j, "", "nominal_sequence", cfg.nominal_sequence);

    if (j.contains("parameters")) {
        const auto& pj = j.at("parameters");
        const std::string p = "parameters";
        check_keys(pj, p, {"names", "lower", "upper", "nominal"});
        if (pj.contains("names")) {
            if (!pj.at("names").is_array()) fail(join(p, "names"), "expected an array");
            cfg.parameters.names.clear();
            for (const auto& n : pj.at("names")) {
                if (!n.is_string()) fail(join(p, "names"), "expected strings");
                cfg.parameters.names.push_back(n.get<std::string>());
            }
        }
        cfg.parameters.lower = get_nums(pj, p, "lower", cfg.parameters.lower);
        cfg.parameters.upper = get_nums(pj, p, "upper", cfg.parameters.upper);
        cfg.parameters.nominal = get_nums(pj, p, "nominal", cfg.parameters.nominal);
    }

    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        const std::string p = "geometry";
        check_keys(g, p, {"robot_station", "storage_station", "shelf", "robot_home",
                          "agv_load", "agv_park", "agv_away", "agv_half", "mat",
                          "guard_margin", "apron", "body_radius", "reach",
                          "nominal_placement"});
        auto& geo = cfg.geometry;
        geo.robot_station = get_vec2(g, p, "robot_station", geo.robot_station);
        geo.storage_station = get_vec2(g, p, "storage_station", geo.storage_station);
        geo.shelf = get_vec2(g, p, "shelf", geo.shelf);
        geo.robot_home = get_vec2(g, p, "robot_home", geo.robot_home);
        geo.agv_load = get_vec2(g, p, "agv_load", geo.agv_load);
        geo.agv_park = get_vec2(g, p, "agv_park", geo.agv_park);
        geo.agv_away = get_vec2(g, p, "agv_away", geo.agv_away);
        geo.agv_half = get_vec2(g, p, "agv_half", geo.agv_half);
        geo.mat = get_rect(g, p, "mat", geo.mat);
        geo.guard_margin = get_num(g, p, "guard_margin", geo.guard_margin);
        geo.apron = get_rect(g, p, "apron", geo.apron);
        geo.body_radius = get_num(g, p, "body_radius", geo.body_radius);
        geo.reach = get_num(g, p, "reach", geo.reach);
        geo.nominal_placement = get_vec2(g, p, "nominal_placement", geo.nominal_placement);
    }

    if (j.contains("timing")) {
        const auto& t = j.at("timing");
        const std::string p = "timing";
        check_keys(t, p, {"dt", "process_s", "handling_s", "wait_timeout_s", "agv_dwell_s",
                          "cap_s"});
        cfg.timing.dt = get_num(t, p, "dt", cfg.timing.dt);
        cfg.timing.process_s = get_num(t, p, "process_s", cfg.timing.process_s);
        cfg.timing.handling_s = get_num(t, p, "handling_s", cfg.timing.handling_s);
        cfg.timing.wait_timeout_s = get_num(t, p, "wait_timeout_s", cfg.timing.wait_timeout_s);
        cfg.timing.agv_dwell_s = get_num(t, p, "agv_dwell_s", cfg.timing.agv_dwell_s);
        cfg.timing.cap_s = get_num(t, p, "cap_s", cfg.timing.cap_s);
    }

    if (j.contains("speeds")) {
        const auto& s = j.at("speeds");
        check_keys(s, "speeds", {"ee", "agv"});
        cfg.speeds.ee = get_num(s, "speeds", "ee", cfg.speeds.ee);
        cfg.speeds.agv = get_num(s, "speeds", "agv", cfg.speeds.agv);
    }

    if (j.contains("contact")) {
        const auto& ct = j.at("contact");
        check_keys(ct, "contact", {"mu", "k", "eps"});
        cfg.contact.mu = get_num(ct, "contact", "mu", cfg.contact.mu);
        cfg.contact.k = get_num(ct, "contact", "k", cfg.contact.k);
        cfg.contact.eps = get_num(ct, "contact", "eps", cfg.contact.eps);
    }

    if (j.contains("safety")) {
        const auto& s = j.at("safety");
        check_keys(s, "safety", {"arm_stop", "arm_resume", "agv_stop", "agv_resume"});
        cfg.safety.arm_stop = get_num(s, "safety", "arm_stop", cfg.safety.arm_stop);
        cfg.safety.arm_resume = get_num(s, "safety", "arm_resume", cfg.safety.arm_resume);
        cfg.safety.agv_stop = get_num(s, "safety", "agv_stop", cfg.safety.agv_stop);
        cfg.safety.agv_resume = get_num(s, "safety", "agv_resume", cfg.safety.agv_resume);
    }

    if (j.contains("flaws")) {
        const auto& f = j.at("flaws");
        check_keys(f, "flaws", {"mat_blind_spot", "agv_no_detection"});
        cfg.flaws.mat_blind_spot =
            get_bool(f, "flaws", "mat_blind_spot", cfg.flaws.mat_blind_spot);
        cfg.flaws.agv_no_detection =
            get_bool(f, "flaws", "agv_no_detection", cfg.flaws.agv_no_detection);
    }

    cfg.validate();
    return cfg;
}

ordered_json workcell_config_to_json(const WorkcellConfig& cfg) {
    ordered_json j;
    ordered_json w;
    w["alphabet"] = cfg.fsm.alphabet;
    w["states"] = cfg.fsm.states;
    w["initial"] = cfg.fsm.initial;
    ordered_json trans = ordered_json::array();
    for (std::size_t si = 0; si < cfg.fsm.states.size(); ++si) {
        for (std::size_t ai = 0; ai < cfg.fsm.alphabet.size(); ++ai) {
            const int to = cfg.fsm.table[si][ai];
            if (to < 0) continue;
            ordered_json t;
            t["from"] = cfg.fsm.states[si];
            t["action"] = std::string(1, cfg.fsm.alphabet[ai]);
            t["to"] = cfg.fsm.states[to];
            trans.push_back(std::move(t));
        }
    }
    w["transitions"] = std::move(trans);
    j["workflow"] = std::move(w);

    j["nominal_sequence"] = cfg.nominal_sequence;
    j["parameters"] = {{"names", cfg.parameters.names},
                       {"lower", cfg.parameters.lower},
                       {"upper", cfg.parameters.upper},
                       {"nominal", cfg.parameters.nominal}};

    const auto& g = cfg.geometry;
    j["geometry"] = {{"robot_station", vec2_json(g.robot_station)},
                     {"storage_station", vec2_json(g.storage_station)},
                     {"shelf", vec2_json(g.shelf)},
                     {"robot_home", vec2_json(g.robot_home)},
                     {"agv_load", vec2_json(g.agv_load)},
                     {"agv_park", vec2_json(g.agv_park)},
                     {"agv_away", vec2_json(g.agv_away)},
                     {"agv_half", vec2_json(g.agv_half)},
                     {"mat", rect_json(g.mat)},
                     {"guard_margin", g.guard_margin},
                     {"apron", rect_json(g.apron)},
                     {"body_radius", g.body_radius},
                     {"reach", g.reach},
                     {"nominal_placement", vec2_json(g.nominal_placement)}};
    j["timing"] = {{"dt", cfg.timing.dt},
                   {"process_s", cfg.timing.process_s},
                   {"handling_s", cfg.timing.handling_s},
                   {"wait_timeout_s", cfg.timing.wait_timeout_s},
                   {"agv_dwell_s", cfg.timing.agv_dwell_s},
                   {"cap_s", cfg.timing.cap_s}};
    j["speeds"] = {{"ee", cfg.speeds.ee}, {"agv", cfg.speeds.agv}};
    j["contact"] = {{"mu", cfg.contact.mu}, {"k", cfg.contact.k}, {"eps", cfg.contact.eps}};
    j["safety"] = {{"arm_stop", cfg.safety.arm_stop},
                   {"arm_resume", cfg.safety.arm_resume},
                   {"agv_stop", cfg.safety.agv_stop},
                   {"agv_resume", cfg.safety.agv_resume}};
    j["flaws"] = {{"mat_blind_spot", cfg.flaws.mat_blind_spot},
                  {"agv_no_detection", cfg.flaws.agv_no_detection}};
    return j;
}

WorkcellConfig load_workcell_config(const std::filesystem::path& path) {
    try {
        return workcell_config_from_json(parse_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

SearchConfig search_config_from_json(const ordered_json& j) {
    SearchConfig cfg;
    // `jobs` is deliberately absent: how many threads explore is an execution
    // detail of one invocation (a CLI flag), not part of what a search IS —
    // reports and fingerprints must not depend on it.
    check_keys(j, "", {"n_max", "alpha", "n_nmo", "r_th", "mode", "seed",
                       "enumeration_cap", "risk", "nelder_mead"});
    cfg.n_max = static_cast<int>(get_int(j, "", "n_max", cfg.n_max));
    cfg.alpha = get_num(j, "", "alpha", cfg.alpha);
    cfg.n_nmo = static_cast<int>(get_int(j, "", "n_nmo", cfg.n_nmo));
    cfg.risk.r_threshold = get_num(j, "", "r_th", cfg.risk.r_threshold);
    cfg.mode = search_mode_from_string(get_str(j, "", "mode", to_string(cfg.mode)));
    cfg.seed = get_uint(j, "", "seed", cfg.seed);
    cfg.enumeration_cap = get_uint(j, "", "enumeration_cap", cfg.enumeration_cap);
    if (j.contains("risk")) {
        const auto& r = j.at("risk");
        check_keys(r, "risk", {"v_crit", "f_max", "distance_scale"});
        cfg.risk.v_critical = get_num(r, "risk", "v_crit", cfg.risk.v_critical);
        cfg.risk.f_max = get_num(r, "risk", "f_max", cfg.risk.f_max);
        cfg.risk.distance_scale = get_num(r, "risk", "distance_scale", cfg.risk.distance_scale);
    }
    if (j.contains("nelder_mead")) {
        const auto& n = j.at("nelder_mead");
        check_keys(n, "nelder_mead",
                   {"rho", "chi", "gamma", "sigma", "spread", "penalty_weight"});
        cfg.nelder_mead.rho = get_num(n, "nelder_mead", "rho", cfg.nelder_mead.rho);
        cfg.nelder_mead.chi = get_num(n, "nelder_mead", "chi", cfg.nelder_mead.chi);
        cfg.nelder_mead.gamma = get_num(n, "nelder_mead", "gamma", cfg.nelder_mead.gamma);
        cfg.nelder_mead.sigma = get_num(n, "nelder_mead", "sigma", cfg.nelder_mead.sigma);
        cfg.nelder_mead.spread = get_num(n, "nelder_mead", "spread", cfg.nelder_mead.spread);
        cfg.nelder_mead.penalty_weight =
            get_num(n, "nelder_mead", "penalty_weight", cfg.nelder_mead.penalty_weight);
    }
    return cfg;
}

ordered_json search_config_to_json(const SearchConfig& cfg) {
    ordered_json j;
    j["n_max"] = cfg.n_max;
    j["alpha"] = cfg.alpha;
    j["n_nmo"] = cfg.n_nmo;
    j["r_th"] = cfg.risk.r_threshold;
    j["mode"] = to_string(cfg.mode);
    j["seed"] = cfg.seed;
    j["risk"] = {{"v_crit", cfg.risk.v_critical},
                 {"f_max", cfg.risk.f_max},
                 {"distance_scale", cfg.risk.distance_scale}};
    j["nelder_mead"] = {{"rho", cfg.nelder_mead.rho},
                        {"chi", cfg.nelder_mead.chi},
                        {"gamma", cfg.nelder_mead.gamma},
                        {"sigma", cfg.nelder_mead.sigma},
                        {"spread", cfg.nelder_mead.spread},
                        {"penalty_weight", cfg.nelder_mead.penalty_weight}};
    return j;
}

SearchConfig load_search_config(const std::filesystem::path& path) {
    try {
        return search_config_from_json(parse_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string fingerprint_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ordered_json report_to_json(const SearchReport& report, const WorkcellConfig& cell) {
    const ordered_json cell_json = workcell_config_to_json(cell);
    const ordered_json search_json = search_config_to_json(report.config);

    ordered_json j;
    j["manifest"] = {{"tool", "hazsearch"},
                     {"version", kVersion},
                     {"cell_fingerprint", fingerprint_hex(cell_json.dump())},
                     {"search_fingerprint", fingerprint_hex(search_json.dump())}};
    j["config"] = {{"search", search_json}, {"cell", cell_json}};
    j["space"] = {{"enumerated", report.enumerated}, {"feasible", report.feasible}};
    j["totals"] = {{"simulate_calls", report.totals.simulate_calls},
                   {"n_explore", report.totals.n_explore},
                   {"n_exploit", report.totals.n_exploit},
                   {"unspent_budget", report.totals.unspent_budget},
                   {"n_f", report.totals.n_f},
                   {"mean_d_e", report.totals.mean_d_e}};
    ordered_json hazards = ordered_json::array();
    for (const HazardRecord& h : report.hazards) {
        ordered_json e;
        e["sequence"] = h.sequence;
        e["theta"] = h.parameters;
        e["peak_risk"] = h.peak_risk;
        e["peak_time"] = h.peak_time;
        e["d_e"] = h.error_distance;
        e["sim_index"] = h.sim_index;
        e["phase"] = h.phase;
        hazards.push_back(std::move(e));
    }
    j["hazards"] = std::move(hazards);
    ordered_json seqs = ordered_json::array();
    for (const SequenceSummary& s : report.sequences) {
        ordered_json e;
        e["sequence"] = s.sequence;
        e["d_e"] = s.distance;
        if (s.risk_estimate)
            e["risk_estimate"] = *s.risk_estimate;
        else
            e["risk_estimate"] = nullptr;
        e["status"] = to_string(s.status);
        e["evaluations"] = s.evaluations;
        seqs.push_back(std::move(e));
    }
    j["sequences"] = std::move(seqs);
    return j;
}

std::string render_report(const SearchReport& report, const WorkcellConfig& cell) {
    return report_to_json(report, cell).dump(2) + "\n";
}

void write_report(const std::filesystem::path& path, const SearchReport& report,
                  const WorkcellConfig& cell) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path.string() + "'");
    out << render_report(report, cell);
}

std::string trace_to_csv(const SimulationOutcome& outcome, const RiskConfig& risk) {
    std::ostringstream out;
    out << "time,robot_id,v_r,d_hr,f_c,r\n";
    char buf[160];
    for (const RiskSample& s : outcome.trace) {
        for (const RobotSample& r : s.robots) {
            const std::string& name =
                r.robot < static_cast<int>(outcome.robot_names.size())
                    ? outcome.robot_names[r.robot]
                    : std::to_string(r.robot);
            std::snprintf(buf, sizeof buf, "%.2f,%s,%.9g,%.9g,%.9g,%.9g\n", s.time,
                          name.c_str(), r.speed, r.separation, r.force,
                          robot_risk(r, risk));
            out << buf;
        }
    }
    return out.str();
}

} // namespace hazsearch
