// Command-line frontend: enumerate feasible worker behaviors, search them for
// unsafe ones against the bundled workcell, and sweep the explore/exploit
// split.  Exit codes: 0 success, 1 bad config or usage, 2 internal error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hazsearch/config_io.hpp"
#include "hazsearch/distance.hpp"
#include "hazsearch/errors.hpp"
#include "hazsearch/search.hpp"
#include "hazsearch/version.hpp"
#include "hazsearch/workcell.hpp"

namespace fs = std::filesystem;
using namespace hazsearch;

namespace {

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": '" + text + "' is not a valid seed");
    }
}

struct RunFlags {
    std::string cell_path;
    std::string search_path;
    std::string out_path = "report.json";
    std::string traces_dir;
    std::string mode;
    std::string seed_text;
    int n_max = 0;
    double alpha = 0.0;
    int n_nmo = 0;
    double r_th = 0.0;
    int jobs = 0;
};

// Flag > HAZSEARCH_SEED > config file > default.
void apply_seed(SearchConfig& cfg, const CLI::App* cmd, const std::string& seed_text) {
    if (cmd->count("--seed")) {
        cfg.seed = parse_seed(seed_text, "--seed");
        return;
    }
    if (const char* env = std::getenv("HAZSEARCH_SEED"))
        cfg.seed = parse_seed(env, "HAZSEARCH_SEED");
}

SearchConfig assemble_search_config(const CLI::App* cmd, const RunFlags& f) {
    SearchConfig cfg;
    if (!f.search_path.empty()) cfg = load_search_config(f.search_path);
    if (cmd->count("--n-max")) cfg.n_max = f.n_max;
    if (cmd->count("--alpha")) cfg.alpha = f.alpha;
    if (cmd->count("--n-nmo")) cfg.n_nmo = f.n_nmo;
    if (cmd->count("--r-th")) cfg.risk.r_threshold = f.r_th;
    if (cmd->count("--mode")) cfg.mode = search_mode_from_string(f.mode);
    if (cmd->count("--jobs")) cfg.jobs = f.jobs;
    apply_seed(cfg, cmd, f.seed_text);
    return cfg;
}

void cmd_generate(const std::string& cell_path, const std::string& out_path) {
    const WorkcellConfig cell = load_workcell_config(cell_path);
    CandidateSet set = generate_feasible(cell.fsm, static_cast<int>(cell.nominal_sequence.size()));
    sort_by_distance(set, cell.nominal_sequence, cell.fsm.alphabet);

    std::ostringstream body;
    body << "# " << set.size() << " / " << set.enumerated << " feasible (m1="
         << cell.nominal_sequence.size() << ", alphabet=" << cell.fsm.alphabet << ")\n";
    body << "sequence,d_e\n";
    for (const CandidateEntry& e : set.entries)
        body << e.sequence << "," << *e.distance << "\n";

    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw UsageError("cannot write '" + out_path + "'");
        out << body.str();
        std::cout << set.size() << " / " << set.enumerated << " feasible -> " << out_path
                  << "\n";
    }
}

void write_aborted_report(const std::string& path, const WorkcellConfig* cell,
                          const SearchConfig* search, const std::string& message) {
    ordered_json j;
    ordered_json manifest;
    manifest["tool"] = "hazsearch";
    manifest["version"] = kVersion;
    if (cell)
        manifest["cell_fingerprint"] = fingerprint_hex(workcell_config_to_json(*cell).dump());
    if (search)
        manifest["search_fingerprint"] =
            fingerprint_hex(search_config_to_json(*search).dump());
    j["manifest"] = std::move(manifest);
    j["aborted"] = message;
    std::ofstream out(path, std::ios::binary);
    if (out) out << j.dump(2) << "\n";
}

void cmd_run(const CLI::App* cmd, const RunFlags& f) {
    const auto t0 = std::chrono::steady_clock::now();
    const WorkcellConfig cell = load_workcell_config(f.cell_path);
    SearchConfig cfg = assemble_search_config(cmd, f);
    const ReferenceWorkcell sim(cell, cfg.risk);

    SearchHooks hooks;
    if (!f.traces_dir.empty()) {
        fs::create_directories(f.traces_dir);
        const fs::path dir = f.traces_dir;
        const RiskConfig risk = cfg.risk;
        hooks.on_simulate = [dir, risk](int index, const Behavior&,
                                        const SimulationOutcome& outcome) {
            char name[32];
            std::snprintf(name, sizeof name, "sim_%06d.csv", index);
            std::ofstream out(dir / name, std::ios::binary);
            if (out) out << trace_to_csv(outcome, risk);
        };
    }

    SearchReport report;
    try {
        report = run_search(cfg, sim, cell.fsm, hooks);
    } catch (const std::exception& e) {
        write_aborted_report(f.out_path, &cell, &cfg, e.what());
        throw;
    }
    write_report(f.out_path, report, cell);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "feasible: " << report.feasible << " / " << report.enumerated << "\n";
    std::cout << "simulate calls: " << report.totals.simulate_calls << " (explore "
              << report.totals.n_explore << ", exploit " << report.totals.n_exploit
              << ", unspent " << report.totals.unspent_budget << ")\n";
    char line[160];
    std::snprintf(line, sizeof line, "hazards: %d (mean d_e %.3f)\n", report.totals.n_f,
                  report.totals.mean_d_e);
    std::cout << line;
    int shown = 0;
    for (const HazardRecord& h : report.hazards) {
        if (++shown > 5) {
            std::cout << "  ...\n";
            break;
        }
        std::snprintf(line, sizeof line, "  %s  peak=%.3f  d_e=%d  (%s)\n",
                      h.sequence.c_str(), h.peak_risk, h.error_distance, h.phase.c_str());
        std::cout << line;
    }
    std::cout << "report: " << f.out_path << "\n";
    std::snprintf(line, sizeof line, "wall time: %.2f s\n", wall);
    std::cout << line;
}

void cmd_sweep(const CLI::App* cmd, const RunFlags& f, const std::string& alphas_text,
               int repeats, const std::string& out_path) {
    const WorkcellConfig cell = load_workcell_config(f.cell_path);
    SearchConfig base = assemble_search_config(cmd, f);
    const ReferenceWorkcell sim(cell, base.risk);

    std::vector<double> alphas;
    std::stringstream ss(alphas_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            const double a = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument("trailing characters");
            alphas.push_back(a);
        } catch (const std::exception&) {
            throw ConfigError("--alphas: '" + tok + "' is not a number");
        }
    }
    if (alphas.empty()) throw ConfigError("--alphas: no values given");
    if (repeats < 1) throw ConfigError("--repeats: must be at least 1");

    std::ostringstream csv;
    csv << "alpha,runs,n_f_mean,n_f_min,n_f_max,mean_d_e\n";
    char line[160];
    for (const double alpha : alphas) {
        // alpha = 1 puts the whole budget into deterministic exploration, so
        // repeat runs would just duplicate the row
        const int runs = alpha >= 1.0 ? 1 : repeats;
        int n_min = 0, n_max_seen = 0;
        double n_sum = 0.0, d_sum = 0.0;
        for (int rep = 0; rep < runs; ++rep) {
            SearchConfig cfg = base;
            cfg.alpha = alpha;
            cfg.seed = base.seed + static_cast<std::uint64_t>(rep);
            const SearchReport report = run_search(cfg, sim, cell.fsm);
            const int nf = report.totals.n_f;
            if (rep == 0 || nf < n_min) n_min = nf;
            if (rep == 0 || nf > n_max_seen) n_max_seen = nf;
            n_sum += nf;
            d_sum += report.totals.mean_d_e;
        }
        std::snprintf(line, sizeof line, "%g,%d,%.3f,%d,%d,%.3f\n", alpha, runs,
                      n_sum / runs, n_min, n_max_seen, d_sum / runs);
        csv << line;
        std::cout << line;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + out_path + "'");
    out << csv.str();
    std::cout << "sweep table: " << out_path << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"search worker behaviors of a simulated workcell for unsafe ones"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunFlags f;
    std::string alphas_text;
    int repeats = 3;
    std::string sweep_out = "sweep.csv";
    std::string gen_out;

    CLI::App* gen = app.add_subcommand("generate", "enumerate feasible action sequences");
    gen->add_option("-c,--cell", f.cell_path, "cell description (JSON)")->required();
    gen->add_option("-o,--out", gen_out, "write the listing here instead of stdout");

    const auto add_search_flags = [&f](CLI::App* cmd) {
        cmd->add_option("-c,--cell", f.cell_path, "cell description (JSON)")->required();
        cmd->add_option("-s,--search", f.search_path, "search settings (JSON)");
        cmd->add_option("--n-max", f.n_max, "total simulation budget");
        cmd->add_option("--alpha", f.alpha, "exploration fraction of the budget");
        cmd->add_option("--n-nmo", f.n_nmo, "per-sequence optimization budget");
        cmd->add_option("--r-th", f.r_th, "unsafe peak-risk threshold");
        cmd->add_option("--mode", f.mode, "strict|probabilistic|random (aliases sp, pp)");
        cmd->add_option("--seed", f.seed_text, "RNG seed (beats HAZSEARCH_SEED)");
        cmd->add_option("--jobs", f.jobs, "concurrent simulations during exploration");
    };

    CLI::App* run = app.add_subcommand("run", "run the falsification search");
    add_search_flags(run);
    run->add_option("-o,--out", f.out_path, "report path (default report.json)");
    run->add_option("--traces", f.traces_dir, "also write one trace CSV per simulation");

    CLI::App* sweep = app.add_subcommand("sweep", "rerun the search across alpha values");
    add_search_flags(sweep);
    sweep->add_option("--alphas", alphas_text, "comma-separated alpha values")->required();
    sweep->add_option("--repeats", repeats, "runs per alpha (seeds base, base+1, ...)");
    sweep->add_option("-o,--out", sweep_out, "CSV path (default sweep.csv)");

    gen->callback([&] { cmd_generate(f.cell_path, gen_out); });
    run->callback([&] { cmd_run(run, f); });
    sweep->callback([&] { cmd_sweep(sweep, f, alphas_text, repeats, sweep_out); });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
