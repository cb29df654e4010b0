// Acceptance harness for the falsification toolkit: runs the ten release
// gates end to end against the bundled reference workcell and prints one
// [PASS]/[FAIL] line per criterion.  The exit status is the number of gated
// failures (the qualitative-trend criterion is reported but never gates).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hazsearch/config_io.hpp"
#include "hazsearch/distance.hpp"
#include "hazsearch/errors.hpp"
#include "hazsearch/nelder_mead.hpp"
#include "hazsearch/risk.hpp"
#include "hazsearch/rng.hpp"
#include "hazsearch/search.hpp"
#include "hazsearch/workcell.hpp"
#include "hazsearch/workflow.hpp"
#include "../support/naive_distance.hpp"

using namespace hazsearch;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Gate {
    int hard_failures = 0;

    void line(int n, const std::string& title, bool ok, const std::string& detail,
              bool gated = true) {
        std::printf("[%s] criterion %d: %s — %s%s\n", ok ? "PASS" : "FAIL", n,
                    title.c_str(), detail.c_str(), gated ? "" : " (report-only)");
        if (!ok && gated) ++hard_failures;
    }

    static void note(const std::string& text) {
        std::printf("        %s\n", text.c_str());
    }
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// Counts simulate() calls independently of the engine's own bookkeeping.
class CountingWorkcell : public SimulatorInterface {
public:
    CountingWorkcell(const WorkcellConfig& cfg, const RiskConfig& risk)
        : inner_(cfg, risk) {}

    const SimulatorInfo& info() const override { return inner_.info(); }

    SimulationOutcome simulate(const Behavior& b) const override {
        ++calls_;
        return inner_.simulate(b);
    }

    int calls() const { return calls_.load(); }

private:
    ReferenceWorkcell inner_;
    mutable std::atomic<int> calls_{0};
};

// Which robot drove the peak: 0 = the stationary arm (hand-placement family),
// 1 = the vehicle crossing the corridor (path family).
int peak_robot(const SimulationOutcome& out, const RiskConfig& risk) {
    for (const RiskSample& s : out.trace) {
        if (step_risk(s, risk) != out.peak.value) continue;
        int best = -1;
        double best_risk = -1.0;
        for (const RobotSample& r : s.robots) {
            const double v = robot_risk(r, risk);
            if (v > best_risk) {
                best_risk = v;
                best = r.robot;
            }
        }
        return best;
    }
    return -1;
}

double norm3(const ParameterVector& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

SearchConfig falsification_config(std::uint64_t seed, SearchMode mode, int n_max) {
    SearchConfig cfg;
    cfg.n_max = n_max;
    cfg.alpha = 0.6;
    cfg.n_nmo = 8;
    cfg.seed = seed;
    cfg.mode = mode;
    return cfg;
}

} // namespace

int main() {
    Gate gate;
    const WorkcellConfig cell = reference_workcell_config();

    // ---- 1: the reference task model spans exactly the expected sequence space
    {
        const auto t0 = clock_type::now();
        const CandidateSet set = generate_feasible(cell.fsm, 6);
        const double dt = seconds_since(t0);
        const bool ok =
            set.entries.size() == 266 && set.enumerated == 4096 && dt < 1.0;
        gate.line(1, "feasible-set size", ok,
                  fmt("%zu feasible of %llu enumerated in %.0f ms",
                      set.entries.size(),
                      static_cast<unsigned long long>(set.enumerated), dt * 1e3));
    }

    // ---- 2: worked examples of acceptance and deviation counting
    {
        const bool accepts_nominal = cell.fsm.accepts("tpwtdw");
        const auto rej = cell.fsm.first_rejection("tdpwtd");
        const int d1 = error_distance("tpwtwd", "tpwtdw", cell.fsm.alphabet);
        const int d2 = error_distance("twwpww", "tpwtdw", cell.fsm.alphabet);
        const bool ok = accepts_nominal && rej.has_value() && *rej == 1 && d1 == 1 &&
                        d2 == 3;
        gate.line(2, "worked examples", ok,
                  fmt("nominal accepted; 'tdpwtd' rejected at index %d; "
                      "deviation counts %d and %d",
                      rej ? static_cast<int>(*rej) : -1, d1, d2));
    }

    // ---- 3: production distance vs. a brute-force deviation search
    {
        const auto t0 = clock_type::now();
        const std::string alphabet = cell.fsm.alphabet;
        Rng rng(2026);
        int mismatches = 0;
        for (int it = 0; it < 1000; ++it) {
            const int len = 1 + static_cast<int>(rng.below(6));
            std::string a, b;
            for (int i = 0; i < len; ++i) a += alphabet[rng.below(alphabet.size())];
            for (int i = 0; i < len; ++i) b += alphabet[rng.below(alphabet.size())];
            const int got = error_distance(a, b, alphabet);
            const auto want = testsupport::naive_distance(a, b, alphabet, 4);
            if (want ? got != *want : got <= 4) ++mismatches;
        }
        const double dt = seconds_since(t0);
        gate.line(3, "distance oracle agreement", mismatches == 0 && dt < 60.0,
                  fmt("1000 random pairs, %d mismatches, %.1f s", mismatches, dt));
    }

    // ---- 4: risk metric case values and shape
    {
        const RiskConfig risk;
        const auto rel_ok = [](double got, double want) {
            return std::fabs(got - want) <= 1e-9 * std::fabs(want);
        };
        const double slow = robot_risk({0, 0.2, 0.05, 0.0}, risk);
        const double near_miss = robot_risk({0, 0.3, 0.5, 0.0}, risk);
        const double contact = robot_risk({0, 0.3, 0.0, 119.0}, risk);
        bool cases = slow == 0.0 && rel_ok(near_miss, std::exp(-0.5)) &&
                     rel_ok(contact, 119.0 / 140.0 + 1.0);

        Rng rng(4);
        bool monotone = true;
        double worst_clear = 0.0, best_contact = 1e300;
        for (int i = 0; i < 10000; ++i) {
            const double v = 0.25 + rng.uniform() * 2.0;  // fast enough to matter
            const double d = rng.uniform() * 5.0;
            const double r1 = robot_risk({0, v, d, 0.0}, risk);
            const double r2 = robot_risk({0, v, d + 0.1, 0.0}, risk);
            if (!(r2 < r1)) monotone = false;  // farther is strictly safer
            worst_clear = std::max(worst_clear, r1);
            const double f = rng.uniform() * 400.0;
            const double c1 = robot_risk({0, v, 0.0, f}, risk);
            const double c2 = robot_risk({0, v, 0.0, f + 1.0}, risk);
            if (!(c2 > c1)) monotone = false;  // harder contact is strictly worse
            if (f > 0.0) best_contact = std::min(best_contact, c1);
        }
        const bool ordering = best_contact > worst_clear;
        gate.line(4, "risk metric cases", cases && monotone && ordering,
                  fmt("3 case values to 1e-9; monotone over 10^4 samples; "
                      "weakest contact %.6f > closest clear pass %.6f",
                      best_contact, worst_clear));
    }

    // ---- 5: the simulation budget is never exceeded
    {
        const auto t0 = clock_type::now();
        Rng rng(5);
        int worst_overshoot = 0;
        bool totals_agree = true;
        for (int it = 0; it < 200; ++it) {
            SearchConfig cfg;
            cfg.n_max = 1 + static_cast<int>(rng.below(200));
            cfg.alpha = rng.uniform();
            cfg.n_nmo = 5 + static_cast<int>(rng.below(16));
            cfg.seed = rng.raw();
            const auto m = rng.below(3);
            cfg.mode = m == 0 ? SearchMode::strict
                              : (m == 1 ? SearchMode::probabilistic : SearchMode::random);
            CountingWorkcell sim(cell, cfg.risk);
            const SearchReport rep = run_search(cfg, sim, cell.fsm);
            worst_overshoot = std::max(worst_overshoot, sim.calls() - cfg.n_max);
            if (rep.totals.simulate_calls != sim.calls()) totals_agree = false;
        }
        gate.line(5, "budget ceiling", worst_overshoot <= 0 && totals_agree,
                  fmt("200 randomized searches, worst overshoot %d calls, "
                      "reported totals %s, %.1f s",
                      worst_overshoot, totals_agree ? "exact" : "WRONG",
                      seconds_since(t0)));
    }

    // ---- 6 and 7 share one full falsification run: the flagship search is
    // executed once, its hazards are each re-simulated standalone (6), and the
    // same outcomes classify which cell flaw each hazard exercises (7)
    const SearchConfig fal_cfg = falsification_config(1, SearchMode::strict, 300);
    SearchReport falsification;
    {
        const auto t0 = clock_type::now();
        CountingWorkcell sim(cell, fal_cfg.risk);
        falsification = run_search(fal_cfg, sim, cell.fsm);
        const double dt_on = seconds_since(t0);

        int exact = 0, unsafe = 0, arm_family = 0, agv_family = 0;
        const ReferenceWorkcell replay(cell, fal_cfg.risk);
        for (const HazardRecord& h : falsification.hazards) {
            const SimulationOutcome out = replay.simulate({h.sequence, h.parameters});
            if (out.peak.value == h.peak_risk && out.peak.time == h.peak_time) ++exact;
            if (out.peak.value > fal_cfg.risk.r_threshold) ++unsafe;
            const int robot = peak_robot(out, fal_cfg.risk);
            if (robot == 0) ++arm_family;
            if (robot == 1) ++agv_family;
        }

        const int n = falsification.totals.n_f;
        gate.line(6, "hazard replay determinism", exact == n && unsafe == n && n > 0,
                  fmt("%d of %d hazards reproduce their peak exactly and stay "
                      "above the threshold",
                      exact, n));

        WorkcellConfig sound = cell;
        sound.flaws.mat_blind_spot = false;
        sound.flaws.agv_no_detection = false;
        const auto t1 = clock_type::now();
        CountingWorkcell sim_off(sound, fal_cfg.risk);
        const SearchReport fixed = run_search(fal_cfg, sim_off, sound.fsm);
        const double dt_off = seconds_since(t1);

        // 69 unsafe sequences is the frozen regression constant for this exact
        // cell, configuration, and seed; any drift means behavior changed.
        const double mean_d_e_frozen = 2.2753623188405796;
        const bool ok = n == 69 &&
                        std::fabs(falsification.totals.mean_d_e - mean_d_e_frozen) <=
                            1e-12 &&
                        falsification.totals.simulate_calls == 300 && arm_family >= 1 &&
                        agv_family >= 1 && arm_family + agv_family == n &&
                        fixed.totals.n_f == 0 && dt_on < 120.0 && dt_off < 120.0;
        gate.line(7, "end-to-end falsification", ok,
                  fmt("flaws on: %d unsafe sequences (mean deviation %.3f; "
                      "%d hand-placement, %d vehicle-path) in %.2f s; "
                      "flaws off: %d in %.2f s",
                      falsification.totals.n_f, falsification.totals.mean_d_e,
                      arm_family, agv_family, dt_on, fixed.totals.n_f, dt_off));
    }

    // ---- 8 (report-only): search strategy trends
    {
        double strict_sum = 0.0, random_sum = 0.0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            {
                CountingWorkcell sim(cell, fal_cfg.risk);
                strict_sum += run_search(falsification_config(seed, SearchMode::strict, 500),
                                         sim, cell.fsm)
                                  .totals.n_f;
            }
            {
                CountingWorkcell sim(cell, fal_cfg.risk);
                random_sum += run_search(falsification_config(seed, SearchMode::random, 500),
                                         sim, cell.fsm)
                                  .totals.n_f;
            }
        }
        const double strict_mean = strict_sum / 10.0;
        const double random_mean = random_sum / 10.0;

        const std::vector<double> alphas = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
        std::vector<double> sweep_means;
        for (const double alpha : alphas) {
            double sum = 0.0;
            for (std::uint64_t rep = 0; rep < 3; ++rep) {
                SearchConfig cfg = falsification_config(1 + rep, SearchMode::strict, 266);
                cfg.alpha = alpha;
                CountingWorkcell sim(cell, cfg.risk);
                sum += run_search(cfg, sim, cell.fsm).totals.n_f;
            }
            sweep_means.push_back(sum / 3.0);
        }
        std::size_t best_alpha = 0;
        for (std::size_t i = 1; i < alphas.size(); ++i)
            if (sweep_means[i] > sweep_means[best_alpha]) best_alpha = i;
        const bool interior = best_alpha != 0 && best_alpha + 1 != alphas.size();

        gate.line(8, "priority beats random, medium split wins",
                  strict_mean >= random_mean && interior,
                  fmt("mean unsafe sequences over 10 seeds: strict %.2f vs random "
                      "%.2f; split sweep peaks at %.1f",
                      strict_mean, random_mean, alphas[best_alpha]),
                  /*gated=*/false);
        std::string table = "split sweep (3 repeats each):";
        for (std::size_t i = 0; i < alphas.size(); ++i)
            table += fmt("  %.1f -> %.1f", alphas[i], sweep_means[i]);
        Gate::note(table);
    }

    // ---- 9: the parameter optimizer on a known landscape
    {
        ParameterSpace cube;
        cube.names = {"a", "b", "c"};
        cube.lower = {-1.0, -1.0, -1.0};
        cube.upper = {1.0, 1.0, 1.0};
        cube.nominal = {0.0, 0.0, 0.0};

        int worst_evals = 0;
        int converged = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            Rng rng(seed);
            NelderMead nm(cube, rng);
            for (int k = 0; k < 60; ++k) {
                const ParameterVector x = nm.ask();
                const ParameterVector c = cube.clamp(x);
                const double sphere = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
                nm.tell(penalized_objective(-sphere, x, cube, 10.0));
                if (norm3(nm.best().point) < 0.05) {
                    ++converged;
                    worst_evals = std::max(worst_evals, nm.evaluations());
                    break;
                }
            }
        }

        // setup accounting: exactly dims+1 evaluations build the simplex, and
        // the very next proposal is already a reflection step
        Rng rng(1);
        NelderMead nm(cube, rng);
        std::vector<ParameterVector> pts;
        std::vector<double> vals;
        for (int i = 0; i < 4; ++i) {
            pts.push_back(nm.ask());
            const ParameterVector c = cube.clamp(pts.back());
            vals.push_back(
                penalized_objective(-(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]),
                                    pts.back(), cube, 10.0));
            nm.tell(vals.back());
        }
        bool simplex_ok = true;
        for (int i = 1; i < 4; ++i) {
            int moved = 0;
            for (int d = 0; d < 3; ++d)
                if (pts[i][d] != pts[0][d]) ++moved;
            if (moved != 1) simplex_ok = false;
        }
        std::vector<std::size_t> order = {0, 1, 2, 3};
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
        ParameterVector cen(3, 0.0);
        for (int k = 0; k < 3; ++k)
            for (int d = 0; d < 3; ++d) cen[d] += pts[order[k]][d];
        const ParameterVector fifth = nm.ask();
        bool reflection_ok = true;
        for (int d = 0; d < 3; ++d) {
            const double c = cen[d] / 3.0;
            if (std::fabs(fifth[d] - (c + (c - pts[order[3]][d]))) > 1e-9)
                reflection_ok = false;
        }

        gate.line(9, "optimizer sanity", converged == 100 && simplex_ok && reflection_ok,
                  fmt("sphere: 100/100 seeds within 0.05 of the optimum, worst %d of "
                      "60 evaluations; 4 setup evaluations then a reflection",
                      worst_evals));
    }

    // ---- 10: reports are byte-stable, including across thread counts
    {
        SearchConfig cfg = falsification_config(5, SearchMode::strict, 120);
        auto render_with_jobs = [&](int jobs) {
            SearchConfig c = cfg;
            c.jobs = jobs;
            const ReferenceWorkcell sim(cell, c.risk);
            return render_report(run_search(c, sim, cell.fsm), cell);
        };
        const std::string r1 = render_with_jobs(1);
        const std::string r2 = render_with_jobs(2);
        const std::string r1_again = render_with_jobs(1);
        const bool in_process = r1 == r2 && r1 == r1_again;

        bool cli_ok = false;
        std::string cli_detail = "CLI run failed";
        const fs::path dir = fs::temp_directory_path() / "hazsearch_acceptance";
        fs::create_directories(dir);
        const fs::path search_path = dir / "search.json";
        {
            ordered_json j = search_config_to_json(cfg);
            std::ofstream(search_path) << j.dump(2) << "\n";
        }
        const fs::path cell_path = fs::path(HAZSEARCH_CONFIG_DIR) / "reference_cell.json";
        auto run_cli = [&](int jobs, const fs::path& out) {
            const std::string cmd = std::string("\"") + HAZSEARCH_CLI_PATH + "\" run -c \"" +
                                    cell_path.string() + "\" -s \"" + search_path.string() +
                                    "\" -o \"" + out.string() + "\" --jobs " +
                                    std::to_string(jobs) + " > /dev/null 2>&1";
            return std::system(cmd.c_str()) == 0;
        };
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            return buf.str();
        };
        const fs::path o1 = dir / "r1.json", o2 = dir / "r2.json", o3 = dir / "r3.json";
        if (run_cli(1, o1) && run_cli(4, o2) && run_cli(1, o3)) {
            const std::string b1 = slurp(o1), b2 = slurp(o2), b3 = slurp(o3);
            cli_ok = !b1.empty() && b1 == b2 && b1 == b3;
            cli_detail = fmt("CLI reports %zu bytes, jobs 1 vs 4 %s, rerun %s",
                             b1.size(), b1 == b2 ? "identical" : "DIFFER",
                             b1 == b3 ? "identical" : "DIFFER");
        }
        fs::remove_all(dir);

        gate.line(10, "report determinism", in_process && cli_ok,
                  fmt("in-process renders %s; %s",
                      in_process ? "identical" : "DIFFER", cli_detail.c_str()));
    }

    if (gate.hard_failures == 0)
        std::printf("all acceptance criteria hold\n");
    else
        std::printf("%d acceptance criteria FAILED\n", gate.hard_failures);
    return gate.hard_failures;
}
