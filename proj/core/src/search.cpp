#include "hazsearch/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "hazsearch/distance.hpp"
#include "hazsearch/errors.hpp"
#include "hazsearch/rng.hpp"

namespace hazsearch {

const char* to_string(SearchMode mode) {
    switch (mode) {
        case SearchMode::strict: return "strict";
        case SearchMode::probabilistic: return "probabilistic";
        case SearchMode::random: return "random";
    }
    return "unknown";
}

SearchMode search_mode_from_string(const std::string& name) {
    if (name == "strict" || name == "sp") return SearchMode::strict;
    if (name == "probabilistic" || name == "pp") return SearchMode::probabilistic;
    if (name == "random") return SearchMode::random;
    throw ConfigError("mode: unknown search mode '" + name +
                      "' (expected strict|probabilistic|random)");
}

void SearchConfig::validate(int dims) const {
    if (n_max < 1) throw ConfigError("n_max: must be at least 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha: must be in [0, 1]");
    if (n_nmo < dims + 2)
        throw ConfigError("n_nmo: must be at least " + std::to_string(dims + 2) +
                          " (simplex setup plus one step)");
    if (jobs < 1) throw ConfigError("jobs: must be at least 1");
    risk.validate();
    nelder_mead.validate();
}

BudgetSplit allocate_budget(int n_max, double alpha, std::uint64_t n_feasible) {
    if (n_max < 0) throw UsageError("allocate_budget: negative budget");
    // tiny epsilon so that e.g. 0.3 * 300 lands on 90, not 89
    auto n_explore = static_cast<std::uint64_t>(std::floor(alpha * n_max + 1e-9));
    n_explore = std::min(n_explore, n_feasible);
    const int e = static_cast<int>(n_explore);
    return BudgetSplit{e, n_max - e};
}

namespace {

struct Engine {
    const SearchConfig& cfg;
    const SimulatorInterface& sim;
    const SearchHooks& hooks;
    const SimulatorInfo& info;
    CandidateSet candidates;
    Rng rng;
    int sim_count = 0;
    std::vector<HazardRecord> raw_hazards;

    Engine(const SearchConfig& c, const SimulatorInterface& s, const SearchHooks& h)
        : cfg(c), sim(s), hooks(h), info(s.info()), rng(c.seed) {}

    // One simulation plus bookkeeping; returns the simulator's peak risk.
    // Failures are rethrown with the offending sequence attached.
    PeakRisk simulate_counted(const Behavior& b, int index) {
        try {
            const SimulationOutcome outcome = sim.simulate(b);
            if (hooks.on_simulate) hooks.on_simulate(index, b, outcome);
            return outcome.peak;
        } catch (const ConfigError& e) {
            throw ConfigError("sequence '" + b.sequence + "': " + e.what());
        } catch (const UsageError& e) {
            throw UsageError("sequence '" + b.sequence + "': " + e.what());
        } catch (const std::exception& e) {
            throw std::runtime_error("sequence '" + b.sequence + "': " + e.what());
        }
    }

    void record_hazard(const CandidateEntry& entry, const ParameterVector& theta,
                       const PeakRisk& peak, int index, const char* phase) {
        raw_hazards.push_back(HazardRecord{entry.sequence, theta, peak.value, peak.time,
                                           entry.distance.value_or(0), index, phase});
    }

    void explore(int n_explore) {
        if (n_explore <= 0) return;
        std::vector<PeakRisk> peaks(n_explore);
        const int workers = std::min(cfg.jobs, n_explore);
        if (workers <= 1) {
            for (int slot = 0; slot < n_explore; ++slot) {
                peaks[slot] = simulate_counted(
                    Behavior{candidates.entries[slot].sequence, info.parameters.nominal},
                    sim_count + slot + 1);
            }
        } else {
            // Slot-indexed work queue: results and simulation indices depend
            // only on the slot, never on thread scheduling.
            std::atomic<int> next{0};
            std::vector<std::thread> pool;
            std::exception_ptr error;
            std::mutex error_mu;
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (int slot = next.fetch_add(1); slot < n_explore;
                         slot = next.fetch_add(1)) {
                        try {
                            peaks[slot] = simulate_counted(
                                Behavior{candidates.entries[slot].sequence,
                                         info.parameters.nominal},
                                sim_count + slot + 1);
                        } catch (...) {
                            std::lock_guard<std::mutex> lock(error_mu);
                            if (!error) error = std::current_exception();
                            return;
                        }
                    }
                });
            }
            for (auto& t : pool) t.join();
            if (error) std::rethrow_exception(error);
        }
        for (int slot = 0; slot < n_explore; ++slot) {
            CandidateEntry& entry = candidates.entries[slot];
            const int index = sim_count + slot + 1;
            entry.risk_estimate = peaks[slot].value;
            entry.evaluations += 1;
            if (peaks[slot].value > cfg.risk.r_threshold) {
                entry.status = CandidateStatus::hazardous;
                record_hazard(entry, info.parameters.nominal, peaks[slot], index,
                              "exploration");
            } else {
                entry.status = CandidateStatus::explored;
            }
        }
        sim_count += n_explore;
    }

    // Exploitation order: highest nominal-parameter estimate first; sequences
    // never explored rank after all explored ones; every tie falls back to
    // deviation-distance order.
    std::vector<int> strict_order() const {
        std::vector<int> order;
        for (int i = 0; i < static_cast<int>(candidates.size()); ++i)
            if (candidates.entries[i].status != CandidateStatus::hazardous)
                order.push_back(i);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const double ea = candidates.entries[a].risk_estimate.value_or(-1.0);
            const double eb = candidates.entries[b].risk_estimate.value_or(-1.0);
            return ea > eb;
        });
        return order;
    }

    // Weighted sampling without replacement, weight = max(estimate, 1e-6).
    int draw_weighted(std::vector<int>& pool) {
        double total = 0.0;
        for (int i : pool)
            total += std::max(candidates.entries[i].risk_estimate.value_or(0.0), 1e-6);
        const double u = rng.uniform() * total;
        double cum = 0.0;
        for (std::size_t k = 0; k < pool.size(); ++k) {
            cum += std::max(candidates.entries[pool[k]].risk_estimate.value_or(0.0), 1e-6);
            if (u < cum || k + 1 == pool.size()) {
                const int idx = pool[k];
                pool.erase(pool.begin() + k);
                return idx;
            }
        }
        throw UsageError("draw_weighted: empty pool");
    }

    // Local optimization on one sequence until hazard, per-sequence budget
    // N_NMO, or global budget exhaustion.
    // Returns false when the global budget is gone.
    bool exploit_sequence(CandidateEntry& entry, int& budget_left) {
        NelderMead nm(info.parameters, rng, cfg.nelder_mead);
        int k = 0;
        while (k < cfg.n_nmo) {
            if (budget_left <= 0) return false;
            const ParameterVector& raw = nm.ask();
            const ParameterVector theta = info.parameters.clamp(raw);
            ++sim_count;
            --budget_left;
            ++k;
            entry.evaluations += 1;
            const PeakRisk peak =
                simulate_counted(Behavior{entry.sequence, theta}, sim_count);
            if (peak.value > cfg.risk.r_threshold) {
                entry.status = CandidateStatus::hazardous;
                record_hazard(entry, theta, peak, sim_count, "exploitation");
                return true;
            }
            // the optimizer sees the raw point, so leaving the box costs it
            nm.tell(penalized_objective(peak.value, raw, info.parameters,
                                        cfg.nelder_mead.penalty_weight));
        }
        entry.status = CandidateStatus::exhausted;
        return true;
    }

    void exploit(int n_exploit) {
        int budget_left = n_exploit;
        if (cfg.mode == SearchMode::strict) {
            for (int idx : strict_order()) {
                if (budget_left <= 0) break;
                if (!exploit_sequence(candidates.entries[idx], budget_left)) break;
            }
        } else {
            std::vector<int> pool;
            for (int i = 0; i < static_cast<int>(candidates.size()); ++i)
                if (candidates.entries[i].status != CandidateStatus::hazardous)
                    pool.push_back(i);
            while (budget_left > 0 && !pool.empty()) {
                const int idx = draw_weighted(pool);
                if (!exploit_sequence(candidates.entries[idx], budget_left)) break;
            }
        }
    }

    void random_baseline() {
        for (int i = 0; i < cfg.n_max; ++i) {
            CandidateEntry& entry =
                candidates.entries[rng.below(candidates.size())];
            ParameterVector theta(info.parameters.dims());
            for (int d = 0; d < info.parameters.dims(); ++d)
                theta[d] = rng.uniform(info.parameters.lower[d], info.parameters.upper[d]);
            ++sim_count;
            entry.evaluations += 1;
            const PeakRisk peak =
                simulate_counted(Behavior{entry.sequence, theta}, sim_count);
            if (peak.value > cfg.risk.r_threshold) {
                entry.status = CandidateStatus::hazardous;
                record_hazard(entry, theta, peak, sim_count, "random");
            }
        }
    }

    // One hazard per sequence: keep the highest peak (earliest on ties).
    std::vector<HazardRecord> dedup_hazards() const {
        std::vector<HazardRecord> out;
        std::unordered_map<std::string, std::size_t> seen;
        for (const HazardRecord& h : raw_hazards) {
            const auto it = seen.find(h.sequence);
            if (it == seen.end()) {
                seen.emplace(h.sequence, out.size());
                out.push_back(h);
            } else if (h.peak_risk > out[it->second].peak_risk) {
                out[it->second] = h;
            }
        }
        return out;
    }
};

} // namespace

SearchReport run_search(const SearchConfig& cfg, const SimulatorInterface& sim,
                        const WorkflowFsm& fsm, const SearchHooks& hooks) {
    const SimulatorInfo& info = sim.info();
    cfg.validate(info.parameters.dims());
    fsm.validate();
    info.parameters.validate();
    if (!fsm.accepts(info.nominal_sequence))
        throw ConfigError("nominal sequence '" + info.nominal_sequence +
                          "' is not feasible under the workflow model");

    Engine eng(cfg, sim, hooks);
    eng.candidates = generate_feasible(fsm, static_cast<int>(info.nominal_sequence.size()),
                                       cfg.enumeration_cap);
    sort_by_distance(eng.candidates, info.nominal_sequence, fsm.alphabet);

    SearchReport report;
    report.config = cfg;
    report.enumerated = eng.candidates.enumerated;
    report.feasible = eng.candidates.size();

    if (cfg.mode == SearchMode::random) {
        eng.random_baseline();
    } else {
        const BudgetSplit split =
            allocate_budget(cfg.n_max, cfg.alpha, eng.candidates.size());
        report.totals.n_explore = split.n_explore;
        report.totals.n_exploit = split.n_exploit;
        eng.explore(split.n_explore);
        eng.exploit(split.n_exploit);
    }

    report.hazards = eng.dedup_hazards();
    report.totals.simulate_calls = eng.sim_count;
    report.totals.unspent_budget = cfg.n_max - eng.sim_count;
    report.totals.n_f = static_cast<int>(report.hazards.size());
    double sum_d = 0.0;
    for (const HazardRecord& h : report.hazards) sum_d += h.error_distance;
    report.totals.mean_d_e =
        report.hazards.empty() ? 0.0 : sum_d / static_cast<double>(report.hazards.size());

    report.sequences.reserve(eng.candidates.size());
    for (const CandidateEntry& e : eng.candidates.entries)
        report.sequences.push_back(SequenceSummary{e.sequence, e.distance.value_or(0),
                                                   e.risk_estimate, e.status,
                                                   e.evaluations});
    return report;
}

} // namespace hazsearch
