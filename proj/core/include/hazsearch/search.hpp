#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hazsearch/behavior.hpp"
#include "hazsearch/nelder_mead.hpp"
#include "hazsearch/risk.hpp"
#include "hazsearch/simulator.hpp"
#include "hazsearch/workflow.hpp"

namespace hazsearch {

enum class SearchMode { strict, probabilistic, random };

const char* to_string(SearchMode mode);
SearchMode search_mode_from_string(const std::string& name);  // ConfigError on unknown

struct SearchConfig {
    int n_max = 300;       // total simulation budget
    double alpha = 0.6;    // fraction of the budget spent exploring
    int n_nmo = 30;        // per-sequence optimization budget
    std::uint64_t seed = 1;
    SearchMode mode = SearchMode::strict;
    RiskConfig risk;
    NmOptions nelder_mead;
    int jobs = 1;          // concurrent simulations during exploration
    std::uint64_t enumeration_cap = 10'000'000;

    void validate(int dims) const;
};

struct HazardRecord {
    std::string sequence;
    ParameterVector parameters;  // as simulated (inside the box)
    double peak_risk = 0.0;
    double peak_time = 0.0;
    int error_distance = 0;
    int sim_index = 0;           // 1-based position in the simulation stream
    std::string phase;           // exploration | exploitation | random
};

struct SequenceSummary {
    std::string sequence;
    int distance = 0;
    std::optional<double> risk_estimate;  // peak risk at nominal parameters
    CandidateStatus status = CandidateStatus::pending;
    int evaluations = 0;
};

struct SearchTotals {
    int simulate_calls = 0;
    int n_explore = 0;       // allocated exploration budget
    int n_exploit = 0;       // allocated exploitation budget
    int unspent_budget = 0;  // budget left when the candidate pool ran dry
    int n_f = 0;             // distinct unsafe sequences found
    double mean_d_e = 0.0;   // mean deviation distance of the hazards
};

struct SearchReport {
    SearchConfig config;
    std::uint64_t enumerated = 0;  // |A|^m1
    std::uint64_t feasible = 0;
    SearchTotals totals;
    std::vector<HazardRecord> hazards;       // one per unsafe sequence, max risk kept
    std::vector<SequenceSummary> sequences;  // full candidate set, distance order
};

struct BudgetSplit {
    int n_explore = 0;
    int n_exploit = 0;
};

// Splits the budget: floor(alpha * n_max) exploration simulations, bounded by
// the number of feasible sequences; the rest goes to exploitation.
BudgetSplit allocate_budget(int n_max, double alpha, std::uint64_t n_feasible);

struct SearchHooks {
    // Called once per simulation with its 1-based index.  Under concurrent
    // exploration this fires from worker threads (indices still unique and
    // reproducible); keep the callback thread-safe.
    std::function<void(int sim_index, const Behavior&, const SimulationOutcome&)>
        on_simulate;
};

// Runs the full pipeline: enumerate feasible sequences, order by deviation
// distance, explore at nominal parameters, then spend the remaining budget
// optimizing parameters per sequence (or sample uniformly in random mode).
// Reports are byte-stable for a given config, including across jobs counts.
SearchReport run_search(const SearchConfig& cfg, const SimulatorInterface& sim,
                        const WorkflowFsm& fsm, const SearchHooks& hooks = {});

} // namespace hazsearch
