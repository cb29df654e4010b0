#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace hazsearch {

// Deterministic finite-state model of the constraints a worker's task flow
// must satisfy.  Actions are single characters; a sequence is feasible iff
// every action has a defined transition from the state reached so far.
// Accepting states are not modelled: feasibility is transition totality along
// the sequence.
struct WorkflowFsm {
    std::string alphabet;              // action symbols, enumeration order
    std::vector<std::string> states;
    std::string initial;
    // table[state][action] = next state index, or -1 when undefined
    std::vector<std::vector<int>> table;

    // Builds and validates the table from (from, action, to) triples.
    // Throws ConfigError on unknown states/actions or duplicate edges.
    static WorkflowFsm from_transitions(
        const std::string& alphabet, const std::vector<std::string>& states,
        const std::string& initial,
        const std::vector<std::tuple<std::string, char, std::string>>& transitions);

    int state_index(const std::string& name) const;
    int alphabet_index(char action) const;

    // Throws ConfigError when the sequence contains a symbol outside the
    // alphabet; infeasibility itself is a plain `false`.
    bool accepts(const std::string& sequence) const;

    // Index of the first action with no defined transition, or nullopt when
    // the whole sequence is feasible.
    std::optional<std::size_t> first_rejection(const std::string& sequence) const;

    void validate() const;
};

enum class CandidateStatus {
    pending,    // never simulated
    explored,   // simulated at nominal parameters, no hazard
    hazardous,  // at least one simulation crossed the risk threshold
    exhausted,  // local optimization spent its budget without a hazard
};

const char* to_string(CandidateStatus status);

struct CandidateEntry {
    std::string sequence;
    std::optional<int> distance;          // deviations from the nominal sequence
    std::optional<double> risk_estimate;  // peak risk at nominal parameters
    CandidateStatus status = CandidateStatus::pending;
    int evaluations = 0;                  // simulations spent on this sequence
};

struct CandidateSet {
    std::uint64_t enumerated = 0;  // |A|^m1, the raw space walked
    std::vector<CandidateEntry> entries;

    std::size_t size() const { return entries.size(); }
};

// Enumerates all length-m1 action sequences in lexicographic alphabet order
// and keeps the feasible ones.  Throws ConfigError when |A|^m1 exceeds the
// cap (default 1e7), before doing any work.
CandidateSet generate_feasible(const WorkflowFsm& fsm, int m1,
                               std::uint64_t cap = 10'000'000);

} // namespace hazsearch
