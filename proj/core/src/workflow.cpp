#include "hazsearch/workflow.hpp"

#include <algorithm>

#include "hazsearch/errors.hpp"

namespace hazsearch {

WorkflowFsm WorkflowFsm::from_transitions(
    const std::string& alphabet, const std::vector<std::string>& states,
    const std::string& initial,
    const std::vector<std::tuple<std::string, char, std::string>>& transitions) {
    WorkflowFsm fsm;
    fsm.alphabet = alphabet;
    fsm.states = states;
    fsm.initial = initial;

    if (alphabet.empty()) throw ConfigError("workflow: empty alphabet");
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
        if (alphabet.find(alphabet[i], i + 1) != std::string::npos)
            throw ConfigError(std::string("workflow: duplicate action '") + alphabet[i] +
                              "' in alphabet");
    }
    if (states.empty()) throw ConfigError("workflow: no states");
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            if (states[i] == states[j])
                throw ConfigError("workflow: duplicate state '" + states[i] + "'");
        }
    }
    if (fsm.state_index(initial) < 0)
        throw ConfigError("workflow: initial state '" + initial + "' is not a state");

    fsm.table.assign(states.size(), std::vector<int>(alphabet.size(), -1));
    for (std::size_t k = 0; k < transitions.size(); ++k) {
        const auto& [from, action, to] = transitions[k];
        const std::string at = "transitions[" + std::to_string(k) + "]";
        const int si = fsm.state_index(from);
        if (si < 0) throw ConfigError(at + ": unknown state '" + from + "'");
        const int ai = fsm.alphabet_index(action);
        if (ai < 0) throw ConfigError(at + ": unknown action '" + std::string(1, action) + "'");
        const int ti = fsm.state_index(to);
        if (ti < 0) throw ConfigError(at + ": unknown state '" + to + "'");
        if (fsm.table[si][ai] != -1)
            throw ConfigError(at + ": duplicate transition from '" + from + "' on '" +
                              std::string(1, action) + "'");
        fsm.table[si][ai] = ti;
    }
    return fsm;
}

int WorkflowFsm::state_index(const std::string& name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return static_cast<int>(i);
    return -1;
}

int WorkflowFsm::alphabet_index(char action) const {
    const auto pos = alphabet.find(action);
    return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

bool WorkflowFsm::accepts(const std::string& sequence) const {
    return !first_rejection(sequence).has_value();
}

std::optional<std::size_t> WorkflowFsm::first_rejection(const std::string& sequence) const {
    int state = state_index(initial);
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        const int ai = alphabet_index(sequence[i]);
        if (ai < 0)
            throw ConfigError(std::string("workflow: unknown action symbol '") + sequence[i] +
                              "' at position " + std::to_string(i));
        state = table[state][ai];
        if (state < 0) return i;
    }
    return std::nullopt;
}

void WorkflowFsm::validate() const {
    if (alphabet.empty()) throw ConfigError("workflow: empty alphabet");
    if (states.empty()) throw ConfigError("workflow: no states");
    if (state_index(initial) < 0)
        throw ConfigError("workflow: initial state '" + initial + "' is not a state");
    if (table.size() != states.size())
        throw ConfigError("workflow: transition table has wrong row count");
    for (const auto& row : table) {
        if (row.size() != alphabet.size())
            throw ConfigError("workflow: transition table has wrong column count");
        for (int t : row) {
            if (t < -1 || t >= static_cast<int>(states.size()))
                throw ConfigError("workflow: transition target out of range");
        }
    }
}

const char* to_string(CandidateStatus status) {
    switch (status) {
        case CandidateStatus::pending: return "pending";
        case CandidateStatus::explored: return "explored";
        case CandidateStatus::hazardous: return "hazardous";
        case CandidateStatus::exhausted: return "exhausted";
    }
    return "unknown";
}

namespace {

void extend(const WorkflowFsm& fsm, int state, int depth, int m1, std::string& prefix,
            std::vector<CandidateEntry>& out) {
    if (depth == m1) {
        out.push_back(CandidateEntry{prefix, std::nullopt, std::nullopt,
                                     CandidateStatus::pending, 0});
        return;
    }
    for (std::size_t ai = 0; ai < fsm.alphabet.size(); ++ai) {
        const int next = fsm.table[state][ai];
        if (next < 0) continue;
        prefix.push_back(fsm.alphabet[ai]);
        extend(fsm, next, depth + 1, m1, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

CandidateSet generate_feasible(const WorkflowFsm& fsm, int m1, std::uint64_t cap) {
    fsm.validate();
    if (m1 < 1) throw ConfigError("generate_feasible: sequence length must be >= 1");

    // Overflow-safe |A|^m1 against the cap.
    std::uint64_t total = 1;
    for (int i = 0; i < m1; ++i) {
        if (total > cap / fsm.alphabet.size())
            throw ConfigError("generate_feasible: |A|^m1 exceeds enumeration cap of " +
                              std::to_string(cap));
        total *= fsm.alphabet.size();
    }
    if (total > cap)
        throw ConfigError("generate_feasible: |A|^m1 exceeds enumeration cap of " +
                          std::to_string(cap));

    CandidateSet set;
    set.enumerated = total;
    // Walking the feasible prefix tree in alphabet order yields exactly the
    // lexicographic order of the full enumeration, minus the rejects.
    std::string prefix;
    prefix.reserve(m1);
    extend(fsm, fsm.state_index(fsm.initial), 0, m1, prefix, set.entries);
    return set;
}

} // namespace hazsearch
