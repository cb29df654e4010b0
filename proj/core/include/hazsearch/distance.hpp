#pragma once

#include <string>
#include <vector>

#include "hazsearch/workflow.hpp"

namespace hazsearch {

// Distance between two equal-length action sequences, counted in basic
// worker deviations.  Each deviation keeps the sequence length fixed:
//
//   - an extra action inserted at any position (the last action falls off)
//   - an action omitted (an arbitrary action is appended at the end)
//   - one action replaced by another
//   - two adjacent actions swapped
//
// Because a string-edit recurrence does not capture the drop/append
// tail effects exactly, the distance is computed as an exact shortest path
// over the deviation graph (breadth-first search).  The deviation set is
// symmetric, so the result is a true metric.
int error_distance(const std::string& a, const std::string& b, const std::string& alphabet);

// Distances from one source to many equal-length targets with a single
// breadth-first sweep.  Result is aligned with `targets`.
std::vector<int> distances_from(const std::string& source,
                                const std::vector<std::string>& targets,
                                const std::string& alphabet);

// Fills each entry's `distance` from the nominal sequence and orders the set
// by increasing distance; ties break lexicographically, so the order is
// total and reproducible.
void sort_by_distance(CandidateSet& candidates, const std::string& nominal,
                      const std::string& alphabet);

} // namespace hazsearch
