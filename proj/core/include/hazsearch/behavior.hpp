#pragma once

#include <string>
#include <vector>

namespace hazsearch {

using ParameterVector = std::vector<double>;

// Axis-aligned box of continuous motion parameters, with the nominal point
// the worker is modelled to use when nothing is specified.
struct ParameterSpace {
    std::vector<std::string> names;
    ParameterVector lower;
    ParameterVector upper;
    ParameterVector nominal;

    int dims() const { return static_cast<int>(names.size()); }
    double width(int i) const { return upper[i] - lower[i]; }

    // Throws ConfigError on size mismatches, non-finite bounds, empty axes,
    // or a nominal point outside the box.
    void validate() const;

    bool contains(const ParameterVector& v, double tol = 0.0) const;

    // Component-wise projection into the box.  Throws UsageError on a
    // dimension mismatch.
    ParameterVector clamp(const ParameterVector& v) const;
};

// One candidate worker behavior: an action sequence plus the motion
// parameters it is executed with.
struct Behavior {
    std::string sequence;
    ParameterVector parameters;
};

} // namespace hazsearch
