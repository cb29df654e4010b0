#include "hazsearch/behavior.hpp"

#include <algorithm>
#include <cmath>

#include "hazsearch/errors.hpp"

namespace hazsearch {

void ParameterSpace::validate() const {
    const std::size_t n = names.size();
    if (n == 0) throw ConfigError("parameters: at least one axis required");
    if (lower.size() != n || upper.size() != n || nominal.size() != n)
        throw ConfigError("parameters: names/lower/upper/nominal sizes disagree");
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& axis = names[i];
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !std::isfinite(nominal[i]))
            throw ConfigError("parameters." + axis + ": bounds must be finite");
        if (!(lower[i] < upper[i]))
            throw ConfigError("parameters." + axis + ": lower bound must be below upper bound");
        if (nominal[i] < lower[i] || nominal[i] > upper[i])
            throw ConfigError("parameters." + axis + ": nominal value outside the box");
    }
}

bool ParameterSpace::contains(const ParameterVector& v, double tol) const {
    if (v.size() != names.size()) return false;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] < lower[i] - tol || v[i] > upper[i] + tol) return false;
    return true;
}

ParameterVector ParameterSpace::clamp(const ParameterVector& v) const {
    if (v.size() != names.size())
        throw UsageError("parameters: expected " + std::to_string(names.size()) +
                         " values, got " + std::to_string(v.size()));
    ParameterVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = std::min(std::max(v[i], lower[i]), upper[i]);
    return out;
}

} // namespace hazsearch
