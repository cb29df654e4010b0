#pragma once

#include <cstdint>
#include <random>

#include "hazsearch/errors.hpp"

namespace hazsearch {

// Seeded random source for the search engine.  mt19937_64 supplies the bits;
// the value helpers are fixed here instead of using std distributions, whose
// exact output is implementation-defined and would break cross-toolchain
// reproducibility of reports.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // Uniform in [0, 1) using the top 53 bits of one draw.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    // Uniform integer in [0, n) via rejection sampling (no modulo bias).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw UsageError("Rng::below: n must be positive");
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        std::uint64_t v = gen_();
        while (v < threshold) v = gen_();
        return v % n;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace hazsearch
