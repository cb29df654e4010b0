#pragma once

#include <vector>

#include "hazsearch/behavior.hpp"
#include "hazsearch/rng.hpp"

namespace hazsearch {

struct NmOptions {
    double rho = 1.0;     // reflection
    double chi = 2.0;     // expansion
    double gamma = 0.5;   // contraction
    double sigma = 0.5;   // shrink
    double spread = 0.05; // initial simplex spread, fraction of box width
    double penalty_weight = 10.0;  // box-violation weight in the objective

    void validate() const;  // ConfigError on non-positive coefficients
};

// Objective value for a maximizer that must stay inside the box: the raw
// value minus penalty_weight times the squared box violation.  Evaluated on
// the optimizer's raw (unclamped) point so the penalty can pull it back in.
double penalized_objective(double value, const ParameterVector& theta,
                           const ParameterSpace& space, double penalty_weight);

// Derivative-free simplex maximizer in ask/tell form, so the caller owns the
// evaluation loop (and its budget).  Each ask yields one point; the matching
// tell reports its value.  The first dims+1 ask/tell pairs evaluate the
// initial simplex: a uniformly drawn base vertex plus one vertex per axis
// offset by `spread` of the box width (stepping inward when the offset would
// leave the box).  Deterministic given the Rng state.
class NelderMead {
public:
    NelderMead(const ParameterSpace& space, Rng& rng, NmOptions options = {});

    // Next point to evaluate.  Idempotent until the matching tell().
    const ParameterVector& ask();

    // Reports the value of the last ask()ed point.  UsageError when no
    // evaluation is pending.
    void tell(double value);

    struct Best {
        ParameterVector point;
        double value;  // in the caller's (maximization) orientation
    };
    // Best evaluated vertex so far.  UsageError before any tell().
    Best best() const;

    int evaluations() const { return evals_; }

private:
    void begin_iteration();
    void accept(const ParameterVector& x, double f);
    void start_shrink();

    enum class Phase { init, reflect, expand, contract_out, contract_in, shrink };

    NmOptions opt_;
    int n_;
    ParameterVector lo_, hi_;
    std::vector<ParameterVector> verts_;
    std::vector<double> vals_;  // negated: internally a minimizer
    Phase phase_ = Phase::init;
    int pending_ = 0;   // init: vertex index being evaluated
    int shrink_i_ = 0;
    ParameterVector cen_, trial_, xr_;
    double fr_ = 0.0;
    bool asked_ = false;
    int evals_ = 0;
};

} // namespace hazsearch
