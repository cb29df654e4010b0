#include "hazsearch/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hazsearch/errors.hpp"

namespace hazsearch {

void NmOptions::validate() const {
    if (!(rho > 0.0)) throw ConfigError("nelder_mead.rho: must be positive");
    if (!(chi > 1.0)) throw ConfigError("nelder_mead.chi: must exceed 1");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("nelder_mead.gamma: must be in (0, 1)");
    if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("nelder_mead.sigma: must be in (0, 1)");
    if (!(spread > 0.0 && spread < 1.0)) throw ConfigError("nelder_mead.spread: must be in (0, 1)");
    if (!(penalty_weight >= 0.0))
        throw ConfigError("nelder_mead.penalty_weight: must be non-negative");
}

double penalized_objective(double value, const ParameterVector& theta,
                           const ParameterSpace& space, double penalty_weight) {
    if (theta.size() != static_cast<std::size_t>(space.dims()))
        throw UsageError("penalized_objective: dimension mismatch");
    double penalty = 0.0;
    for (int i = 0; i < space.dims(); ++i) {
        const double below = std::max(0.0, space.lower[i] - theta[i]);
        const double above = std::max(0.0, theta[i] - space.upper[i]);
        const double viol = below + above;
        penalty += viol * viol;
    }
    return value - penalty_weight * penalty;
}

NelderMead::NelderMead(const ParameterSpace& space, Rng& rng, NmOptions options)
    : opt_(options), n_(space.dims()), lo_(space.lower), hi_(space.upper) {
    opt_.validate();
    space.validate();
    ParameterVector v0(n_);
    for (int i = 0; i < n_; ++i) v0[i] = rng.uniform(lo_[i], hi_[i]);
    verts_.push_back(v0);
    for (int i = 0; i < n_; ++i) {
        const double w = hi_[i] - lo_[i];
        ParameterVector v = v0;
        v[i] += opt_.spread * w;
        if (v[i] > hi_[i]) v[i] = v0[i] - opt_.spread * w;
        verts_.push_back(std::move(v));
    }
    vals_.assign(n_ + 1, 0.0);
    trial_ = verts_[0];
}

const ParameterVector& NelderMead::ask() {
    asked_ = true;
    if (phase_ == Phase::init) return verts_[pending_];
    return trial_;
}

void NelderMead::tell(double value) {
    if (!asked_) throw UsageError("NelderMead::tell without a pending ask");
    asked_ = false;
    const double f = -value;  // maximize by minimizing the negation
    ++evals_;
    switch (phase_) {
        case Phase::init:
            vals_[pending_] = f;
            ++pending_;
            if (pending_ <= n_) return;
            begin_iteration();
            return;
        case Phase::reflect:
            fr_ = f;
            xr_ = trial_;
            if (f < vals_[0]) {
                for (int i = 0; i < n_; ++i)
                    trial_[i] = cen_[i] + opt_.chi * (xr_[i] - cen_[i]);
                phase_ = Phase::expand;
            } else if (f < vals_[n_ - 1]) {
                accept(xr_, f);
            } else if (f < vals_[n_]) {
                for (int i = 0; i < n_; ++i)
                    trial_[i] = cen_[i] + opt_.gamma * (xr_[i] - cen_[i]);
                phase_ = Phase::contract_out;
            } else {
                for (int i = 0; i < n_; ++i)
                    trial_[i] = cen_[i] - opt_.gamma * (cen_[i] - verts_[n_][i]);
                phase_ = Phase::contract_in;
            }
            return;
        case Phase::expand:
            if (f < fr_)
                accept(trial_, f);
            else
                accept(xr_, fr_);
            return;
        case Phase::contract_out:
            if (f <= fr_)
                accept(trial_, f);
            else
                start_shrink();
            return;
        case Phase::contract_in:
            if (f < vals_[n_])
                accept(trial_, f);
            else
                start_shrink();
            return;
        case Phase::shrink:
            vals_[shrink_i_] = f;
            ++shrink_i_;
            if (shrink_i_ <= n_)
                trial_ = verts_[shrink_i_];
            else
                begin_iteration();
            return;
    }
}

NelderMead::Best NelderMead::best() const {
    if (evals_ == 0) throw UsageError("NelderMead::best before any evaluation");
    int bi = 0;
    const int limit = phase_ == Phase::init ? pending_ : n_ + 1;
    for (int i = 1; i < limit; ++i)
        if (vals_[i] < vals_[bi]) bi = i;
    return Best{verts_[bi], -vals_[bi]};
}

void NelderMead::accept(const ParameterVector& x, double f) {
    verts_[n_] = x;
    vals_[n_] = f;
    begin_iteration();
}

void NelderMead::begin_iteration() {
    std::vector<int> order(n_ + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return vals_[a] < vals_[b]; });
    std::vector<ParameterVector> vs(n_ + 1);
    std::vector<double> fs(n_ + 1);
    for (int i = 0; i <= n_; ++i) {
        vs[i] = verts_[order[i]];
        fs[i] = vals_[order[i]];
    }
    verts_ = std::move(vs);
    vals_ = std::move(fs);
    cen_.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i) cen_[i] += verts_[j][i];
    for (int i = 0; i < n_; ++i) cen_[i] /= n_;
    trial_.resize(n_);
    for (int i = 0; i < n_; ++i)
        trial_[i] = cen_[i] + opt_.rho * (cen_[i] - verts_[n_][i]);
    phase_ = Phase::reflect;
}

void NelderMead::start_shrink() {
    for (int j = 1; j <= n_; ++j)
        for (int i = 0; i < n_; ++i)
            verts_[j][i] = verts_[0][i] + opt_.sigma * (verts_[j][i] - verts_[0][i]);
    phase_ = Phase::shrink;
    shrink_i_ = 1;
    trial_ = verts_[1];
}

} // namespace hazsearch
