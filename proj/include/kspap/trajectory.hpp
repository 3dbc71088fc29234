#pragma once

#include <cmath>
#include <vector>

#include "kspap/errors.hpp"
#include "kspap/fields.hpp"

namespace kspap {

// Field sampled on a uniform time grid t_i = t0 + i*dt.  `t_burnin` marks the
// start of the trusted window: values before it still carry the spin-up error
// of the history truncation (length `history_length`).
template <class F>
struct Trajectory {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<F> values;
    double t_burnin = 0.0;
    double history_length = 0.0;

    int steps() const { return static_cast<int>(values.size()); }
    double time(int i) const { return t0 + i * dt; }
    double t_end() const { return time(steps() - 1); }

    bool same_grid(const Trajectory& o) const {
        return steps() == o.steps() && std::abs(t0 - o.t0) <= 1e-9 * std::max(1.0, std::abs(t0)) &&
               std::abs(dt - o.dt) <= 1e-12 * dt;
    }

    int index_of(double t) const {
        const double x = (t - t0) / dt;
        const int i = static_cast<int>(std::lround(x));
        if (i < 0 || i >= steps() || std::abs(x - i) > 1e-6)
            throw GridMismatch("trajectory: time not on grid");
        return i;
    }

    const F& at_time(double t) const { return values[index_of(t)]; }

    // Per-sample L^p norms.
    std::vector<double> norms(double p) const {
        std::vector<double> out(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) out[i] = lp_norm(values[i], p);
        return out;
    }

    double sup_norm(double p) const {
        double s = 0.0;
        for (const auto& v : values) s = std::max(s, lp_norm(v, p));
        return s;
    }

    // Sup over grid times within [a, b].
    double sup_norm(double p, double a, double b) const {
        double s = 0.0;
        for (int i = 0; i < steps(); ++i) {
            const double t = time(i);
            if (t >= a - 1e-12 && t <= b + 1e-12) s = std::max(s, lp_norm(values[i], p));
        }
        return s;
    }

    Trajectory slice(double a, double b) const {
        Trajectory out;
        out.dt = dt;
        out.t_burnin = t_burnin;
        out.history_length = history_length;
        const int i0 = index_of(a), i1 = index_of(b);
        out.t0 = time(i0);
        out.values.assign(values.begin() + i0, values.begin() + i1 + 1);
        return out;
    }
};

template <class F>
Trajectory<F> difference(const Trajectory<F>& a, const Trajectory<F>& b) {
    if (!a.same_grid(b)) throw GridMismatch("trajectory difference: grids differ");
    Trajectory<F> out = a;
    for (int i = 0; i < out.steps(); ++i) out.values[i] -= b.values[i];
    return out;
}

}  // namespace kspap
