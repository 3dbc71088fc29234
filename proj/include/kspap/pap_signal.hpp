#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kspap/errors.hpp"
#include "kspap/fields.hpp"
#include "kspap/quadrature.hpp"
#include "kspap/trajectory.hpp"

namespace kspap {

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<SpectralField> {
    static SpectralField zero(const BoxDomain& d) { return SpectralField(d); }
    static std::vector<std::vector<double>> gl_grids(const SpectralField& f) {
        return {gl_values(f)};
    }
};

template <>
struct FieldTraits<VectorSpectralField> {
    static VectorSpectralField zero(const BoxDomain& d) { return VectorSpectralField(d); }
    static std::vector<std::vector<double>> gl_grids(const VectorSpectralField& f) {
        std::vector<std::vector<double>> g;
        for (int j = 0; j < f.components(); ++j) g.push_back(gl_component_values(f, j));
        return g;
    }
};

// One almost-periodic term amp * sin(freq t + phase) * profile.
template <class F>
struct ApTerm {
    double freq = 0.0;
    double phase = 0.0;
    double amp = 0.0;
    F profile;
};

template <class F>
struct ApPart {
    std::vector<ApTerm<F>> terms;

    bool empty() const { return terms.empty(); }

    // Upper bound sum |amp| * ||profile||_p for the sup over t.
    double sup_norm_bound(double p) const {
        double s = 0.0;
        for (const auto& t : terms) s += std::abs(t.amp) * lp_norm(t.profile, p);
        return s;
    }
};

enum class EnvelopeKind { Exponential, Power, Tabulated };

// PAP_0 ingredient: a vanishing-ergodic-mean envelope attached to a spatial
// profile, or a tabulated norm trace produced by pap0_residual.
template <class F>
struct Pap0Part {
    EnvelopeKind kind = EnvelopeKind::Exponential;
    double rate = 1.0;   // a in e^{-a|t|}, or b in (1+|t|)^{-b} (b > 0)
    double scale = 1.0;
    std::optional<F> profile;
    std::vector<double> table_t, table_norm;  // Tabulated kind only

    double envelope(double t) const {
        switch (kind) {
            case EnvelopeKind::Exponential: return std::exp(-rate * std::abs(t));
            case EnvelopeKind::Power: return std::pow(1.0 + std::abs(t), -rate);
            case EnvelopeKind::Tabulated:
                throw std::logic_error("tabulated PAP0 part has no envelope");
        }
        return 0.0;
    }

    // Closed-form ergodic mean (1/2L) int_{-L}^{L} envelope, parametric kinds.
    double envelope_mean(double L) const {
        const double a = rate;
        switch (kind) {
            case EnvelopeKind::Exponential: return (1.0 - std::exp(-a * L)) / (a * L);
            case EnvelopeKind::Power:
                if (a == 1.0) return std::log1p(L) / L;
                return (std::pow(1.0 + L, 1.0 - a) - 1.0) / ((1.0 - a) * L);
            case EnvelopeKind::Tabulated:
                throw std::logic_error("tabulated PAP0 part has no closed-form mean");
        }
        return 0.0;
    }
};

// PAP signal with its decomposition stored explicitly: AP part + PAP_0 part.
template <class F>
struct PapSignal {
    BoxDomain domain;
    ApPart<F> ap;
    std::optional<Pap0Part<F>> pap0;

    explicit PapSignal(BoxDomain d) : domain(std::move(d)) {}

    F sample(double t) const {
        F out = FieldTraits<F>::zero(domain);
        for (const auto& term : ap.terms) {
            F tmp = term.profile;
            tmp *= term.amp * std::sin(term.freq * t + term.phase);
            out += tmp;
        }
        if (pap0) {
            if (pap0->kind == EnvelopeKind::Tabulated)
                throw std::logic_error("cannot sample a tabulated PAP0 part as a field");
            F tmp = *pap0->profile;
            tmp *= pap0->scale * pap0->envelope(t);
            out += tmp;
        }
        return out;
    }

    // Shortest / longest quasi-period of the AP part (2*pi / freq extremes).
    double shortest_period() const {
        double wmax = 0.0;
        for (const auto& t : ap.terms) wmax = std::max(wmax, std::abs(t.freq));
        if (wmax == 0.0) throw std::invalid_argument("signal has no oscillating AP term");
        return 2.0 * std::numbers::pi / wmax;
    }
    double longest_period() const {
        double wmin = std::numeric_limits<double>::infinity();
        for (const auto& t : ap.terms)
            if (t.freq != 0.0) wmin = std::min(wmin, std::abs(t.freq));
        if (!std::isfinite(wmin)) throw std::invalid_argument("signal has no oscillating AP term");
        return 2.0 * std::numbers::pi / wmin;
    }
};

// alpha*s1 + beta*s2 with the AP term lists merged; at most one PAP0 part.
template <class F>
PapSignal<F> linear_combination(double alpha, const PapSignal<F>& s1, double beta,
                                const PapSignal<F>& s2) {
    if (!s1.domain.compatible_with(s2.domain))
        throw SizeMismatch("linear_combination: domain mismatch");
    if (s1.pap0 && s2.pap0)
        throw std::invalid_argument("linear_combination: at most one PAP0 part supported");
    PapSignal<F> out(s1.domain);
    out.ap = s1.ap;
    for (auto& t : out.ap.terms) t.amp *= alpha;
    for (auto t : s2.ap.terms) {
        t.amp *= beta;
        out.ap.terms.push_back(std::move(t));
    }
    if (s1.pap0) {
        out.pap0 = s1.pap0;
        out.pap0->scale *= alpha;
    } else if (s2.pap0) {
        out.pap0 = s2.pap0;
        out.pap0->scale *= beta;
    }
    return out;
}

namespace detail {

// Cached GL grids of the AP profiles; norms of scalar combinations of the
// terms then cost one pass over the quadrature grid.
template <class F>
struct ApGridCache {
    const BoxDomain& domain;
    std::vector<std::vector<std::vector<double>>> grids;  // [term][component][grid]
    const ApPart<F>& ap;

    explicit ApGridCache(const PapSignal<F>& s) : domain(s.domain), ap(s.ap) {
        for (const auto& term : s.ap.terms) grids.push_back(FieldTraits<F>::gl_grids(term.profile));
    }

    // || sum_m c_m * profile_m ||_p with scalar weights c.
    double combo_norm(const std::vector<double>& c, double p) const {
        if (grids.empty()) return 0.0;
        const std::size_t ncomp = grids[0].size(), ng = grids[0][0].size();
        std::vector<std::vector<double>> acc(ncomp, std::vector<double>(ng, 0.0));
        for (std::size_t m = 0; m < grids.size(); ++m) {
            if (c[m] == 0.0) continue;
            for (std::size_t j = 0; j < ncomp; ++j)
                for (std::size_t i = 0; i < ng; ++i) acc[j][i] += c[m] * grids[m][j][i];
        }
        return lp_norm_from_gl(domain, acc, p);
    }

    // ||f(t + T) - f(t)||_p of the AP part.
    double shift_diff_norm(double t, double T, double p) const {
        std::vector<double> c(ap.terms.size());
        for (std::size_t m = 0; m < c.size(); ++m) {
            const auto& tm = ap.terms[m];
            c[m] = tm.amp * (std::sin(tm.freq * (t + T) + tm.phase) -
                             std::sin(tm.freq * t + tm.phase));
        }
        return combo_norm(c, p);
    }

    double norm_at(double t, double p) const {
        std::vector<double> c(ap.terms.size());
        for (std::size_t m = 0; m < c.size(); ++m) {
            const auto& tm = ap.terms[m];
            c[m] = tm.amp * std::sin(tm.freq * t + tm.phase);
        }
        return combo_norm(c, p);
    }
};

}  // namespace detail

struct ApSearchParams {
    double norm_p = std::numeric_limits<double>::infinity();
    int samples_per_period = 64;  // grid density per shortest quasi-period
    double span_periods = 6.0;    // sup is scanned over this many longest periods
};

// Grid-estimated sup_t ||f(t+T) - f(t)||_p of the AP part of `s`.
template <class F>
double ap_shift_sup(const PapSignal<F>& s, double T, const ApSearchParams& prm = {}) {
    detail::ApGridCache<F> cache(s);
    const double step = s.shortest_period() / prm.samples_per_period;
    const double span = prm.span_periods * s.longest_period();
    double sup = 0.0;
    for (double t = 0.0; t <= span; t += step)
        sup = std::max(sup, cache.shift_diff_norm(t, T, prm.norm_p));
    return sup;
}

// Scan the window [window_lo, window_lo + window_len] for an eps-almost
// period of the AP part (the PAP0 part is excluded from the sup test).
// Returns the candidate with the smallest grid-estimated sup, or nullopt.
template <class F>
std::optional<double> almost_period_search(const PapSignal<F>& s, double eps, double window_lo,
                                           double window_len, const ApSearchParams& prm = {}) {
    if (!(eps > 0.0)) throw std::invalid_argument("almost_period_search: eps > 0 required");
    if (!(window_len > 0.0)) throw std::invalid_argument("almost_period_search: empty window");
    detail::ApGridCache<F> cache(s);
    const double step = s.shortest_period() / prm.samples_per_period;
    const double span = prm.span_periods * s.longest_period();
    // Cheap per-term sup bound: sum_m |2 amp_m sin(freq_m T / 2)| * ||g_m||.
    std::vector<double> pnorm;
    for (const auto& term : s.ap.terms)
        pnorm.push_back(lp_norm(term.profile, prm.norm_p));

    // cap: scanning stops early once the sup provably exceeds it (such a
    // candidate cannot become the new best).
    auto sup_at = [&](double T, double cap) {
        double upper = 0.0;
        for (std::size_t m = 0; m < s.ap.terms.size(); ++m)
            upper += std::abs(2.0 * s.ap.terms[m].amp *
                              std::sin(0.5 * s.ap.terms[m].freq * T)) * pnorm[m];
        if (upper < 1e-15 || upper <= 0.25 * cap) return upper;
        double sup = 0.0;
        for (double t = 0.0; t <= span; t += step) {
            sup = std::max(sup, cache.shift_diff_norm(t, T, prm.norm_p));
            if (sup >= cap) break;
        }
        return sup;
    };

    double best_sup = std::numeric_limits<double>::infinity();
    double best_T = 0.0;
    for (double T = window_lo; T <= window_lo + window_len + 1e-12; T += step) {
        const double sup = sup_at(T, best_sup);
        if (sup < best_sup) {
            best_sup = sup;
            best_T = T;
        }
    }
    // Local refinement around the best coarse candidate (sup(T) is smooth in
    // T); exact periods are recovered to roundoff this way.
    double h = step;
    const double lo = window_lo, hi = window_lo + window_len;
    for (int it = 0; it < 60 && h > 1e-13 * (1.0 + std::abs(best_T)); ++it) {
        h *= 0.5;
        for (double Tc : {best_T - h, best_T + h}) {
            if (Tc < lo || Tc > hi) continue;
            const double sup = sup_at(Tc, best_sup);
            if (sup < best_sup) {
                best_sup = sup;
                best_T = Tc;
            }
        }
    }
    if (best_sup < eps) return best_T;
    return std::nullopt;
}

namespace detail {

// Norm evaluations ||s(t)||_p with all spatial profiles cached on the
// quadrature grid; one evaluation costs a single pass over that grid.
template <class F>
struct SignalNormCache {
    const PapSignal<F>& s;
    std::vector<std::vector<std::vector<double>>> ap_grids;
    std::vector<std::vector<double>> p0_grid;

    explicit SignalNormCache(const PapSignal<F>& sig) : s(sig) {
        for (const auto& term : s.ap.terms)
            ap_grids.push_back(FieldTraits<F>::gl_grids(term.profile));
        if (s.pap0) {
            if (s.pap0->kind == EnvelopeKind::Tabulated)
                throw std::logic_error("cannot evaluate a tabulated PAP0 part");
            p0_grid = FieldTraits<F>::gl_grids(*s.pap0->profile);
        }
    }

    double norm_at(double t, double p) const {
        std::size_t ncomp = 0, ng = 0;
        if (!ap_grids.empty()) {
            ncomp = ap_grids[0].size();
            ng = ap_grids[0][0].size();
        } else if (!p0_grid.empty()) {
            ncomp = p0_grid.size();
            ng = p0_grid[0].size();
        } else {
            return 0.0;
        }
        std::vector<std::vector<double>> acc(ncomp, std::vector<double>(ng, 0.0));
        for (std::size_t m = 0; m < ap_grids.size(); ++m) {
            const auto& tm = s.ap.terms[m];
            const double c = tm.amp * std::sin(tm.freq * t + tm.phase);
            if (c == 0.0) continue;
            for (std::size_t j = 0; j < ncomp; ++j)
                for (std::size_t i = 0; i < ng; ++i) acc[j][i] += c * ap_grids[m][j][i];
        }
        if (!p0_grid.empty()) {
            const double e = s.pap0->scale * s.pap0->envelope(t);
            for (std::size_t j = 0; j < ncomp; ++j)
                for (std::size_t i = 0; i < ng; ++i) acc[j][i] += e * p0_grid[j][i];
        }
        return lp_norm_from_gl(s.domain, acc, p);
    }
};

}  // namespace detail

// (1/2L) int_{-L}^{L} || s(t) ||_p dt by adaptive quadrature.  The window is
// pre-split into panels no wider than a third of the shortest quasi-period so
// the adaptive rule cannot alias an oscillating norm to zero.
template <class F>
double ergodic_mean(const PapSignal<F>& s, double L, double p, double tol = 1e-9) {
    if (!(L > 0.0)) throw std::invalid_argument("ergodic_mean: L > 0 required");
    detail::SignalNormCache<F> cache(s);
    auto norm_at = [&](double t) { return cache.norm_at(t, p); };
    double panel = L / 8.0;
    for (const auto& term : s.ap.terms)
        if (term.freq != 0.0)
            panel = std::min(panel, (2.0 * std::numbers::pi / std::abs(term.freq)) / 3.0);
    if (s.pap0) panel = std::min(panel, 1.0 / (4.0 * s.pap0->rate));
    const int n_panels = std::max(1, static_cast<int>(std::ceil(L / panel)));
    double integral = 0.0;
    for (int half = 0; half < 2; ++half) {
        const double sign = half == 0 ? -1.0 : 1.0;
        for (int i = 0; i < n_panels; ++i) {
            const double a = sign * L * i / n_panels, b = sign * L * (i + 1) / n_panels;
            integral += std::abs(
                adaptive_simpson(norm_at, std::min(a, b), std::max(a, b), 0.5 * tol * L / n_panels));
        }
    }
    return integral / (2.0 * L);
}

// Grid-estimated sup_t ||s(t)||_p over several quasi-periods around t = 0
// (where the PAP0 envelope peaks).  A signal without oscillating AP content
// is scanned over [-span, span] with span from the PAP0 decay scale.
template <class F>
double signal_sup_norm(const PapSignal<F>& s, double p, const ApSearchParams& prm = {}) {
    if (s.ap.terms.empty() && !s.pap0) return 0.0;
    detail::SignalNormCache<F> cache(s);
    double span, step;
    bool oscillating = false;
    for (const auto& t : s.ap.terms) oscillating |= (t.freq != 0.0);
    if (oscillating) {
        span = prm.span_periods * s.longest_period();
        step = s.shortest_period() / prm.samples_per_period;
    } else {
        span = s.pap0 ? 10.0 / s.pap0->rate : 1.0;
        step = span / 512;
    }
    double sup = 0.0;
    for (double t = -span; t <= span; t += step) sup = std::max(sup, cache.norm_at(t, p));
    return sup;
}

// Trapezoid ergodic mean of a tabulated norm trace over [-L, L].
double ergodic_mean_table(const std::vector<double>& times, const std::vector<double>& norms,
                          double L);

// Ergodic mean of a trajectory's norm over [-L, L] (grid must cover it).
template <class F>
double ergodic_mean(const Trajectory<F>& traj, double L, double p) {
    std::vector<double> times(traj.steps());
    for (int i = 0; i < traj.steps(); ++i) times[i] = traj.time(i);
    return ergodic_mean_table(times, traj.norms(p), L);
}

// Pointwise difference trajectory - candidate, wrapped as a tabulated PAP0
// candidate (norm trace); test its vanishing mean with ergodic_mean_table.
template <class F>
Pap0Part<F> pap0_residual(const Trajectory<F>& traj, const Trajectory<F>& ap_candidate, double p) {
    if (!traj.same_grid(ap_candidate)) throw GridMismatch("pap0_residual: time grids differ");
    Pap0Part<F> out;
    out.kind = EnvelopeKind::Tabulated;
    out.table_t.resize(traj.steps());
    out.table_norm.resize(traj.steps());
    for (int i = 0; i < traj.steps(); ++i) {
        out.table_t[i] = traj.time(i);
        F diff = traj.values[i];
        diff -= ap_candidate.values[i];
        out.table_norm[i] = lp_norm(diff, p);
    }
    return out;
}

template <class F>
Pap0Part<F> pap0_residual(const Trajectory<F>& traj, const PapSignal<F>& ap_candidate, double p) {
    Trajectory<F> cand;
    cand.t0 = traj.t0;
    cand.dt = traj.dt;
    cand.values.reserve(traj.steps());
    for (int i = 0; i < traj.steps(); ++i) cand.values.push_back(ap_candidate.sample(traj.time(i)));
    return pap0_residual(traj, cand, p);
}

// Signal sampled on a uniform grid.
template <class F>
Trajectory<F> sample_signal(const PapSignal<F>& s, double t0, double dt, int steps) {
    Trajectory<F> out;
    out.t0 = t0;
    out.dt = dt;
    out.values.reserve(steps);
    for (int i = 0; i < steps; ++i) out.values.push_back(s.sample(t0 + i * dt));
    return out;
}

}  // namespace kspap
