#include "kspap/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "kspap/errors.hpp"

namespace kspap {

SpectralField heat(const SpectralField& f, double t) {
    if (t < 0.0) throw std::invalid_argument("heat: t >= 0 required");
    SpectralField out = f;
    auto& c = out.coeffs();
    const BoxDomain& d = f.domain();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(-d.eigenvalue_flat(i) * t);
    return out;
}

VectorSpectralField heat(const VectorSpectralField& f, double t) {
    if (t < 0.0) throw std::invalid_argument("heat: t >= 0 required");
    VectorSpectralField out = f;
    const BoxDomain& d = f.domain();
    for (int j = 0; j < out.components(); ++j) {
        auto& c = out.component(j);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(-d.eigenvalue_flat(i) * t);
    }
    return out;
}

SpectralField div_heat(const VectorSpectralField& f, double t) {
    if (t < 0.0) throw std::invalid_argument("div_heat: t >= 0 required");
    const BoxDomain& d = f.domain();
    SpectralField out(d);
    auto& c = out.coeffs();
    for (int j = 0; j < f.components(); ++j) {
        const auto& cj = f.component(j);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += d.deriv_factor(i, j) * cj[i];
    }
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(-d.eigenvalue_flat(i) * t);
    return out;
}

SpectralField resolvent(const SpectralField& f, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("resolvent: gamma >= 0 required");
    const BoxDomain& d = f.domain();
    SpectralField out = f;
    auto& c = out.coeffs();
    if (gamma == 0.0) {
        if (std::abs(c[0]) > 1e-13 * (1.0 + out.l2_parseval())) throw NotInvertibleOnConstants();
        c[0] = 0.0;
    }
    for (std::size_t i = (gamma == 0.0 ? 1 : 0); i < c.size(); ++i)
        c[i] /= d.eigenvalue_flat(i) + gamma;
    return out;
}

VectorSpectralField lj(const SpectralField& f, int axis, double gamma) {
    const BoxDomain& d = f.domain();
    if (axis < 0 || axis >= d.dim()) throw std::invalid_argument("lj: axis out of range");
    SpectralField v = resolvent(f, gamma);
    VectorSpectralField out(d);
    auto& c = out.component(axis);
    const auto& a = v.coeffs();
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = -d.deriv_factor(i, axis) * a[i];
    return out;
}

double kgamma(double gamma, int n) {
    if (gamma < 0.0) throw std::invalid_argument("kgamma: gamma >= 0 required");
    if (n < 2) throw std::invalid_argument("kgamma: n >= 2 required");
    if (gamma == 0.0) return 1.0;
    return std::pow(gamma, -(n - 1.0));
}

}  // namespace kspap
