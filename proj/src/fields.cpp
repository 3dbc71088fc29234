#include "kspap/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "kspap/errors.hpp"

namespace kspap {

namespace {

void check_same(const BoxDomain& a, const BoxDomain& b, const char* what) {
    if (!a.compatible_with(b)) throw SizeMismatch(std::string(what) + ": domain mismatch");
}

// Apply per-axis matrices (sine matrix on `sin_axis` if >= 0) to a flat array.
std::vector<double> tensor_apply(const BoxDomain& dom, const std::vector<double>& x,
                                 int in_ext, int out_ext,
                                 const Mat& (BoxDomain::*cos_mat)(int) const,
                                 const Mat& (BoxDomain::*sin_mat)(int) const, int sin_axis) {
    std::vector<int> ext(dom.dim(), in_ext);
    std::vector<double> y = x;
    for (int ax = 0; ax < dom.dim(); ++ax) {
        const Mat& m = (ax == sin_axis) ? (dom.*sin_mat)(ax) : (dom.*cos_mat)(ax);
        y = contract_axis(m, y, ext, ax);
    }
    (void)out_ext;
    return y;
}

}  // namespace

SpectralField::SpectralField(BoxDomain domain)
    : domain_(std::move(domain)), c_(domain_.coeff_count(), 0.0) {}

SpectralField::SpectralField(BoxDomain domain, std::vector<double> coeffs)
    : domain_(std::move(domain)), c_(std::move(coeffs)) {
    if (c_.size() != domain_.coeff_count())
        throw SizeMismatch("SpectralField: coefficient array size mismatch");
}

double SpectralField::mean() const { return c_[0] / std::sqrt(domain_.volume()); }

double SpectralField::l2_parseval() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return std::sqrt(s);
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    check_same(domain_, o.domain_, "field +=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    check_same(domain_, o.domain_, "field -=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

VectorSpectralField::VectorSpectralField(BoxDomain domain)
    : domain_(std::move(domain)),
      comps_(domain_.dim(), std::vector<double>(domain_.coeff_count(), 0.0)) {}

VectorSpectralField::VectorSpectralField(BoxDomain domain, std::vector<std::vector<double>> comps)
    : domain_(std::move(domain)), comps_(std::move(comps)) {
    if (static_cast<int>(comps_.size()) != domain_.dim())
        throw SizeMismatch("VectorSpectralField: component count mismatch");
    for (const auto& c : comps_)
        if (c.size() != domain_.coeff_count())
            throw SizeMismatch("VectorSpectralField: coefficient array size mismatch");
    mask_zero_modes();
}

void VectorSpectralField::mask_zero_modes() {
    for (int j = 0; j < components(); ++j) {
        auto& c = comps_[j];
        for (std::size_t f = 0; f < c.size(); ++f)
            if (domain_.mode_on_axis(f, j) == 0) c[f] = 0.0;
    }
}

VectorSpectralField& VectorSpectralField::operator+=(const VectorSpectralField& o) {
    check_same(domain_, o.domain_, "vfield +=");
    for (int j = 0; j < components(); ++j)
        for (std::size_t i = 0; i < comps_[j].size(); ++i) comps_[j][i] += o.comps_[j][i];
    return *this;
}

VectorSpectralField& VectorSpectralField::operator-=(const VectorSpectralField& o) {
    check_same(domain_, o.domain_, "vfield -=");
    for (int j = 0; j < components(); ++j)
        for (std::size_t i = 0; i < comps_[j].size(); ++i) comps_[j][i] -= o.comps_[j][i];
    return *this;
}

VectorSpectralField& VectorSpectralField::operator*=(double s) {
    for (auto& c : comps_)
        for (double& v : c) v *= s;
    return *this;
}

std::vector<double> to_grid(const SpectralField& f) {
    const BoxDomain& d = f.domain();
    return tensor_apply(d, f.coeffs(), d.modes() + 1, d.quad_points(), &BoxDomain::cos_eval,
                        &BoxDomain::sin_eval, -1);
}

SpectralField to_coefficients(const BoxDomain& domain, const std::vector<double>& grid_values) {
    if (grid_values.size() != domain.grid_count())
        throw SizeMismatch("to_coefficients: grid size mismatch");
    auto c = tensor_apply(domain, grid_values, domain.quad_points(), domain.modes() + 1,
                          &BoxDomain::cos_fwd, &BoxDomain::sin_fwd, -1);
    return SpectralField(domain, std::move(c));
}

std::vector<double> component_to_grid(const VectorSpectralField& f, int axis) {
    const BoxDomain& d = f.domain();
    return tensor_apply(d, f.component(axis), d.modes() + 1, d.quad_points(), &BoxDomain::cos_eval,
                        &BoxDomain::sin_eval, axis);
}

namespace {

std::vector<double> eval_gl(const SpectralField& f) {
    const BoxDomain& d = f.domain();
    return tensor_apply(d, f.coeffs(), d.modes() + 1, d.quad_points(), &BoxDomain::cos_eval_gl,
                        &BoxDomain::sin_eval_gl, -1);
}

std::vector<double> eval_gl_component(const VectorSpectralField& f, int axis) {
    const BoxDomain& d = f.domain();
    return tensor_apply(d, f.component(axis), d.modes() + 1, d.quad_points(),
                        &BoxDomain::cos_eval_gl, &BoxDomain::sin_eval_gl, axis);
}

double lp_of_values(const BoxDomain& d, const std::vector<double>& vals, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : vals) m = std::max(m, std::abs(v));
        return m;
    }
    const auto& w = d.gl_weights_flat();
    double s = 0.0;
    if (p == 2.0) {
        for (std::size_t i = 0; i < vals.size(); ++i) s += w[i] * vals[i] * vals[i];
    } else {
        for (std::size_t i = 0; i < vals.size(); ++i) s += w[i] * std::pow(std::abs(vals[i]), p);
    }
    return std::pow(s, 1.0 / p);
}

}  // namespace

double lp_norm(const SpectralField& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p >= 1 required");
    return lp_of_values(f.domain(), eval_gl(f), p);
}

std::vector<double> gl_values(const SpectralField& f) { return eval_gl(f); }

std::vector<double> gl_component_values(const VectorSpectralField& f, int axis) {
    return eval_gl_component(f, axis);
}

double lp_norm_from_gl(const BoxDomain& d, const std::vector<std::vector<double>>& comps,
                       double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_from_gl: p >= 1 required");
    if (comps.size() == 1) return lp_of_values(d, comps[0], p);
    std::vector<double> len2(d.grid_count(), 0.0);
    for (const auto& c : comps)
        for (std::size_t i = 0; i < len2.size(); ++i) len2[i] += c[i] * c[i];
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : len2) m = std::max(m, v);
        return std::sqrt(m);
    }
    const auto& w = d.gl_weights_flat();
    double s = 0.0;
    for (std::size_t i = 0; i < len2.size(); ++i) s += w[i] * std::pow(len2[i], 0.5 * p);
    return std::pow(s, 1.0 / p);
}

double lp_norm(const VectorSpectralField& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p >= 1 required");
    const BoxDomain& d = f.domain();
    std::vector<double> len2(d.grid_count(), 0.0);
    for (int j = 0; j < f.components(); ++j) {
        auto vj = eval_gl_component(f, j);
        for (std::size_t i = 0; i < len2.size(); ++i) len2[i] += vj[i] * vj[i];
    }
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : len2) m = std::max(m, v);
        return std::sqrt(m);
    }
    const auto& w = d.gl_weights_flat();
    double s = 0.0;
    for (std::size_t i = 0; i < len2.size(); ++i) s += w[i] * std::pow(len2[i], 0.5 * p);
    return std::pow(s, 1.0 / p);
}

VectorSpectralField gradient(const SpectralField& f) {
    const BoxDomain& d = f.domain();
    VectorSpectralField g(d);
    const auto& a = f.coeffs();
    for (int j = 0; j < d.dim(); ++j) {
        auto& c = g.component(j);
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = -d.deriv_factor(i, j) * a[i];
    }
    return g;
}

SpectralField divergence(const VectorSpectralField& f) {
    const BoxDomain& d = f.domain();
    SpectralField out(d);
    auto& c = out.coeffs();
    for (int j = 0; j < d.dim(); ++j) {
        const auto& cj = f.component(j);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += d.deriv_factor(i, j) * cj[i];
    }
    return out;
}

std::vector<double> multiply_cos_sin(const SpectralField& a, const std::vector<double>& b_sin,
                                     int axis) {
    const BoxDomain& d = a.domain();
    auto ag = tensor_apply(d, a.coeffs(), d.modes() + 1, d.prod_points(),
                           &BoxDomain::cos_eval_prod, &BoxDomain::sin_eval_prod, -1);
    auto bg = tensor_apply(d, b_sin, d.modes() + 1, d.prod_points(), &BoxDomain::cos_eval_prod,
                           &BoxDomain::sin_eval_prod, axis);
    for (std::size_t i = 0; i < ag.size(); ++i) ag[i] *= bg[i];
    return tensor_apply(d, ag, d.prod_points(), d.modes() + 1, &BoxDomain::cos_fwd_prod,
                        &BoxDomain::sin_fwd_prod, axis);
}

VectorSpectralField multiply(const SpectralField& a, const VectorSpectralField& g) {
    check_same(a.domain(), g.domain(), "multiply");
    VectorSpectralField out(a.domain());
    for (int j = 0; j < g.components(); ++j)
        out.component(j) = multiply_cos_sin(a, g.component(j), j);
    out.mask_zero_modes();
    return out;
}

namespace {

// Normalization of one plain trig factor against the orthonormal basis.
double axis_norm_factor(const BoxDomain& d, int axis, int k, bool sine) {
    const double L = d.side(axis);
    if (sine) return 1.0 / std::sqrt(2.0 / L);
    return (k == 0) ? 1.0 / std::sqrt(1.0 / L) : 1.0 / std::sqrt(2.0 / L);
}

}  // namespace

SpectralField cosine_mode(const BoxDomain& domain, const std::vector<int>& k, double amp) {
    SpectralField f(domain);
    double c = amp;
    for (int j = 0; j < domain.dim(); ++j) c *= axis_norm_factor(domain, j, k[j], false);
    f.coeffs()[domain.flat_index(k)] = c;
    return f;
}

VectorSpectralField sine_mode(const BoxDomain& domain, int component, const std::vector<int>& k,
                              double amp) {
    if (component < 0 || component >= domain.dim())
        throw std::invalid_argument("sine_mode: component out of range");
    if (k[component] < 1) throw std::invalid_argument("sine_mode: sine mode must be >= 1");
    VectorSpectralField f(domain);
    double c = amp;
    for (int j = 0; j < domain.dim(); ++j)
        c *= axis_norm_factor(domain, j, k[j], j == component);
    f.component(component)[domain.flat_index(k)] = c;
    return f;
}

SpectralField random_field(const BoxDomain& domain, Rng& rng, bool mean_zero) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField f(domain);
    auto& c = f.coeffs();
    const double lam1 = domain.first_eigenvalue();
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double lam = std::max(domain.eigenvalue_flat(i), lam1);
        c[i] = gauss(rng) / std::sqrt(lam);
    }
    if (mean_zero) c[0] = 0.0;
    return f;
}

VectorSpectralField random_vector_field(const BoxDomain& domain, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorSpectralField f(domain);
    const double lam1 = domain.first_eigenvalue();
    for (int j = 0; j < domain.dim(); ++j) {
        auto& c = f.component(j);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double lam = std::max(domain.eigenvalue_flat(i), lam1);
            c[i] = gauss(rng) / std::sqrt(lam);
        }
    }
    f.mask_zero_modes();
    return f;
}

}  // namespace kspap
