#pragma once

#include <cstdint>
#include <vector>

#include "kspap/box_domain.hpp"
#include "kspap/rng.hpp"

namespace kspap {

// Scalar field stored as coefficients in the orthonormal tensor cosine
// (Neumann) eigenbasis, |k|_inf <= N.  Immutable by convention: operations
// return new values.
class SpectralField {
  public:
    explicit SpectralField(BoxDomain domain);
    SpectralField(BoxDomain domain, std::vector<double> coeffs);

    const BoxDomain& domain() const { return domain_; }
    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }

    double coeff(const std::vector<int>& k) const { return c_[domain_.flat_index(k)]; }
    void set_coeff(const std::vector<int>& k, double v) { c_[domain_.flat_index(k)] = v; }

    // Spatial mean; the k=0 coefficient equals mean * sqrt(volume).
    double mean() const;
    // L2 norm straight from the coefficients (Parseval, orthonormal basis).
    double l2_parseval() const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  private:
    BoxDomain domain_;
    std::vector<double> c_;
};

// Vector field whose j-th component uses the sine basis along axis j and the
// cosine basis along every other axis; divergence then lands exactly in the
// cosine basis with zero mean.  Component entries with k_j = 0 are kept at
// zero (the sine mode 0 is the zero function).
class VectorSpectralField {
  public:
    explicit VectorSpectralField(BoxDomain domain);
    VectorSpectralField(BoxDomain domain, std::vector<std::vector<double>> comps);

    const BoxDomain& domain() const { return domain_; }
    int components() const { return static_cast<int>(comps_.size()); }
    const std::vector<double>& component(int j) const { return comps_[j]; }
    std::vector<double>& component(int j) { return comps_[j]; }

    VectorSpectralField& operator+=(const VectorSpectralField& o);
    VectorSpectralField& operator-=(const VectorSpectralField& o);
    VectorSpectralField& operator*=(double s);
    friend VectorSpectralField operator+(VectorSpectralField a, const VectorSpectralField& b) { return a += b; }
    friend VectorSpectralField operator-(VectorSpectralField a, const VectorSpectralField& b) { return a -= b; }
    friend VectorSpectralField operator*(double s, VectorSpectralField a) { return a *= s; }

    // Zero out the (structurally zero) k_j = 0 entries of every component.
    void mask_zero_modes();

  private:
    BoxDomain domain_;
    std::vector<std::vector<double>> comps_;
};

// ---- transforms ------------------------------------------------------------

// Values on the midpoint transform grid (row-major, quad_points per axis).
std::vector<double> to_grid(const SpectralField& f);
// Exact inverse of to_grid for band-limited fields (discrete orthogonality).
SpectralField to_coefficients(const BoxDomain& domain, const std::vector<double>& grid_values);
// Component j evaluated on the midpoint grid.
std::vector<double> component_to_grid(const VectorSpectralField& f, int axis);

// ---- norms -----------------------------------------------------------------

// L^p norm by tensor Gauss-Legendre quadrature of |u|^p; p = infinity is the
// max over the quadrature grid.  Requires p >= 1.
double lp_norm(const SpectralField& f, double p);
// Vector version: L^p norm of the pointwise Euclidean length.
double lp_norm(const VectorSpectralField& f, double p);

// Values on the Gauss-Legendre quadrature grid; lets callers cache grids of
// fixed profiles and take norms of scalar combinations cheaply.
std::vector<double> gl_values(const SpectralField& f);
std::vector<double> gl_component_values(const VectorSpectralField& f, int axis);
// L^p norm of the Euclidean length across precomputed GL component arrays.
double lp_norm_from_gl(const BoxDomain& d, const std::vector<std::vector<double>>& comps,
                       double p);

// ---- calculus --------------------------------------------------------------

// Gradient: exact in spectral space, lands in the mixed sine/cosine bases.
VectorSpectralField gradient(const SpectralField& f);
// Divergence: exact, always mean-zero.
SpectralField divergence(const VectorSpectralField& f);

// Pointwise product of a cosine-basis scalar with the axis-j sine-basis
// component, projected back onto modes <= N.  Evaluated on the oversampled
// midpoint grid, which integrates the quadratic product exactly (no aliasing).
std::vector<double> multiply_cos_sin(const SpectralField& a, const std::vector<double>& b_sin,
                                     int axis);

// a * g for a scalar a (cosine basis) and vector g: per-component dealiased
// products.
VectorSpectralField multiply(const SpectralField& a, const VectorSpectralField& g);

// ---- mode builders -----------------------------------------------------------

// amp * prod_j cos(k_j pi x_j / L_j) (plain, unnormalized cosines).
SpectralField cosine_mode(const BoxDomain& domain, const std::vector<int>& k, double amp);
// Vector field whose `component` equals amp * sin(k_c pi x_c / L_c) *
// prod_{j != c} cos(k_j pi x_j / L_j); other components zero.
VectorSpectralField sine_mode(const BoxDomain& domain, int component, const std::vector<int>& k,
                              double amp);

// ---- random trial fields ----------------------------------------------------

// Coefficients i.i.d. normal with variance lambda_k^{-1} (the mean mode uses
// lambda_1), optionally with the mean mode zeroed.
SpectralField random_field(const BoxDomain& domain, Rng& rng, bool mean_zero);
VectorSpectralField random_vector_field(const BoxDomain& domain, Rng& rng);

}  // namespace kspap
