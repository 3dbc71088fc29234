#pragma once

#include "kspap/fields.hpp"

namespace kspap {

// Neumann heat semigroup e^{t Delta}: coefficient-wise decay e^{-lambda_k t}.
// t = 0 is the identity; the mean mode is conserved exactly.
SpectralField heat(const SpectralField& f, double t);

// Semigroup applied component-wise to a vector field.
VectorSpectralField heat(const VectorSpectralField& f, double t);

// div(e^{t Delta} F): per-mode multiplier, exact, always mean-zero.
// t = 0 returns the plain divergence.
SpectralField div_heat(const VectorSpectralField& f, double t);

// (-Delta + gamma I)^{-1}.  gamma = 0 requires a mean-zero field
// (throws NotInvertibleOnConstants otherwise).
SpectralField resolvent(const SpectralField& f, double gamma);

// L_j = d_j (-Delta + gamma I)^{-1}; result is the axis-j (sine basis)
// component of a vector field, returned with the other components zero.
VectorSpectralField lj(const SpectralField& f, int axis, double gamma);

// k(0) = 1, k(gamma) = gamma^{-(n-1)} for gamma > 0.
double kgamma(double gamma, int n);

}  // namespace kspap
