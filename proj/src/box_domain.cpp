#include "kspap/box_domain.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kspap/errors.hpp"

namespace kspap {

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
        x[i] = xm - xl * z;
        x[n - 1 - i] = xm + xl * z;
        w[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

std::vector<double> contract_axis(const Mat& m, const std::vector<double>& x,
                                  std::vector<int>& ext, int ax) {
    const int nin = ext[ax];
    if (nin != m.cols) throw SizeMismatch("contract_axis: extent does not match matrix");
    std::size_t pre = 1, post = 1;
    for (int j = 0; j < ax; ++j) pre *= ext[j];
    for (std::size_t j = ax + 1; j < ext.size(); ++j) post *= ext[j];
    std::vector<double> y(pre * m.rows * post, 0.0);
    for (std::size_t p = 0; p < pre; ++p) {
        const double* xs = x.data() + p * nin * post;
        double* ys = y.data() + p * m.rows * post;
        for (int r = 0; r < m.rows; ++r) {
            const double* mr = m.a.data() + static_cast<std::size_t>(r) * m.cols;
            double* yr = ys + static_cast<std::size_t>(r) * post;
            for (int c = 0; c < nin; ++c) {
                const double mc = mr[c];
                if (mc == 0.0) continue;
                const double* xc = xs + static_cast<std::size_t>(c) * post;
                for (std::size_t q = 0; q < post; ++q) yr[q] += mc * xc[q];
            }
        }
    }
    ext[ax] = m.rows;
    return y;
}

namespace {

// Per-axis matrices for one basis family on a midpoint grid of size M:
// eval (M x (N+1)) and the exact discrete-orthogonality inverse ((N+1) x M).
void midpoint_matrices(double L, int N, int M, bool sine, Mat& eval, Mat& fwd) {
    eval = Mat(M, N + 1);
    fwd = Mat(N + 1, M);
    const double h = L / M;
    for (int k = 0; k <= N; ++k) {
        double nrm;
        if (sine)
            nrm = (k == 0) ? 0.0 : std::sqrt(2.0 / L);
        else
            nrm = (k == 0) ? std::sqrt(1.0 / L) : std::sqrt(2.0 / L);
        for (int m = 0; m < M; ++m) {
            const double arg = k * std::numbers::pi * (m + 0.5) / M;
            const double b = nrm * (sine ? std::sin(arg) : std::cos(arg));
            eval(m, k) = b;
            fwd(k, m) = b * h;
        }
    }
}

void node_matrices(double L, int N, const std::vector<double>& nodes, bool sine, Mat& eval) {
    const int M = static_cast<int>(nodes.size());
    eval = Mat(M, N + 1);
    for (int k = 0; k <= N; ++k) {
        double nrm;
        if (sine)
            nrm = (k == 0) ? 0.0 : std::sqrt(2.0 / L);
        else
            nrm = (k == 0) ? std::sqrt(1.0 / L) : std::sqrt(2.0 / L);
        for (int m = 0; m < M; ++m) {
            const double arg = k * std::numbers::pi * nodes[m] / L;
            eval(m, k) = nrm * (sine ? std::sin(arg) : std::cos(arg));
        }
    }
}

}  // namespace

BoxDomain::BoxDomain(std::vector<double> side_lengths, int modes_per_axis,
                     int quadrature_points_per_axis) {
    auto d = std::make_shared<Data>();
    d->dim = static_cast<int>(side_lengths.size());
    if (d->dim < 1) throw std::invalid_argument("BoxDomain: dim >= 1 required");
    for (double L : side_lengths)
        if (!(L > 0.0)) throw std::invalid_argument("BoxDomain: side lengths must be positive");
    if (modes_per_axis < 1) throw std::invalid_argument("BoxDomain: modes_per_axis >= 1 required");
    d->modes = modes_per_axis;
    d->quad = quadrature_points_per_axis > 0 ? quadrature_points_per_axis : 2 * modes_per_axis;
    if (d->quad < 2 * d->modes)
        throw std::invalid_argument("BoxDomain: quadrature_points_per_axis must be >= 2*modes");
    d->prod = 2 * d->modes + 2;
    d->sides = std::move(side_lengths);
    for (double L : d->sides) d->volume *= L;

    const int Np1 = d->modes + 1;
    d->coeff_count = 1;
    d->grid_count = 1;
    for (int j = 0; j < d->dim; ++j) {
        d->coeff_count *= Np1;
        d->grid_count *= d->quad;
    }
    d->cstride.assign(d->dim, 1);
    for (int j = d->dim - 2; j >= 0; --j) d->cstride[j] = d->cstride[j + 1] * Np1;

    d->lam.assign(d->coeff_count, 0.0);
    d->dfac.assign(d->dim, std::vector<double>(d->coeff_count, 0.0));
    d->kmode.assign(d->dim, std::vector<int>(d->coeff_count, 0));
    d->lambda1 = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < d->coeff_count; ++f) {
        std::size_t rem = f;
        double lam = 0.0;
        for (int j = 0; j < d->dim; ++j) {
            const int kj = static_cast<int>(rem / d->cstride[j]);
            rem %= d->cstride[j];
            const double dj = kj * std::numbers::pi / d->sides[j];
            d->kmode[j][f] = kj;
            d->dfac[j][f] = dj;
            lam += dj * dj;
        }
        d->lam[f] = lam;
        if (lam > 0.0 && lam < d->lambda1) d->lambda1 = lam;
    }

    d->cos_eval.resize(d->dim);
    d->cos_fwd.resize(d->dim);
    d->sin_eval.resize(d->dim);
    d->sin_fwd.resize(d->dim);
    d->cos_eval_p.resize(d->dim);
    d->cos_fwd_p.resize(d->dim);
    d->sin_eval_p.resize(d->dim);
    d->sin_fwd_p.resize(d->dim);
    d->cos_eval_gl.resize(d->dim);
    d->sin_eval_gl.resize(d->dim);
    d->gl_x.resize(d->dim);
    d->gl_w.resize(d->dim);
    for (int j = 0; j < d->dim; ++j) {
        midpoint_matrices(d->sides[j], d->modes, d->quad, false, d->cos_eval[j], d->cos_fwd[j]);
        midpoint_matrices(d->sides[j], d->modes, d->quad, true, d->sin_eval[j], d->sin_fwd[j]);
        midpoint_matrices(d->sides[j], d->modes, d->prod, false, d->cos_eval_p[j], d->cos_fwd_p[j]);
        midpoint_matrices(d->sides[j], d->modes, d->prod, true, d->sin_eval_p[j], d->sin_fwd_p[j]);
        gauss_legendre(d->quad, 0.0, d->sides[j], d->gl_x[j], d->gl_w[j]);
        node_matrices(d->sides[j], d->modes, d->gl_x[j], false, d->cos_eval_gl[j]);
        node_matrices(d->sides[j], d->modes, d->gl_x[j], true, d->sin_eval_gl[j]);
    }

    d->gl_w_flat.assign(d->grid_count, 1.0);
    std::vector<std::size_t> gstride(d->dim, 1);
    for (int j = d->dim - 2; j >= 0; --j) gstride[j] = gstride[j + 1] * d->quad;
    for (std::size_t g = 0; g < d->grid_count; ++g) {
        std::size_t rem = g;
        double w = 1.0;
        for (int j = 0; j < d->dim; ++j) {
            const int mj = static_cast<int>(rem / gstride[j]);
            rem %= gstride[j];
            w *= d->gl_w[j][mj];
        }
        d->gl_w_flat[g] = w;
    }

    d_ = std::move(d);
}

double BoxDomain::eigenvalue(const std::vector<int>& k) const {
    if (static_cast<int>(k.size()) != dim())
        throw SizeMismatch("eigenvalue: multi-index dimension mismatch");
    double lam = 0.0;
    for (int j = 0; j < dim(); ++j) {
        const double dj = k[j] * std::numbers::pi / side(j);
        lam += dj * dj;
    }
    return lam;
}

std::size_t BoxDomain::flat_index(const std::vector<int>& k) const {
    if (static_cast<int>(k.size()) != dim())
        throw SizeMismatch("flat_index: multi-index dimension mismatch");
    std::size_t f = 0;
    for (int j = 0; j < dim(); ++j) {
        if (k[j] < 0 || k[j] > modes())
            throw std::out_of_range("flat_index: mode outside cutoff");
        f += static_cast<std::size_t>(k[j]) * d_->cstride[j];
    }
    return f;
}

std::vector<int> BoxDomain::multi_index(std::size_t flat) const {
    std::vector<int> k(dim());
    for (int j = 0; j < dim(); ++j) k[j] = d_->kmode[j][flat];
    return k;
}

int BoxDomain::mode_on_axis(std::size_t flat, int axis) const {
    return d_->kmode[axis][flat];
}

double BoxDomain::deriv_factor(std::size_t flat, int axis) const {
    return d_->dfac[axis][flat];
}

std::vector<double> BoxDomain::grid_nodes(int axis) const {
    std::vector<double> x(d_->quad);
    for (int m = 0; m < d_->quad; ++m) x[m] = side(axis) * (m + 0.5) / d_->quad;
    return x;
}

bool BoxDomain::compatible_with(const BoxDomain& other) const {
    if (d_ == other.d_) return true;
    return dim() == other.dim() && modes() == other.modes() && quad_points() == other.quad_points() &&
           sides() == other.sides();
}

double first_eigenvalue(const BoxDomain& domain) { return domain.first_eigenvalue(); }

}  // namespace kspap
