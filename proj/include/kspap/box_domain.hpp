#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace kspap {

// Dense row-major matrix, just enough for the tensor basis transforms.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
    double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// Contract axis `ax` of the flat row-major array `x` (extents `ext`) with `m`;
// ext[ax] is replaced by m.rows.
std::vector<double> contract_axis(const Mat& m, const std::vector<double>& x,
                                  std::vector<int>& ext, int ax);

// Tensor-product box [0,L_1] x ... x [0,L_n] with the Neumann cosine
// eigenbasis truncated at `modes_per_axis` modes per axis.  All transform
// matrices are precomputed once; the object is immutable and cheap to copy.
//
// Three per-axis node families are kept:
//   * midpoint nodes x_m = L(m+1/2)/M      -- discrete-orthogonal cosine/sine
//     transform grid (exact round trip for band-limited fields),
//   * an oversampled midpoint grid of size 2N+2 used internally to evaluate
//     quadratic products without aliasing,
//   * Gauss-Legendre nodes/weights of size M  -- L^p quadrature.
class BoxDomain {
  public:
    BoxDomain(std::vector<double> side_lengths, int modes_per_axis,
              int quadrature_points_per_axis = 0);  // 0 -> 2 * modes_per_axis

    int dim() const { return d_->dim; }
    int modes() const { return d_->modes; }
    int quad_points() const { return d_->quad; }
    double side(int axis) const { return d_->sides[axis]; }
    const std::vector<double>& sides() const { return d_->sides; }
    double volume() const { return d_->volume; }

    std::size_t coeff_count() const { return d_->coeff_count; }
    std::size_t grid_count() const { return d_->grid_count; }

    // lambda_k = sum_j (k_j pi / L_j)^2, exact closed form.
    double eigenvalue(const std::vector<int>& k) const;
    double eigenvalue_flat(std::size_t flat) const { return d_->lam[flat]; }
    const std::vector<double>& eigenvalues() const { return d_->lam; }
    double first_eigenvalue() const { return d_->lambda1; }

    // Multi-index <-> flat coefficient index (row-major, N+1 per axis).
    std::size_t flat_index(const std::vector<int>& k) const;
    std::vector<int> multi_index(std::size_t flat) const;
    // Component of the multi-index along `axis` for a flat index.
    int mode_on_axis(std::size_t flat, int axis) const;

    // d_j(k) = k_j pi / L_j (gradient/divergence factor).
    double deriv_factor(std::size_t flat, int axis) const;

    // Midpoint transform grid coordinates along one axis.
    std::vector<double> grid_nodes(int axis) const;
    // Gauss-Legendre nodes/weights along one axis.
    const std::vector<double>& gl_nodes(int axis) const { return d_->gl_x[axis]; }
    const std::vector<double>& gl_weights(int axis) const { return d_->gl_w[axis]; }
    // Flattened tensor-product GL weights (size grid of M^n).
    const std::vector<double>& gl_weights_flat() const { return d_->gl_w_flat; }

    bool same_as(const BoxDomain& other) const { return d_ == other.d_; }
    bool compatible_with(const BoxDomain& other) const;

    // Per-axis basis matrices (shared by the field transforms).
    const Mat& cos_eval(int axis) const { return d_->cos_eval[axis]; }    // M x (N+1)
    const Mat& cos_fwd(int axis) const { return d_->cos_fwd[axis]; }      // (N+1) x M
    const Mat& sin_eval(int axis) const { return d_->sin_eval[axis]; }
    const Mat& sin_fwd(int axis) const { return d_->sin_fwd[axis]; }
    const Mat& cos_eval_prod(int axis) const { return d_->cos_eval_p[axis]; }
    const Mat& cos_fwd_prod(int axis) const { return d_->cos_fwd_p[axis]; }
    const Mat& sin_eval_prod(int axis) const { return d_->sin_eval_p[axis]; }
    const Mat& sin_fwd_prod(int axis) const { return d_->sin_fwd_p[axis]; }
    const Mat& cos_eval_gl(int axis) const { return d_->cos_eval_gl[axis]; }
    const Mat& sin_eval_gl(int axis) const { return d_->sin_eval_gl[axis]; }
    int prod_points() const { return d_->prod; }

  private:
    struct Data {
        int dim = 0;
        int modes = 0;
        int quad = 0;
        int prod = 0;
        std::vector<double> sides;
        double volume = 1.0;
        double lambda1 = 0.0;
        std::size_t coeff_count = 0;
        std::size_t grid_count = 0;
        std::vector<double> lam;                    // per flat coefficient index
        std::vector<std::vector<double>> dfac;      // [axis][flat]
        std::vector<std::vector<int>> kmode;        // [axis][flat]
        std::vector<std::size_t> cstride;
        std::vector<Mat> cos_eval, cos_fwd, sin_eval, sin_fwd;
        std::vector<Mat> cos_eval_p, cos_fwd_p, sin_eval_p, sin_fwd_p;
        std::vector<Mat> cos_eval_gl, sin_eval_gl;
        std::vector<std::vector<double>> gl_x, gl_w;
        std::vector<double> gl_w_flat;
    };
    std::shared_ptr<const Data> d_;
};

// First nonzero Neumann eigenvalue, exact from the closed form.
double first_eigenvalue(const BoxDomain& domain);

// Gauss-Legendre rule on [a,b] (Newton iteration on Legendre polynomials).
void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w);

}  // namespace kspap
