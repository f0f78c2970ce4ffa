#pragma once

#include <Eigen/Dense>
#include <memory>

#include "zs/potential.hpp"

namespace zs {

// Dimension constants used by the kernel machinery.  kappa is the
// fundamental-solution normalization actually used everywhere; c_paper =
// n(n-2)|B(0,1)| is retained for cross-checks only (kappa * c_paper = 1).
struct KernelConstant {
    int dim;
    double kappa;
    double c_paper;

    static KernelConstant for_dim(int n) {
        double cp = n * (n - 2.0) * unit_ball_volume(n);
        return {n, fundamental_solution_constant(n), cp};
    }
};

// Free-space kernel kappa_n / |x-y|^{n-2}.
double g0(const Vec& x, const Vec& y, int dim);

// Product Gauss-Legendre (polar) x uniform (azimuth) quadrature on S^2.
// Weights sum to 4 pi.  Exact for spherical polynomials with polar degree
// <= 2 n_polar - 1 and azimuthal mode <= n_azimuth - 1; the spectral kernel
// scheme truncates the Legendre expansion at legendre_exactness().
struct DirectionSet {
    std::vector<Vec> dirs;
    std::vector<double> weights;
    int n_polar = 0;
    int n_azimuth = 0;

    static DirectionSet product_rule(int n_polar, int n_azimuth);
    int legendre_exactness() const { return std::min(2 * n_polar - 2, n_azimuth - 2); }
    std::size_t size() const { return dirs.size(); }
};

enum class CloudKind {
    shells,  // radial shells x directions (n = 3)
    radial,  // exact angular average, operator restricted to radial functions
    tensor   // nodes of a tensor grid
};

// Kernel discretization on the cloud:
//   punctured: raw singular kernel; the cell containing the target is
//     replaced by the analytic integral of |x-z|^{-(n-2)} over an
//     equal-volume ball times the cell value.
//   spectral: Legendre expansion of the kernel truncated at the direction
//     rule's exactness degree; bounded entries, angular integrals of
//     low-degree data are then exact (shells clouds, n = 3).
enum class KernelScheme { punctured, spectral };

// Quadrature node cloud for the intermediate z-integrals.  Shell clouds
// reuse W's own radial grid as the shell set.
class Cloud {
public:
    static Cloud shells_from(const SampledFunction& W, const DirectionSet& ds);
    static Cloud radial_from(const SampledFunction& W);
    static Cloud tensor_from(const SampledFunction& W);

    CloudKind kind() const { return kind_; }
    int dim() const { return dim_; }
    std::size_t size() const { return weight_.size(); }
    const std::vector<double>& weights() const { return weight_; }
    const std::vector<double>& w_values() const { return wval_; }
    const std::vector<double>& radii() const { return radius_; }
    const std::vector<Vec>& points() const { return pts_; }
    const DirectionSet& directions() const { return dirs_; }
    std::size_t n_shells() const { return shell_r_.size(); }
    const std::vector<double>& shell_radii() const { return shell_r_; }
    std::size_t source_index(std::size_t node) const { return src_index_[node]; }
    std::size_t node_of(std::size_t shell, std::size_t dir) const { return shell * dirs_.size() + dir; }

    Vec point(std::size_t i) const;
    double ball_radius(std::size_t i) const;  // equal-volume ball radius of cell i
    // index of the cell containing x, or npos when x is outside the cloud
    std::size_t cell_of(const Vec& x) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    CloudKind kind_ = CloudKind::radial;
    int dim_ = 3;
    std::vector<Vec> pts_;
    std::vector<double> radius_;
    std::vector<double> weight_;
    std::vector<double> wval_;
    std::vector<std::size_t> src_index_;
    std::vector<double> shell_r_;
    DirectionSet dirs_;
};

// Truncated Neumann-series evaluator for the Green function of -Delta + W.
//
//   G_0(x,y) = kappa_n |x-y|^{-(n-2)},
//   G_j(x,y) = kappa_n int |x-z|^{-(n-2)} W(z) G_{j-1}(z,y) dz,
//   G = sum_{j <= J} (-1)^j G_j,  tail C^{J+1}/(1-C).
//
// The single-layer matrix over the cloud is assembled once and reused by
// every order; this is the dominant memory/performance surface.
class GreensEvaluator {
public:
    GreensEvaluator(Cloud cloud, KernelScheme scheme, double w_lorentz_norm, double series_tol);

    const Cloud& cloud() const { return cloud_; }
    KernelScheme scheme() const { return scheme_; }
    int dim() const { return cloud_.dim(); }
    double kappa() const { return kappa_; }
    double c_measured() const { return c_measured_; }
    double c_bound() const { return c_bound_; }  // 2^{n-1} kappa ||a|| ||W||
    int truncation_order() const { return order_; }
    double tail_bound() const { return tail_bound_; }
    double series_tol() const { return series_tol_; }

    // kernel value between cloud nodes (scheme-consistent, punctured diagonal)
    double node_kernel(std::size_t i, std::size_t k) const;
    // kernel from an arbitrary point to a cloud node (puncturing x's cell)
    double point_kernel(const Vec& x, std::size_t k, std::size_t x_cell) const;

    // G_j(x, y) by j applications of the single-layer map on the cloud.
    double kernel_order(int j, const Vec& x, const Vec& y) const;

    struct Interval {
        double value = 0.0;
        double half_width = 0.0;
    };
    // Alternating partial sum with the geometric tail half-width.
    Interval greens(const Vec& x, const Vec& y) const;

    // Columns of all series orders against target nodes `cols`:
    //   G  [i,l] = sum_{j<=J} (-1)^j G_j(z_i, y_l)
    //   P  [k,l] = sum_{j=1..J} (-1)^{j-1} G_{j-1}(z_k, y_l)
    // so that G(x, y_l) = ker(x, y_l) - rowS(x) . P[:,l] for any x.
    struct SeriesColumns {
        std::vector<std::size_t> cols;
        Eigen::MatrixXd G;
        Eigen::MatrixXd P;
    };
    std::shared_ptr<const SeriesColumns> series_columns(const std::vector<std::size_t>& cols) const;

    // row of the single-layer operator at an arbitrary point:
    // rowS(x)[k] = ker(x, z_k) W_k w_k
    Eigen::VectorXd single_layer_row(const Vec& x) const;

    const Eigen::MatrixXd& single_layer() const { return S_; }

private:
    void calibrate();

    Cloud cloud_;
    KernelScheme scheme_;
    double kappa_;
    int legendre_order_ = 0;
    double w_norm_;
    double series_tol_;
    double c_bound_ = 0.0;
    double c_measured_ = 0.0;
    int order_ = 1;
    double tail_bound_ = 0.0;
    Eigen::MatrixXd S_;
};

// Both sides of the kernel-sandwich bound:
//   lhs = int |x-z|^{-(n-2)} |W(z)| |z-y|^{-(n-2)} dz   (cloud quadrature)
//   rhs = ||a||_{n/(n-2),inf} ||W||_{n/2,1} 2^{n-1} / |x-y|^{n-2}
BoundPair gwg_bound(const Cloud& cloud, const Vec& x, const Vec& y, double w_lorentz_norm);
BoundPair gwg_bound(const SampledFunction& W, const Vec& x, const Vec& y);

}  // namespace zs
