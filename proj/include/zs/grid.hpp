#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "zs/common.hpp"

namespace zs {

// Radial quadrature grid: strictly increasing nodes r_1..r_M with weights w_i
// approximating integral f(r) r^{n-1} dr over [r_min, r_max].  Angular factor
// omega_{n-1} is applied by integrate() for radial functions.
class RadialGrid {
public:
    RadialGrid(std::vector<double> nodes, std::vector<double> weights, int dim);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    int dim() const { return dim_; }
    std::size_t size() const { return nodes_.size(); }
    double r_min() const { return nodes_.front(); }
    double r_max() const { return nodes_.back(); }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
    int dim_;
};

// Geometric nodes, trapezoidal weights in the log coordinate with the r^{n-1}
// Jacobian absorbed.  Power-law integrands become (log-)linear on this grid.
RadialGrid make_log_radial_grid(double r_min, double r_max, int count, int dim);

// Uniformly spaced core [spacing/2 .. core_radius] glued to a geometric tail
// up to r_max (log step tail_step).  The core bounds node counts for the
// dense solver; the tail stays logarithmic so power-law fits remain linear.
RadialGrid make_core_tail_radial_grid(double spacing, double core_radius, double r_max,
                                      double tail_step, int dim);

// Uniform, origin-centered tensor-product grid.  Nodes are implicit:
// coordinate k of node index i is (i_k - half_count) * spacing.
class TensorGrid {
public:
    TensorGrid(double spacing, double half_width, int dim);

    int dim() const { return dim_; }
    double spacing() const { return h_; }
    // nodes per axis (odd), half count K so nodes run -K..K
    int per_axis() const { return 2 * half_count_ + 1; }
    int half_count() const { return half_count_; }
    double half_width() const { return (half_count_ + 0.5) * h_; }
    std::size_t size() const { return total_; }
    double cell_volume() const;

    Vec point(std::size_t flat) const;
    std::size_t index(const std::vector<int>& multi) const;
    // flat index of the node mirrored through the origin
    std::size_t mirror(std::size_t flat) const;
    bool is_interior(std::size_t flat) const;

private:
    double h_;
    int half_count_;
    int dim_;
    std::size_t total_;
};

using Grid = std::variant<RadialGrid, TensorGrid>;

enum class Symmetry { radial, general };

// Universal sample carrier: values of a scalar function on a grid.
class SampledFunction {
public:
    SampledFunction(std::shared_ptr<const Grid> grid, std::vector<double> values, Symmetry sym);

    static SampledFunction on_radial(RadialGrid g, std::vector<double> values);
    static SampledFunction on_tensor(TensorGrid g, std::vector<double> values, Symmetry sym = Symmetry::general);

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    Symmetry symmetry() const { return sym_; }
    std::size_t size() const { return values_.size(); }
    int dim() const;

    bool is_radial() const { return sym_ == Symmetry::radial; }
    const RadialGrid& radial_grid() const;
    const TensorGrid& tensor_grid() const;
    bool same_grid(const SampledFunction& other) const;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> values_;
    Symmetry sym_;
};

// Quadrature of f over the grid extent.  Radial functions carry the
// omega_{n-1} sphere factor; tensor sums pair mirror nodes first so odd
// integrands cancel bitwise.  Rejects NaN samples.
double integrate(const SampledFunction& f);

// Relative discrete residual ||(-Delta_h + V) psi|| / ||psi|| over interior
// tensor nodes, second-order centered stencil.
double laplacian_residual(const SampledFunction& psi, const SampledFunction& V);

}  // namespace zs
