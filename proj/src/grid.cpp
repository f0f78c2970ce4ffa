#include "zs/grid.hpp"

#include <algorithm>
#include <cmath>

namespace zs {

RadialGrid::RadialGrid(std::vector<double> nodes, std::vector<double> weights, int dim)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), dim_(dim) {
    if (dim_ < 3) fail(ErrorCode::invalid_range, "RadialGrid: dim >= 3 required");
    if (nodes_.size() != weights_.size() || nodes_.size() < 2)
        fail(ErrorCode::invalid_range, "RadialGrid: node/weight size mismatch");
    if (nodes_.front() <= 0.0) fail(ErrorCode::invalid_range, "RadialGrid: nodes must be > 0");
    for (std::size_t i = 1; i < nodes_.size(); ++i)
        if (nodes_[i] <= nodes_[i - 1])
            fail(ErrorCode::invalid_range, "RadialGrid: nodes must be strictly increasing");
    for (double w : weights_)
        if (w < 0.0) fail(ErrorCode::invalid_range, "RadialGrid: negative weight");
}

RadialGrid make_log_radial_grid(double r_min, double r_max, int count, int dim) {
    if (!(0.0 < r_min && r_min < r_max) || count < 8 || dim < 3)
        fail(ErrorCode::invalid_range, "make_log_radial_grid: need 0 < r_min < r_max, count >= 8, dim >= 3");
    std::vector<double> r(count), w(count);
    const double du = std::log(r_max / r_min) / (count - 1);
    for (int i = 0; i < count; ++i) r[i] = r_min * std::exp(i * du);
    r[count - 1] = r_max;
    // trapezoid in u = log r applied to f(e^u) e^{n u}
    for (int i = 0; i < count; ++i) {
        double cell = (i == 0 || i == count - 1) ? 0.5 * du : du;
        w[i] = cell * std::pow(r[i], dim);
    }
    return RadialGrid(std::move(r), std::move(w), dim);
}

RadialGrid make_core_tail_radial_grid(double spacing, double core_radius, double r_max,
                                      double tail_step, int dim) {
    if (!(spacing > 0.0 && core_radius > spacing && r_max > core_radius && tail_step > 0.0) || dim < 3)
        fail(ErrorCode::invalid_range, "make_core_tail_radial_grid: bad parameters");
    std::vector<double> r;
    int n_core = static_cast<int>(std::floor(core_radius / spacing + 0.5));
    for (int i = 1; i <= n_core; ++i) r.push_back((i - 0.5) * spacing);
    double last = r.back();
    while (last * std::exp(tail_step) < r_max) {
        last *= std::exp(tail_step);
        r.push_back(last);
    }
    r.push_back(r_max);
    // plain trapezoid in r on F(r) = f(r) r^{n-1}
    const int m = static_cast<int>(r.size());
    std::vector<double> w(m);
    for (int i = 0; i < m; ++i) {
        double lo = (i == 0) ? r[0] : 0.5 * (r[i - 1] + r[i]);
        double hi = (i == m - 1) ? r[m - 1] : 0.5 * (r[i] + r[i + 1]);
        w[i] = (hi - lo) * std::pow(r[i], dim - 1);
    }
    return RadialGrid(std::move(r), std::move(w), dim);
}

TensorGrid::TensorGrid(double spacing, double half_width, int dim) : h_(spacing), dim_(dim) {
    if (!(spacing > 0.0) || !(half_width > 0.0) || dim < 1)
        fail(ErrorCode::invalid_range, "TensorGrid: spacing and half_width must be > 0");
    half_count_ = std::max(1, static_cast<int>(std::floor(half_width / spacing + 0.5)));
    std::size_t per = static_cast<std::size_t>(per_axis());
    total_ = 1;
    for (int a = 0; a < dim_; ++a) {
        if (total_ > (std::size_t{1} << 33) / per)
            fail(ErrorCode::invalid_range, "TensorGrid: node count too large");
        total_ *= per;
    }
}

double TensorGrid::cell_volume() const { return std::pow(h_, dim_); }

Vec TensorGrid::point(std::size_t flat) const {
    Vec p = Vec::zero(dim_);
    std::size_t per = static_cast<std::size_t>(per_axis());
    for (int a = dim_ - 1; a >= 0; --a) {
        int idx = static_cast<int>(flat % per);
        flat /= per;
        p[a] = static_cast<double>(idx - half_count_) * h_;
    }
    return p;
}

std::size_t TensorGrid::index(const std::vector<int>& multi) const {
    std::size_t per = static_cast<std::size_t>(per_axis());
    std::size_t flat = 0;
    for (int a = 0; a < dim_; ++a) flat = flat * per + static_cast<std::size_t>(multi[a]);
    return flat;
}

std::size_t TensorGrid::mirror(std::size_t flat) const {
    std::size_t per = static_cast<std::size_t>(per_axis());
    std::size_t out = 0, mult = 1;
    for (int a = 0; a < dim_; ++a) {
        std::size_t idx = flat % per;
        out += (per - 1 - idx) * mult;
        mult *= per;
        flat /= per;
    }
    return out;
}

bool TensorGrid::is_interior(std::size_t flat) const {
    std::size_t per = static_cast<std::size_t>(per_axis());
    for (int a = 0; a < dim_; ++a) {
        std::size_t idx = flat % per;
        if (idx == 0 || idx == per - 1) return false;
        flat /= per;
    }
    return true;
}

SampledFunction::SampledFunction(std::shared_ptr<const Grid> grid, std::vector<double> values,
                                 Symmetry sym)
    : grid_(std::move(grid)), values_(std::move(values)), sym_(sym) {
    std::size_t n = std::visit([](const auto& g) { return g.size(); }, *grid_);
    if (n != values_.size()) fail(ErrorCode::grid_mismatch, "SampledFunction: value count != node count");
    if (sym_ == Symmetry::radial && !std::holds_alternative<RadialGrid>(*grid_))
        fail(ErrorCode::grid_mismatch, "SampledFunction: radial tag requires RadialGrid");
}

SampledFunction SampledFunction::on_radial(RadialGrid g, std::vector<double> values) {
    return SampledFunction(std::make_shared<Grid>(std::move(g)), std::move(values), Symmetry::radial);
}

SampledFunction SampledFunction::on_tensor(TensorGrid g, std::vector<double> values, Symmetry sym) {
    if (sym == Symmetry::radial) sym = Symmetry::general;
    return SampledFunction(std::make_shared<Grid>(std::move(g)), std::move(values), sym);
}

int SampledFunction::dim() const {
    return std::visit([](const auto& g) { return g.dim(); }, *grid_);
}

const RadialGrid& SampledFunction::radial_grid() const {
    if (!std::holds_alternative<RadialGrid>(*grid_))
        fail(ErrorCode::grid_mismatch, "SampledFunction: not on a radial grid");
    return std::get<RadialGrid>(*grid_);
}

const TensorGrid& SampledFunction::tensor_grid() const {
    if (!std::holds_alternative<TensorGrid>(*grid_))
        fail(ErrorCode::grid_mismatch, "SampledFunction: not on a tensor grid");
    return std::get<TensorGrid>(*grid_);
}

bool SampledFunction::same_grid(const SampledFunction& other) const {
    if (grid_ == other.grid_) return true;
    if (grid_->index() != other.grid_->index()) return false;
    if (std::holds_alternative<TensorGrid>(*grid_)) {
        const auto& a = std::get<TensorGrid>(*grid_);
        const auto& b = std::get<TensorGrid>(*other.grid_);
        return a.dim() == b.dim() && a.spacing() == b.spacing() && a.half_count() == b.half_count();
    }
    const auto& a = std::get<RadialGrid>(*grid_);
    const auto& b = std::get<RadialGrid>(*other.grid_);
    return a.dim() == b.dim() && a.nodes() == b.nodes();
}

namespace {

void reject_nan(const std::vector<double>& v) {
    for (double x : v)
        if (std::isnan(x)) fail(ErrorCode::nan_input, "integrate: NaN sample rejected");
}

}  // namespace

double integrate(const SampledFunction& f) {
    reject_nan(f.values());
    const auto& vals = f.values();
    if (std::holds_alternative<RadialGrid>(f.grid())) {
        const auto& g = std::get<RadialGrid>(f.grid());
        KahanSum s;
        for (std::size_t i = 0; i < vals.size(); ++i) s.add(g.weights()[i] * vals[i]);
        return unit_sphere_area(g.dim()) * s.value();
    }
    const auto& g = std::get<TensorGrid>(f.grid());
    // mirror-paired order: odd integrands cancel exactly
    KahanSum s;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        std::size_t j = g.mirror(i);
        if (j > i)
            s.add(vals[i] + vals[j]);
        else if (j == i)
            s.add(vals[i]);
    }
    return g.cell_volume() * s.value();
}

double laplacian_residual(const SampledFunction& psi, const SampledFunction& V) {
    if (!psi.same_grid(V)) fail(ErrorCode::grid_mismatch, "laplacian_residual: psi and V on different grids");
    const auto& g = psi.tensor_grid();
    const auto& pv = psi.values();
    const auto& vv = V.values();
    const int dim = g.dim();
    const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
    std::vector<std::size_t> stride(dim);
    std::size_t per = static_cast<std::size_t>(g.per_axis());
    stride[dim - 1] = 1;
    for (int a = dim - 2; a >= 0; --a) stride[a] = stride[a + 1] * per;

    KahanSum num, den;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        if (!g.is_interior(i)) continue;
        double lap = 0;
        for (int a = 0; a < dim; ++a)
            lap += (pv[i + stride[a]] - 2.0 * pv[i] + pv[i - stride[a]]) * inv_h2;
        double res = -lap + vv[i] * pv[i];
        num.add(res * res);
        den.add(pv[i] * pv[i]);
    }
    if (den.value() <= 0.0) return num.value() > 0.0 ? std::sqrt(num.value()) : 0.0;
    return std::sqrt(num.value() / den.value());
}

}  // namespace zs
