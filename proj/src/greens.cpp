#include "zs/greens.hpp"

#include <algorithm>
#include <cmath>

namespace zs {

double g0(const Vec& x, const Vec& y, int dim) {
    double d = dist(x, y);
    if (d <= 0.0) fail(ErrorCode::coincident_points, "g0: x != y required");
    return fundamental_solution_constant(dim) * std::pow(d, -(dim - 2.0));
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1]
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0 = 0, p1 = 0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
            }
            double dp = n * (t * p0 - p1) / (t * t - 1.0);
            double step = p0 / dp;
            t -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = 0.0;
        for (int k = 0; k < n; ++k) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
        }
        double dp = n * (t * p0 - p1) / (t * t - 1.0);
        x[static_cast<std::size_t>(i)] = t;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

void legendre_all(double mu, int lmax, double* out) {
    out[0] = 1.0;
    if (lmax >= 1) out[1] = mu;
    for (int l = 2; l <= lmax; ++l)
        out[l] = ((2.0 * l - 1.0) * mu * out[l - 1] - (l - 1.0) * out[l - 2]) / l;
}

}  // namespace

DirectionSet DirectionSet::product_rule(int n_polar, int n_azimuth) {
    if (n_polar < 1 || n_azimuth < 2)
        fail(ErrorCode::invalid_range, "DirectionSet: need n_polar >= 1, n_azimuth >= 2");
    std::vector<double> u, wu;
    gauss_legendre(n_polar, u, wu);
    DirectionSet ds;
    ds.n_polar = n_polar;
    ds.n_azimuth = n_azimuth;
    double wphi = 2.0 * M_PI / n_azimuth;
    for (int j = 0; j < n_polar; ++j) {
        double s = std::sqrt(std::max(0.0, 1.0 - u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)]));
        for (int k = 0; k < n_azimuth; ++k) {
            double phi = (k + 0.5) * 2.0 * M_PI / n_azimuth;
            Vec d = Vec::zero(3);
            d[0] = s * std::cos(phi);
            d[1] = s * std::sin(phi);
            d[2] = u[static_cast<std::size_t>(j)];
            ds.dirs.push_back(d);
            ds.weights.push_back(wu[static_cast<std::size_t>(j)] * wphi);
        }
    }
    return ds;
}

Cloud Cloud::shells_from(const SampledFunction& W, const DirectionSet& ds) {
    const auto& g = W.radial_grid();
    if (g.dim() != 3) fail(ErrorCode::invalid_range, "Cloud::shells_from: shell clouds are n = 3 only");
    Cloud c;
    c.kind_ = CloudKind::shells;
    c.dim_ = 3;
    c.dirs_ = ds;
    c.shell_r_ = g.nodes();
    std::size_t nd = ds.size();
    std::size_t m = g.size() * nd;
    if (m > 60000) fail(ErrorCode::invalid_range, "Cloud::shells_from: node count too large");
    c.pts_.reserve(m);
    c.radius_.reserve(m);
    c.weight_.reserve(m);
    c.wval_.reserve(m);
    c.src_index_.reserve(m);
    for (std::size_t s = 0; s < g.size(); ++s)
        for (std::size_t d = 0; d < nd; ++d) {
            c.pts_.push_back(g.nodes()[s] * ds.dirs[d]);
            c.radius_.push_back(g.nodes()[s]);
            c.weight_.push_back(g.weights()[s] * ds.weights[d]);
            c.wval_.push_back(W.values()[s]);
            c.src_index_.push_back(s);
        }
    return c;
}

Cloud Cloud::radial_from(const SampledFunction& W) {
    const auto& g = W.radial_grid();
    Cloud c;
    c.kind_ = CloudKind::radial;
    c.dim_ = g.dim();
    c.shell_r_ = g.nodes();
    double omega = unit_sphere_area(g.dim());
    for (std::size_t s = 0; s < g.size(); ++s) {
        c.radius_.push_back(g.nodes()[s]);
        c.weight_.push_back(omega * g.weights()[s]);
        c.wval_.push_back(W.values()[s]);
        c.src_index_.push_back(s);
    }
    return c;
}

Cloud Cloud::tensor_from(const SampledFunction& W) {
    const auto& g = W.tensor_grid();
    if (g.size() > 60000) fail(ErrorCode::invalid_range, "Cloud::tensor_from: node count too large");
    Cloud c;
    c.kind_ = CloudKind::tensor;
    c.dim_ = g.dim();
    double cell = g.cell_volume();
    for (std::size_t i = 0; i < g.size(); ++i) {
        Vec p = g.point(i);
        c.pts_.push_back(p);
        c.radius_.push_back(p.norm());
        c.weight_.push_back(cell);
        c.wval_.push_back(W.values()[i]);
        c.src_index_.push_back(i);
    }
    return c;
}

Vec Cloud::point(std::size_t i) const {
    if (kind_ == CloudKind::radial) {
        Vec p = Vec::zero(dim_);
        p[0] = radius_[i];
        return p;
    }
    return pts_[i];
}

double Cloud::ball_radius(std::size_t i) const {
    return std::pow(weight_[i] / unit_ball_volume(dim_), 1.0 / dim_);
}

std::size_t Cloud::cell_of(const Vec& x) const {
    if (kind_ == CloudKind::tensor) {
        // cells are the grid cubes; recover integer coordinates
        if (pts_.empty()) return npos;
        // nodes laid out in tensor-grid flat order with spacing from any two pts
        // (tensor clouds keep the source grid geometry in src_index_ order)
        // locate by nearest node: uniform grid, direct rounding
        // infer spacing and half-count from stored points
        // node 0 is the most negative corner
        double h = 0.0;
        for (std::size_t i = 1; i < pts_.size(); ++i) {
            double d = std::fabs(pts_[i][dim_ - 1] - pts_[0][dim_ - 1]);
            if (d > 0) {
                h = d;
                break;
            }
        }
        if (h <= 0) return npos;
        double corner = pts_[0][0];
        int per = static_cast<int>(std::lround(std::cbrt(static_cast<double>(pts_.size()))));
        if (dim_ != 3) per = static_cast<int>(std::lround(std::pow(static_cast<double>(pts_.size()), 1.0 / dim_)));
        std::size_t flat = 0;
        for (int a = 0; a < dim_; ++a) {
            long idx = std::lround((x[a] - corner) / h);
            if (idx < 0 || idx >= per) return npos;
            flat = flat * static_cast<std::size_t>(per) + static_cast<std::size_t>(idx);
        }
        return flat;
    }
    // shell index by radial cell boundaries (midpoints between shell radii)
    double r = x.norm();
    std::size_t ns = shell_r_.size();
    double outer = shell_r_[ns - 1] + 0.5 * (shell_r_[ns - 1] - shell_r_[ns - 2]);
    if (r > outer) return npos;
    std::size_t lo = 0, hi = ns - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        double b = 0.5 * (shell_r_[mid] + shell_r_[mid + 1]);
        if (r <= b)
            hi = mid;
        else
            lo = mid + 1;
    }
    if (kind_ == CloudKind::radial) return lo;
    // nearest direction
    std::size_t nd = dirs_.size();
    std::size_t best = 0;
    double bestdot = -2.0;
    if (r > 0) {
        for (std::size_t d = 0; d < nd; ++d) {
            double dp = dot(x, dirs_.dirs[d]);
            if (dp > bestdot) {
                bestdot = dp;
                best = d;
            }
        }
    }
    return lo * nd + best;
}

GreensEvaluator::GreensEvaluator(Cloud cloud, KernelScheme scheme, double w_lorentz_norm,
                                 double series_tol)
    : cloud_(std::move(cloud)),
      scheme_(scheme),
      kappa_(fundamental_solution_constant(cloud_.dim())),
      w_norm_(w_lorentz_norm),
      series_tol_(series_tol) {
    if (scheme_ == KernelScheme::spectral) {
        if (cloud_.kind() != CloudKind::shells)
            fail(ErrorCode::invalid_range, "GreensEvaluator: spectral scheme needs a shell cloud");
        legendre_order_ = cloud_.directions().legendre_exactness();
        if (legendre_order_ < 1)
            fail(ErrorCode::invalid_range, "GreensEvaluator: direction rule too coarse for spectral scheme");
    }
    c_bound_ = contraction_constant(cloud_.dim(), w_norm_);

    const std::size_t M = cloud_.size();
    S_.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(M));
    if (scheme_ == KernelScheme::spectral) {
        // factorized assembly: radial ladder x Legendre table over direction pairs
        const auto& ds = cloud_.directions();
        const std::size_t nd = ds.size();
        const std::size_t ns = cloud_.n_shells();
        const int L = legendre_order_;
        std::vector<double> ptab(nd * nd * static_cast<std::size_t>(L + 1));
        for (std::size_t a = 0; a < nd; ++a)
            for (std::size_t b = 0; b < nd; ++b) {
                double mu = std::clamp(dot(ds.dirs[a], ds.dirs[b]), -1.0, 1.0);
                legendre_all(mu, L, &ptab[(a * nd + b) * static_cast<std::size_t>(L + 1)]);
            }
        const auto& sr = cloud_.shell_radii();
#pragma omp parallel for schedule(static)
        for (long long si = 0; si < static_cast<long long>(ns); ++si) {
            std::vector<double> f(static_cast<std::size_t>(L + 1));
            for (std::size_t sk = 0; sk < ns; ++sk) {
                double rlo = std::min(sr[static_cast<std::size_t>(si)], sr[sk]);
                double rhi = std::max(sr[static_cast<std::size_t>(si)], sr[sk]);
                double ratio = rlo / rhi;
                f[0] = kappa_ / rhi;
                for (int l = 1; l <= L; ++l) f[static_cast<std::size_t>(l)] = f[static_cast<std::size_t>(l - 1)] * ratio;
                for (std::size_t a = 0; a < nd; ++a) {
                    std::size_t i = static_cast<std::size_t>(si) * nd + a;
                    for (std::size_t b = 0; b < nd; ++b) {
                        std::size_t k = sk * nd + b;
                        const double* pl = &ptab[(a * nd + b) * static_cast<std::size_t>(L + 1)];
                        double acc = 0.0;
                        for (int l = 0; l <= L; ++l) acc += f[static_cast<std::size_t>(l)] * pl[l];
                        S_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                            acc * cloud_.w_values()[k] * cloud_.weights()[k];
                    }
                }
            }
        }
    } else {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(M); ++i)
            for (std::size_t k = 0; k < M; ++k)
                S_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                    node_kernel(static_cast<std::size_t>(i), k) * cloud_.w_values()[k] * cloud_.weights()[k];
    }
    calibrate();
}

double GreensEvaluator::node_kernel(std::size_t i, std::size_t k) const {
    const int n = cloud_.dim();
    switch (cloud_.kind()) {
        case CloudKind::radial: {
            double rhi = std::max(cloud_.radii()[i], cloud_.radii()[k]);
            return kappa_ * std::pow(rhi, 2.0 - n);
        }
        case CloudKind::shells:
            if (scheme_ == KernelScheme::spectral) {
                double ri = cloud_.radii()[i], rk = cloud_.radii()[k];
                double rlo = std::min(ri, rk), rhi = std::max(ri, rk);
                double mu = std::clamp(dot(cloud_.points()[i], cloud_.points()[k]) / (ri * rk), -1.0, 1.0);
                double pl[16];
                legendre_all(mu, legendre_order_, pl);
                double f = kappa_ / rhi, ratio = rlo / rhi, acc = 0.0;
                for (int l = 0; l <= legendre_order_; ++l) {
                    acc += f * pl[l];
                    f *= ratio;
                }
                return acc;
            }
            [[fallthrough]];
        case CloudKind::tensor: {
            if (i == k) {
                // punctured cell: analytic integral of kappa |.|^{-(n-2)} over the
                // equal-volume ball, divided by the cell volume
                double a = cloud_.ball_radius(i);
                return kappa_ * unit_sphere_area(n) * a * a / (2.0 * cloud_.weights()[i]);
            }
            double d = dist(cloud_.points()[i], cloud_.points()[k]);
            return kappa_ * std::pow(d, 2.0 - n);
        }
    }
    fail(ErrorCode::internal, "node_kernel: bad cloud kind");
}

double GreensEvaluator::point_kernel(const Vec& x, std::size_t k, std::size_t x_cell) const {
    const int n = cloud_.dim();
    switch (cloud_.kind()) {
        case CloudKind::radial: {
            double rhi = std::max(x.norm(), cloud_.radii()[k]);
            return kappa_ * std::pow(rhi, 2.0 - n);
        }
        case CloudKind::shells:
            if (scheme_ == KernelScheme::spectral) {
                double rx = x.norm(), rk = cloud_.radii()[k];
                if (rx == 0.0) return kappa_ / rk;
                double rlo = std::min(rx, rk), rhi = std::max(rx, rk);
                double mu = std::clamp(dot(x, cloud_.points()[k]) / (rx * rk), -1.0, 1.0);
                double pl[16];
                legendre_all(mu, legendre_order_, pl);
                double f = kappa_ / rhi, ratio = rlo / rhi, acc = 0.0;
                for (int l = 0; l <= legendre_order_; ++l) {
                    acc += f * pl[l];
                    f *= ratio;
                }
                return acc;
            }
            [[fallthrough]];
        case CloudKind::tensor: {
            if (k == x_cell) {
                double a = cloud_.ball_radius(k);
                return kappa_ * unit_sphere_area(n) * a * a / (2.0 * cloud_.weights()[k]);
            }
            double d = dist(x, cloud_.points()[k]);
            if (d <= 0.0) fail(ErrorCode::coincident_points, "point_kernel: target on node outside its cell");
            return kappa_ * std::pow(d, 2.0 - n);
        }
    }
    fail(ErrorCode::internal, "point_kernel: bad cloud kind");
}

void GreensEvaluator::calibrate() {
    const std::size_t M = cloud_.size();
    Rng rng(0x5eedc0de);
    const int n_cols = 6, n_rows = 48, jmax = 4;
    double cmax = 0.0;
    for (int c = 0; c < n_cols; ++c) {
        std::size_t y = static_cast<std::size_t>(rng.uniform() * static_cast<double>(M));
        y = std::min(y, M - 1);
        Eigen::VectorXd col(static_cast<Eigen::Index>(M));
        for (std::size_t k = 0; k < M; ++k)
            col(static_cast<Eigen::Index>(k)) = node_kernel(k, y);
        Eigen::VectorXd base = col;
        for (int j = 1; j <= jmax; ++j) {
            col = S_ * col;
            for (int rsample = 0; rsample < n_rows; ++rsample) {
                std::size_t xi = std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(M)), M - 1);
                double gj = std::fabs(col(static_cast<Eigen::Index>(xi)));
                double gb = std::fabs(base(static_cast<Eigen::Index>(xi)));
                if (gb > 1e-300 && gj > 0.0)
                    cmax = std::max(cmax, std::pow(gj / gb, 1.0 / j));
            }
        }
    }
    c_measured_ = cmax;
    if (c_measured_ >= 1.0)
        fail(ErrorCode::contraction_violated,
             "GreensEvaluator: measured order ratio >= 1, Neumann series does not contract");
    double c = std::max(c_measured_, 1e-6);
    double target = series_tol_ * (1.0 - c);
    int J = static_cast<int>(std::ceil(std::log(target) / std::log(c))) - 1;
    order_ = std::clamp(J, 1, 48);
    tail_bound_ = std::pow(c, order_ + 1) / (1.0 - c);
}

Eigen::VectorXd GreensEvaluator::single_layer_row(const Vec& x) const {
    const std::size_t M = cloud_.size();
    std::size_t cx = cloud_.cell_of(x);
    Eigen::VectorXd row(static_cast<Eigen::Index>(M));
    for (std::size_t k = 0; k < M; ++k)
        row(static_cast<Eigen::Index>(k)) =
            point_kernel(x, k, cx) * cloud_.w_values()[k] * cloud_.weights()[k];
    return row;
}

double GreensEvaluator::kernel_order(int j, const Vec& x, const Vec& y) const {
    if (j < 0) fail(ErrorCode::invalid_range, "kernel_order: j >= 0");
    if (dist(x, y) <= 0.0) fail(ErrorCode::coincident_points, "kernel_order: x != y required");
    const std::size_t M = cloud_.size();
    if (j == 0) {
        if (scheme_ == KernelScheme::spectral) {
            // spectral point-point value
            double rx = x.norm(), ry = y.norm();
            if (rx == 0.0 || ry == 0.0) return kappa_ * std::pow(std::max(rx, ry), 2.0 - cloud_.dim());
            double rlo = std::min(rx, ry), rhi = std::max(rx, ry);
            double mu = std::clamp(dot(x, y) / (rx * ry), -1.0, 1.0);
            double pl[16];
            legendre_all(mu, legendre_order_, pl);
            double f = kappa_ / rhi, ratio = rlo / rhi, acc = 0.0;
            for (int l = 0; l <= legendre_order_; ++l) {
                acc += f * pl[l];
                f *= ratio;
            }
            return acc;
        }
        return g0(x, y, cloud_.dim());
    }
    std::size_t cy = cloud_.cell_of(y);
    Eigen::VectorXd col(static_cast<Eigen::Index>(M));
    for (std::size_t k = 0; k < M; ++k) col(static_cast<Eigen::Index>(k)) = point_kernel(y, k, cy);
    for (int step = 1; step < j; ++step) col = S_ * col;
    Eigen::VectorXd row = single_layer_row(x);
    return row.dot(col);
}

GreensEvaluator::Interval GreensEvaluator::greens(const Vec& x, const Vec& y) const {
    if (dist(x, y) <= 0.0) fail(ErrorCode::coincident_points, "greens: x != y required");
    const std::size_t M = cloud_.size();
    double value = kernel_order(0, x, y);
    std::size_t cy = cloud_.cell_of(y);
    Eigen::VectorXd col(static_cast<Eigen::Index>(M));
    for (std::size_t k = 0; k < M; ++k) col(static_cast<Eigen::Index>(k)) = point_kernel(y, k, cy);
    Eigen::VectorXd row = single_layer_row(x);
    double sign = -1.0;
    for (int j = 1; j <= order_; ++j) {
        value += sign * row.dot(col);
        sign = -sign;
        if (j < order_) col = S_ * col;
    }
    double free_kernel = g0(x, y, cloud_.dim());
    double half = tail_bound_ * free_kernel;
    double cap = free_kernel / (1.0 - std::max(c_measured_, 1e-6));
    std::size_t cx = cloud_.cell_of(x);
    if (cx != cy && std::fabs(value) > 1.5 * cap + 1e-300)
        fail(ErrorCode::contraction_violated, "greens: partial sum exceeds the contraction envelope");
    return {value, half};
}

std::shared_ptr<const GreensEvaluator::SeriesColumns>
GreensEvaluator::series_columns(const std::vector<std::size_t>& cols) const {
    const std::size_t M = cloud_.size();
    const std::size_t m = cols.size();
    auto out = std::make_shared<SeriesColumns>();
    out->cols = cols;
    Eigen::MatrixXd term(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(m));
#pragma omp parallel for schedule(static)
    for (long long l = 0; l < static_cast<long long>(m); ++l)
        for (std::size_t i = 0; i < M; ++i)
            term(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
                node_kernel(i, cols[static_cast<std::size_t>(l)]);
    out->G = term;
    out->P = term;
    double sign = -1.0;
    for (int j = 1; j <= order_; ++j) {
        term = S_ * term;  // B_j
        out->G.noalias() += sign * term;
        if (j < order_) out->P.noalias() += sign * term;
        sign = -sign;
    }
    return out;
}

namespace {

double bare_kernel(const Vec& x, const Vec& y, int n) { return std::pow(dist(x, y), 2.0 - n); }

double bare_puncture(const Cloud& c, std::size_t k) {
    double a = c.ball_radius(k);
    return unit_sphere_area(c.dim()) * a * a / (2.0 * c.weights()[k]);
}

}  // namespace

BoundPair gwg_bound(const Cloud& cloud, const Vec& x, const Vec& y, double w_lorentz_norm) {
    if (dist(x, y) <= 0.0) fail(ErrorCode::coincident_points, "gwg_bound: x != y required");
    if (cloud.kind() == CloudKind::radial)
        fail(ErrorCode::invalid_range, "gwg_bound: needs a full (shells/tensor) cloud");
    const int n = cloud.dim();
    std::size_t cx = cloud.cell_of(x), cy = cloud.cell_of(y);
    KahanSum s;
    for (std::size_t k = 0; k < cloud.size(); ++k) {
        double wk = std::fabs(cloud.w_values()[k]);
        if (wk == 0.0) continue;
        double fx = (k == cx) ? bare_puncture(cloud, k) : bare_kernel(x, cloud.points()[k], n);
        double fy = (k == cy) ? bare_puncture(cloud, k) : bare_kernel(y, cloud.points()[k], n);
        s.add(fx * wk * fy * cloud.weights()[k]);
    }
    BoundPair out;
    out.lhs = s.value();
    out.rhs = weak_norm_inverse_power(n) * w_lorentz_norm * std::pow(2.0, n - 1) *
              std::pow(dist(x, y), 2.0 - n);
    return out;
}

BoundPair gwg_bound(const SampledFunction& W, const Vec& x, const Vec& y) {
    double wnorm = quasinorm_checked(W, LorentzIndex::of(W.dim() / 2.0, 1.0)).value;
    if (W.is_radial()) {
        Cloud c = Cloud::shells_from(W, DirectionSet::product_rule(6, 12));
        return gwg_bound(c, x, y, wnorm);
    }
    Cloud c = Cloud::tensor_from(W);
    return gwg_bound(c, x, y, wnorm);
}

}  // namespace zs
