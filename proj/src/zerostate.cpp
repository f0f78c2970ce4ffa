#include "zs/zerostate.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace zs {

CompactOperator assemble(const Decomposition& dec, const GreensEvaluator& ev) {
    const Cloud& cloud = ev.cloud();
    if (cloud.kind() == CloudKind::tensor)
        fail(ErrorCode::invalid_range, "assemble: decompositions live on radial grids");
    if (dec.K.radial_grid().size() != cloud.n_shells())
        fail(ErrorCode::grid_mismatch, "assemble: evaluator cloud does not match the decomposition grid");

    std::vector<std::size_t> supp;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        if (dec.K.values()[cloud.source_index(i)] != 0.0) supp.push_back(i);

    CompactOperator op;
    op.support_nodes = supp;
    const std::size_t m = supp.size();
    op.k_times_w.resize(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j)
        op.k_times_w(static_cast<Eigen::Index>(j)) =
            dec.K.values()[cloud.source_index(supp[j])] * cloud.weights()[supp[j]];
    if (m == 0) {
        op.A.resize(0, 0);
        return op;
    }
    op.series = ev.series_columns(supp);
    op.A.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            op.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                op.series->G(static_cast<Eigen::Index>(supp[i]), static_cast<Eigen::Index>(j)) *
                op.k_times_w(static_cast<Eigen::Index>(j));
    return op;
}

std::optional<ZeroState> solve(const CompactOperator& op, double tol, double* sigma_min_out,
                               int* multiplicity_out) {
    if (!(tol > 0.0)) fail(ErrorCode::invalid_range, "solve: tol > 0 required");
    const Eigen::Index m = op.A.rows();
    if (m == 0) {
        if (sigma_min_out) *sigma_min_out = 1.0;  // sigma_min of the identity
        if (multiplicity_out) *multiplicity_out = 0;
        return std::nullopt;
    }

    Eigen::MatrixXd iplusa = op.A;
    for (Eigen::Index i = 0; i < m; ++i) iplusa(i, i) += 1.0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(iplusa, Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        fail(ErrorCode::linear_algebra, "solve: SVD did not converge");
    const auto& sv = svd.singularValues();
    double sigma_min = sv(m - 1);
    int mult = 0;
    for (Eigen::Index i = 0; i < m; ++i)
        if (sv(i) <= tol) ++mult;
    if (sigma_min_out) *sigma_min_out = sigma_min;
    if (multiplicity_out) *multiplicity_out = mult;
    if (sigma_min > tol) return std::nullopt;

    ZeroState z;
    z.sigma_min = sigma_min;
    z.multiplicity = mult;
    z.tol = tol;
    z.support_nodes = op.support_nodes;
    z.k_times_w = op.k_times_w;
    z.series = op.series;
    z.psi = svd.matrixV().col(m - 1);
    Eigen::Index arg = 0;
    z.psi.cwiseAbs().maxCoeff(&arg);
    double piv = z.psi(arg);
    if (piv == 0.0) fail(ErrorCode::linear_algebra, "solve: degenerate singular vector");
    z.psi /= piv;  // normalizing entry becomes exactly 1
    return z;
}

namespace {

Eigen::VectorXd weighted_state(const ZeroState& z) {
    Eigen::VectorXd kwpsi = z.k_times_w.cwiseProduct(z.psi);
    return kwpsi;
}

}  // namespace

std::vector<double> extend(const ZeroState& z, const Decomposition& dec, const GreensEvaluator& ev,
                           const std::vector<Vec>& targets) {
    (void)dec;
    const Cloud& cloud = ev.cloud();
    const std::size_t m = z.support_nodes.size();
    const std::size_t M = cloud.size();
    Eigen::VectorXd kwpsi = weighted_state(z);
    std::vector<double> out(targets.size(), 0.0);

    const std::size_t chunk = 512;
    for (std::size_t base = 0; base < targets.size(); base += chunk) {
        std::size_t cnt = std::min(chunk, targets.size() - base);
        Eigen::MatrixXd rows(static_cast<Eigen::Index>(cnt), static_cast<Eigen::Index>(M));
        Eigen::MatrixXd ker(static_cast<Eigen::Index>(cnt), static_cast<Eigen::Index>(m));
#pragma omp parallel for schedule(static)
        for (long long t = 0; t < static_cast<long long>(cnt); ++t) {
            const Vec& x = targets[base + static_cast<std::size_t>(t)];
            std::size_t cx = cloud.cell_of(x);
            for (std::size_t k = 0; k < M; ++k)
                rows(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) =
                    ev.point_kernel(x, k, cx) * cloud.w_values()[k] * cloud.weights()[k];
            for (std::size_t l = 0; l < m; ++l)
                ker(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(l)) =
                    ev.point_kernel(x, z.support_nodes[l], cx);
        }
        Eigen::MatrixXd g = ker - rows * z.series->P;
        Eigen::VectorXd vals = -(g * kwpsi);
        for (std::size_t t = 0; t < cnt; ++t) out[base + t] = vals(static_cast<Eigen::Index>(t));
    }
    return out;
}

std::vector<double> extend_on_cloud(const ZeroState& z, const GreensEvaluator& ev) {
    const Cloud& cloud = ev.cloud();
    const std::size_t M = cloud.size();
    Eigen::VectorXd kwpsi = weighted_state(z);
    // G rows over all cloud nodes are already in series->G
    Eigen::VectorXd vals = -(z.series->G * kwpsi);
    std::vector<double> out(M);
    for (std::size_t i = 0; i < M; ++i) out[i] = vals(static_cast<Eigen::Index>(i));
    return out;
}

TailSamples tail_profile(const ZeroState& z, const Decomposition& dec, const GreensEvaluator& ev,
                         const std::vector<double>& radii) {
    const Cloud& cloud = ev.cloud();
    TailSamples out;
    out.r = radii;
    if (cloud.kind() == CloudKind::radial) {
        std::vector<Vec> targets;
        for (double r : radii) {
            Vec p = Vec::zero(cloud.dim());
            p[0] = r;
            targets.push_back(p);
        }
        std::vector<double> vals = extend(z, dec, ev, targets);
        out.avg = vals;
        out.max_abs.resize(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) out.max_abs[i] = std::fabs(vals[i]);
        return out;
    }
    const auto& ds = cloud.directions();
    std::vector<Vec> targets;
    for (double r : radii)
        for (const Vec& d : ds.dirs) targets.push_back(r * d);
    std::vector<double> vals = extend(z, dec, ev, targets);
    double omega = unit_sphere_area(cloud.dim());
    std::size_t nd = ds.size();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        KahanSum avg;
        double mx = 0.0;
        for (std::size_t d = 0; d < nd; ++d) {
            double v = vals[i * nd + d];
            avg.add(ds.weights[d] * v);
            mx = std::max(mx, std::fabs(v));
        }
        out.avg.push_back(avg.value() / omega);
        out.max_abs.push_back(mx);
    }
    return out;
}

MomentMap state_moments(const ZeroState& z, const GreensEvaluator& ev, int max_order) {
    if (max_order < 0 || max_order > 2) fail(ErrorCode::invalid_range, "state_moments: max_order in {0,1,2}");
    const Cloud& cloud = ev.cloud();
    std::vector<double> psi = extend_on_cloud(z, ev);
    // psi on supp K is authoritative (extension reproduces it up to sigma_min)
    for (std::size_t l = 0; l < z.support_nodes.size(); ++l)
        psi[z.support_nodes[l]] = z.psi(static_cast<Eigen::Index>(l));
    std::vector<double> kvals(cloud.size(), 0.0);
    for (std::size_t l = 0; l < z.support_nodes.size(); ++l)
        kvals[z.support_nodes[l]] =
            z.k_times_w(static_cast<Eigen::Index>(l)) / cloud.weights()[z.support_nodes[l]];

    const int dim = cloud.dim();
    MomentMap out;
    std::vector<MultiIndex> idxs;
    idxs.push_back(MultiIndex(static_cast<std::size_t>(dim), 0));
    if (max_order >= 1)
        for (int k = 0; k < dim; ++k) {
            MultiIndex a(static_cast<std::size_t>(dim), 0);
            a[static_cast<std::size_t>(k)] = 1;
            idxs.push_back(a);
        }
    if (max_order >= 2)
        for (int k = 0; k < dim; ++k)
            for (int l = k; l < dim; ++l) {
                MultiIndex a(static_cast<std::size_t>(dim), 0);
                a[static_cast<std::size_t>(k)] += 1;
                a[static_cast<std::size_t>(l)] += 1;
                idxs.push_back(a);
            }

    if (cloud.kind() == CloudKind::radial) {
        KahanSum m0, m2;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            double v = (cloud.w_values()[i] + kvals[i]) * psi[i];
            m0.add(cloud.weights()[i] * v);
            m2.add(cloud.weights()[i] * v * cloud.radii()[i] * cloud.radii()[i]);
        }
        for (const auto& a : idxs) {
            int order = 0, nz = 0;
            for (int c : a) {
                order += c;
                nz += (c > 0);
            }
            double v = 0.0;
            if (order == 0)
                v = m0.value();
            else if (order == 2 && nz == 1)
                v = m2.value() / dim;
            out[a] = v;
        }
        return out;
    }

    for (const auto& a : idxs) {
        KahanSum s;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            double v = (cloud.w_values()[i] + kvals[i]) * psi[i] * cloud.weights()[i];
            if (v != 0.0) {
                const Vec p = cloud.points()[i];
                for (int c = 0; c < dim; ++c)
                    for (int rep = 0; rep < a[static_cast<std::size_t>(c)]; ++rep) v *= p[c];
            }
            s.add(v);
        }
        out[a] = s.value();
    }
    return out;
}

TailIntegral state_l2(const ZeroState& z, const GreensEvaluator& ev) {
    const Cloud& cloud = ev.cloud();
    std::vector<double> psi = extend_on_cloud(z, ev);
    double r_max = cloud.kind() == CloudKind::radial ? cloud.radii().back()
                                                     : cloud.shell_radii().back();
    // dyadic radial blocks of int psi^2
    int nb = std::max(3, static_cast<int>(std::ceil(std::log2(r_max / std::max(cloud.radii().front(), 1e-12)))));
    std::vector<double> blocks(static_cast<std::size_t>(nb), 0.0);
    KahanSum total;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        double c = cloud.weights()[i] * psi[i] * psi[i];
        total.add(c);
        int b = std::clamp(static_cast<int>(std::floor(std::log2(r_max / std::max(cloud.radii()[i], 1e-12)))),
                           0, nb - 1);
        blocks[static_cast<std::size_t>(nb - 1 - b)] += c;  // ascending radius
    }
    TailIntegral out;
    out.value = total.value();
    double last = blocks[static_cast<std::size_t>(nb - 1)];
    double prev = blocks[static_cast<std::size_t>(nb - 2)];
    out.tail_convergent = (prev <= 0.0) ? (last <= 0.0) : (last / prev <= 0.75);
    return out;
}

double state_abs_vpsi_integral(const ZeroState& z, const GreensEvaluator& ev) {
    const Cloud& cloud = ev.cloud();
    std::vector<double> psi = extend_on_cloud(z, ev);
    for (std::size_t l = 0; l < z.support_nodes.size(); ++l)
        psi[z.support_nodes[l]] = z.psi(static_cast<Eigen::Index>(l));
    std::vector<double> kvals(cloud.size(), 0.0);
    for (std::size_t l = 0; l < z.support_nodes.size(); ++l)
        kvals[z.support_nodes[l]] =
            z.k_times_w(static_cast<Eigen::Index>(l)) / cloud.weights()[z.support_nodes[l]];
    KahanSum s;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        s.add(cloud.weights()[i] * std::fabs((cloud.w_values()[i] + kvals[i]) * psi[i]));
    return s.value();
}

SampledFunction extend_to_tensor(const ZeroState& z, const Decomposition& dec,
                                 const GreensEvaluator& ev, const TensorGrid& grid) {
    std::vector<Vec> targets;
    targets.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) targets.push_back(grid.point(i));
    std::vector<double> vals = extend(z, dec, ev, targets);
    return SampledFunction::on_tensor(grid, std::move(vals));
}

}  // namespace zs
