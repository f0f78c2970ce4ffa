#include "zs/potential.hpp"

#include <algorithm>
#include <cmath>

namespace zs {

double evaluate_radial(const PotentialSpec& spec, double r) {
    const int n = spec.dim;
    switch (spec.kind) {
        case PotentialKind::inverse_design_radial: {
            double d = 1.0 + r * r;
            return -spec.scale * n * (n - 2.0) / (d * d);
        }
        case PotentialKind::inverse_design_dipole: {
            double d = 1.0 + r * r;
            return -spec.scale * n * (n + 2.0) / (d * d);
        }
        case PotentialKind::compact_bump:
            return (r <= spec.bump_radius) ? spec.scale * spec.bump_amplitude : 0.0;
        case PotentialKind::custom_samples: {
            const auto& rs = spec.custom_radii;
            const auto& vs = spec.custom_values;
            if (rs.size() < 2 || rs.size() != vs.size())
                fail(ErrorCode::unknown_kind, "custom_samples: need matching radii/values");
            if (r <= rs.front()) return spec.scale * vs.front();
            if (r >= rs.back()) return 0.0;
            auto it = std::upper_bound(rs.begin(), rs.end(), r);
            std::size_t k = static_cast<std::size_t>(it - rs.begin());
            double t = (std::log(r) - std::log(rs[k - 1])) / (std::log(rs[k]) - std::log(rs[k - 1]));
            return spec.scale * ((1.0 - t) * vs[k - 1] + t * vs[k]);
        }
    }
    fail(ErrorCode::unknown_kind, "evaluate: unknown potential kind");
}

double evaluate(const PotentialSpec& spec, const Vec& x) {
    if (x.dim != spec.dim) fail(ErrorCode::grid_mismatch, "evaluate: point dimension mismatch");
    return evaluate_radial(spec, x.norm());
}

double psi_radial_family(int dim, double r) { return std::pow(1.0 + r * r, -0.5 * (dim - 2)); }

double psi_dipole_family(int dim, const Vec& x) {
    return x[0] * std::pow(1.0 + x.norm2(), -0.5 * dim);
}

SampledFunction sample_radial(const PotentialSpec& spec, const RadialGrid& grid) {
    if (grid.dim() != spec.dim) fail(ErrorCode::grid_mismatch, "sample_radial: dimension mismatch");
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = evaluate_radial(spec, grid.nodes()[i]);
    return SampledFunction::on_radial(grid, std::move(v));
}

SampledFunction sample_tensor(const PotentialSpec& spec, const TensorGrid& grid) {
    if (grid.dim() != spec.dim) fail(ErrorCode::grid_mismatch, "sample_tensor: dimension mismatch");
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = evaluate_radial(spec, grid.point(i).norm());
    return SampledFunction::on_tensor(grid, std::move(v));
}

double contraction_constant(int dim, double w_norm) {
    return std::pow(2.0, dim - 1) * fundamental_solution_constant(dim) *
           weak_norm_inverse_power(dim) * w_norm;
}

double default_delta(const SampledFunction& V, double c_target) {
    double vnorm = quasinorm_checked(V, LorentzIndex::of(V.dim() / 2.0, 1.0)).value;
    double delta_c = c_target / contraction_constant(V.dim(), 1.0);
    return std::min(0.1 * vnorm, delta_c);
}

namespace {

double quantize(double v, double clamp_level, double step) {
    double c = std::clamp(v, -clamp_level, clamp_level);
    return step * std::round(c / step);
}

struct Parts {
    double total = 0.0;
    double tail = 0.0;    // ||V 1_{r>R}||
    double inside = 0.0;  // ||(V-K) 1_{r<=R}||
};

Parts measure_parts(const SampledFunction& V, const std::vector<double>& kvals, double R) {
    const auto& g = V.radial_grid();
    LorentzIndex idx = LorentzIndex::of(g.dim() / 2.0, 1.0);
    std::vector<double> w(V.size()), tail(V.size(), 0.0), inside(V.size(), 0.0);
    for (std::size_t i = 0; i < V.size(); ++i) {
        w[i] = V.values()[i] - kvals[i];
        if (g.nodes()[i] > R)
            tail[i] = w[i];
        else
            inside[i] = w[i];
    }
    Parts p;
    p.total = quasinorm_checked(SampledFunction::on_radial(g, std::move(w)), idx).value;
    p.tail = quasinorm_checked(SampledFunction::on_radial(g, std::move(tail)), idx).value;
    p.inside = quasinorm_checked(SampledFunction::on_radial(g, std::move(inside)), idx).value;
    return p;
}

}  // namespace

double Decomposition::k_at(double r, double v_of_r) const {
    if (r > support_radius || quant_step <= 0.0) return 0.0;
    return quantize(v_of_r, clamp_level, quant_step);
}

Decomposition decompose(const SampledFunction& V, double delta, int budget,
                        std::optional<PotentialSpec> source) {
    if (!(delta > 0.0)) fail(ErrorCode::invalid_range, "decompose: delta > 0 required");
    if (!V.is_radial()) fail(ErrorCode::grid_mismatch, "decompose: radial potential samples expected");
    const auto& g = V.radial_grid();
    const int n = g.dim();

    double vmax = 0.0;
    for (double v : V.values()) vmax = std::max(vmax, std::fabs(v));
    if (vmax == 0.0) {
        std::vector<double> zero(V.size(), 0.0);
        Decomposition d{SampledFunction::on_radial(g, zero), SampledFunction::on_radial(g, zero),
                        delta, 0.0, 0.0, 0.0, 0.0, 0.0, 0, 1, std::move(source)};
        return d;
    }

    double R = std::min(4.0, 0.5 * g.r_max());
    double M = vmax;
    double q = vmax / 1024.0;

    for (int round = 1; round <= budget; ++round) {
        std::vector<double> kvals(V.size());
        for (std::size_t i = 0; i < V.size(); ++i)
            kvals[i] = (g.nodes()[i] <= R) ? quantize(V.values()[i], M, q) : 0.0;
        Parts parts = measure_parts(V, kvals, R);
        if (parts.total <= delta) {
            std::vector<double> wvals(V.size());
            for (std::size_t i = 0; i < V.size(); ++i) wvals[i] = V.values()[i] - kvals[i];
            std::vector<double> sorted(kvals);
            std::sort(sorted.begin(), sorted.end());
            int levels = 0;
            for (std::size_t i = 0; i < sorted.size(); ++i)
                if (sorted[i] != 0.0 && (i == 0 || sorted[i] != sorted[i - 1])) ++levels;
            Decomposition d{SampledFunction::on_radial(g, std::move(wvals)),
                            SampledFunction::on_radial(g, std::move(kvals)),
                            delta,
                            parts.total,
                            contraction_constant(n, parts.total),
                            R,
                            M,
                            q,
                            levels,
                            round,
                            std::move(source)};
            return d;
        }
        // escalate whichever component blocks certification
        bool moved = false;
        if (parts.tail > 0.6 * delta && R < g.r_max()) {
            R = std::min(2.0 * R, g.r_max());
            moved = true;
        }
        if (parts.inside > 0.35 * delta) {
            q *= (parts.inside > 1.4 * delta) ? 0.25 : 0.5;
            if (M < vmax) M *= 2.0;
            moved = true;
        }
        if (!moved) {
            q *= 0.5;
            if (R < g.r_max()) R = std::min(2.0 * R, g.r_max());
        }
    }
    fail(ErrorCode::budget_exhausted,
         "decompose: delta unreachable at current grid resolution (refine the grid)");
}

namespace {

void enumerate_multi_indices(int dim, int max_order, std::vector<MultiIndex>& out) {
    out.push_back(MultiIndex(static_cast<std::size_t>(dim), 0));
    if (max_order >= 1)
        for (int k = 0; k < dim; ++k) {
            MultiIndex a(static_cast<std::size_t>(dim), 0);
            a[static_cast<std::size_t>(k)] = 1;
            out.push_back(a);
        }
    if (max_order >= 2)
        for (int k = 0; k < dim; ++k)
            for (int l = k; l < dim; ++l) {
                MultiIndex a(static_cast<std::size_t>(dim), 0);
                a[static_cast<std::size_t>(k)] += 1;
                a[static_cast<std::size_t>(l)] += 1;
                out.push_back(a);
            }
}

}  // namespace

MomentMap moments(const SampledFunction& V, const SampledFunction& psi, int max_order) {
    if (!V.same_grid(psi)) fail(ErrorCode::grid_mismatch, "moments: V and psi on different grids");
    if (max_order < 0 || max_order > 2) fail(ErrorCode::invalid_range, "moments: max_order in {0,1,2}");
    const int dim = V.dim();
    std::vector<MultiIndex> idxs;
    enumerate_multi_indices(dim, max_order, idxs);
    MomentMap out;

    if (V.is_radial() && psi.is_radial()) {
        const auto& g = V.radial_grid();
        // angular reductions: odd moments vanish exactly; <y_k^2> = r^2 / n
        KahanSum m0, m2;
        for (std::size_t i = 0; i < V.size(); ++i) {
            double fv = V.values()[i] * psi.values()[i];
            m0.add(g.weights()[i] * fv);
            m2.add(g.weights()[i] * fv * g.nodes()[i] * g.nodes()[i]);
        }
        double omega = unit_sphere_area(dim);
        for (const auto& a : idxs) {
            int order = 0, nz = 0;
            for (int c : a) {
                order += c;
                nz += (c > 0);
            }
            double v = 0.0;
            if (order == 0)
                v = omega * m0.value();
            else if (order == 2 && nz == 1)
                v = omega * m2.value() / dim;
            out[a] = v;
        }
        return out;
    }

    const auto& g = V.tensor_grid();
    for (const auto& a : idxs) {
        std::vector<double> vals(V.size());
        for (std::size_t i = 0; i < V.size(); ++i) {
            double prod = V.values()[i] * psi.values()[i];
            if (prod != 0.0) {
                Vec p = g.point(i);
                for (int c = 0; c < g.dim(); ++c)
                    for (int rep = 0; rep < a[static_cast<std::size_t>(c)]; ++rep) prod *= p[c];
            }
            vals[i] = prod;
        }
        out[a] = integrate(SampledFunction::on_tensor(g, std::move(vals)));
    }
    return out;
}

double moment_order0(const MomentMap& m) {
    for (const auto& [a, v] : m) {
        int order = 0;
        for (int c : a) order += c;
        if (order == 0) return v;
    }
    return 0.0;
}

double moment_order1_norm(const MomentMap& m, int dim) {
    double s = 0.0;
    for (const auto& [a, v] : m) {
        int order = 0;
        for (int c : a) order += c;
        if (order == 1) s += v * v;
    }
    (void)dim;
    return std::sqrt(s);
}

double max_abs_moment_of_order(const MomentMap& m, int order) {
    double best = 0.0;
    for (const auto& [a, v] : m) {
        int o = 0;
        for (int c : a) o += c;
        if (o == order) best = std::max(best, std::fabs(v));
    }
    return best;
}

}  // namespace zs
