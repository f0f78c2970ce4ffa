#include "zs/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace zs {

LimitFit limit_extract(const TailSamples& tail, int dim) {
    if (tail.r.size() < 8)
        fail(ErrorCode::insufficient_tail, "limit_extract: need at least 8 tail radii");
    double r_hi = tail.r.back();
    double cutoff = r_hi / std::sqrt(10.0);
    // least squares for A(r) = A + b/r on the outer half-decade
    double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
    int used = 0;
    for (std::size_t i = 0; i < tail.r.size(); ++i) {
        if (tail.r[i] < cutoff) continue;
        double x = 1.0 / tail.r[i];
        double y = std::pow(tail.r[i], dim - 2.0) * tail.avg[i];
        s1 += 1;
        sx += x;
        sxx += x * x;
        sy += y;
        sxy += x * y;
        ++used;
    }
    if (used < 3) fail(ErrorCode::insufficient_tail, "limit_extract: outer half-decade too thin");
    double det = s1 * sxx - sx * sx;
    LimitFit f;
    f.A = (sxx * sy - sx * sxy) / det;
    f.slope_b = (s1 * sxy - sx * sy) / det;
    f.n_used = used;
    double rss = 0;
    for (std::size_t i = 0; i < tail.r.size(); ++i) {
        if (tail.r[i] < cutoff) continue;
        double y = std::pow(tail.r[i], dim - 2.0) * tail.avg[i];
        double pred = f.A + f.slope_b / tail.r[i];
        rss += (y - pred) * (y - pred);
    }
    f.rms = std::sqrt(rss / used);
    return f;
}

DecayFit decay_exponent(const TailSamples& tail) {
    if (tail.r.size() < 3) fail(ErrorCode::insufficient_tail, "decay_exponent: too few samples");
    double r_max = tail.r.back();
    double lo = r_max / 4.0, hi = 0.9 * r_max;
    double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0, syy = 0;
    int used = 0;
    for (std::size_t i = 0; i < tail.r.size(); ++i) {
        if (tail.r[i] < lo || tail.r[i] > hi) continue;
        if (!(tail.max_abs[i] > 1e-250))
            fail(ErrorCode::degenerate_fit, "decay_exponent: samples underflow in the fit window");
        double x = std::log(tail.r[i]);
        double y = std::log(tail.max_abs[i]);
        s1 += 1;
        sx += x;
        sxx += x * x;
        sy += y;
        sxy += x * y;
        syy += y * y;
        ++used;
    }
    if (used < 3) fail(ErrorCode::degenerate_fit, "decay_exponent: fit window too thin");
    double det = s1 * sxx - sx * sx;
    double slope = (s1 * sxy - sx * sy) / det;
    DecayFit f;
    f.alpha = -slope;
    f.n_used = used;
    double cov = s1 * sxy - sx * sy;
    double vx = s1 * sxx - sx * sx;
    double vy = s1 * syy - sy * sy;
    f.r_squared = (vy > 0) ? (cov * cov) / (vx * vy) : 1.0;
    return f;
}

Classification classify(const TailSamples& tail, const MomentMap& moments, int dim,
                        double moment_tol) {
    Classification c;
    c.moments = moments;
    c.moment_tol = moment_tol;
    c.limit_fit = limit_extract(tail, dim);
    c.A_limit = c.limit_fit.A;
    c.decay_fit = decay_exponent(tail);

    int max_order_present = 0;
    for (const auto& [a, v] : moments) {
        int o = 0;
        for (int q : a) o += q;
        max_order_present = std::max(max_order_present, o);
    }
    c.vanishing_order = -1;
    for (int o = 0; o <= max_order_present; ++o) {
        if (max_abs_moment_of_order(moments, o) <= moment_tol)
            c.vanishing_order = o;
        else
            break;
    }

    if (dim >= 5)
        c.tag = StateTag::eigenfunction;
    else
        c.tag = (c.vanishing_order < 0) ? StateTag::resonance : StateTag::eigenfunction;
    c.decay_class = dim - 2 + (c.vanishing_order + 1);
    c.consistent = std::fabs(c.decay_fit.alpha - c.decay_class) <= 0.3;
    return c;
}

MultipoleExpansion multipole_coeffs(int N, int dim) {
    if (N < 0 || N > 2 || dim < 3) fail(ErrorCode::invalid_range, "multipole_coeffs: N in {0,1,2}, dim >= 3");
    MultipoleExpansion me;
    me.order = N;
    me.dim = dim;
    const double m = 0.5 * (dim - 2);
    // d_k = (-1)^k binom(m+k-1, k)
    for (int k = 0; k <= 2; ++k) {
        double b = 1.0;
        for (int i = 1; i <= k; ++i) b *= (m + k - i) / i;
        me.d[static_cast<std::size_t>(k)] = ((k % 2) ? -1.0 : 1.0) * b;
    }
    for (int k = 0; k <= 2; ++k)
        for (int l = 0; l <= k; ++l) {
            double binom = (k == 2 && l == 1) ? 2.0 : 1.0;
            me.c[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
                me.d[static_cast<std::size_t>(k)] * binom * std::pow(-2.0, k - l);
        }
    return me;
}

double multipole_sum(const MultipoleExpansion& me, const Vec& x, const Vec& y) {
    const int n = me.dim;
    const double rx2 = x.norm2();
    const double rx = std::sqrt(rx2);
    if (rx == 0.0) fail(ErrorCode::coincident_points, "multipole_sum: x must be nonzero");
    const double ry2 = y.norm2();
    const double xy = dot(x, y);
    double sum = 0.0;
    for (int k = 0; k <= me.order; ++k)
        for (int l = 0; l <= k && k + l <= me.order; ++l) {
            // c_kl |y|^{2l} (x.y)^{k-l} / |x|^{n-2+2k}
            double term = me.c[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
            for (int i = 0; i < l; ++i) term *= ry2;
            for (int i = 0; i < k - l; ++i) term *= xy;
            term *= std::pow(rx, -(n - 2.0 + 2.0 * k));
            sum += term;
        }
    return sum;
}

const double kExpansionBoundConstant = 0.0;  // placeholder, frozen after calibration

BoundPair expansion_error(const Vec& x, const Vec& y, int N, int dim) {
    double rx = x.norm();
    if (rx == 0.0 || dist(x, y) <= 0.0)
        fail(ErrorCode::coincident_points, "expansion_error: need x != 0 and x != y");
    MultipoleExpansion me = multipole_coeffs(N, dim);
    double bare = std::pow(dist(x, y), 2.0 - dim);
    double u = y.norm() / rx;
    BoundPair out;
    out.lhs = std::fabs(bare - multipole_sum(me, x, y));
    out.rhs = kExpansionBoundConstant * bare *
              (std::pow(u, N + 1.0) + std::pow(u, N + dim - 2.0));
    return out;
}

double contraction_estimate(const Decomposition& dec, double alpha, int N, double R,
                            int probe_count, std::uint64_t seed) {
    const int n = dec.dim();
    if (!(R > 0.0) || probe_count < 1)
        fail(ErrorCode::invalid_range, "contraction_estimate: R > 0, probe_count >= 1");
    MultipoleExpansion me = multipole_coeffs(N, n);
    const double kap = fundamental_solution_constant(n);

    Cloud cloud = (n == 3) ? Cloud::shells_from(dec.W, DirectionSet::product_rule(4, 8))
                           : Cloud::radial_from(dec.W);
    std::vector<std::size_t> tail_nodes;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        if (cloud.radii()[i] >= R && cloud.w_values()[i] != 0.0) tail_nodes.push_back(i);
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        if (cloud.radii()[i] >= R) targets.push_back(i);
    if (tail_nodes.empty() || targets.empty()) return 0.0;

    Rng rng(seed);
    double worst = 0.0;
    for (int pr = 0; pr < probe_count; ++pr) {
        Vec e1 = rng.direction(n), e2 = rng.direction(n);
        double a1 = rng.uniform(-0.3, 0.3), a2 = rng.uniform(0.0, 0.3);
        auto angular = [&](std::size_t node) {
            if (cloud.kind() == CloudKind::radial) return 1.0;
            Vec d = (1.0 / cloud.radii()[node]) * cloud.points()[node];
            return 1.0 + a1 * dot(d, e1) + a2 * dot(d, e2) * dot(d, e2);
        };
        std::vector<double> phi(cloud.size(), 0.0);
        double phi_norm = 0.0;
        for (std::size_t i : tail_nodes) {
            phi[i] = std::pow(cloud.radii()[i], -alpha) * angular(i);
            phi_norm = std::max(phi_norm, std::pow(cloud.radii()[i], alpha) * std::fabs(phi[i]));
        }
        double s_norm = 0.0;
        for (std::size_t t : targets) {
            Vec xt = cloud.point(t);
            KahanSum acc;
            for (std::size_t k : tail_nodes) {
                double diff;
                if (cloud.kind() == CloudKind::radial) {
                    // exact angular average over the source sphere:
                    // <mu^j> = 0 (odd), 1 (j=0), 1/n (j=2); <bare> = max(r,s)^{2-n}
                    double rt = cloud.radii()[t], rk = cloud.radii()[k];
                    double avg_sum = 0.0;
                    for (int kk = 0; kk <= me.order; ++kk)
                        for (int ll = 0; ll <= kk && kk + ll <= me.order; ++ll) {
                            int j = kk - ll;
                            if (j % 2) continue;
                            double mom = (j == 0) ? 1.0 : 1.0 / n;
                            double term = me.c[static_cast<std::size_t>(kk)][static_cast<std::size_t>(ll)] * mom;
                            for (int i = 0; i < ll; ++i) term *= rk * rk;
                            for (int i = 0; i < j; ++i) term *= rt * rk;
                            term *= std::pow(rt, -(n - 2.0 + 2.0 * kk));
                            avg_sum += term;
                        }
                    diff = avg_sum - std::pow(std::max(rt, rk), 2.0 - n);
                } else {
                    double bare;
                    if (k == t) {
                        double a = cloud.ball_radius(k);
                        bare = unit_sphere_area(n) * a * a / (2.0 * cloud.weights()[k]);
                    } else {
                        bare = std::pow(dist(xt, cloud.points()[k]), 2.0 - n);
                    }
                    diff = multipole_sum(me, xt, cloud.point(k)) - bare;
                }
                acc.add(diff * cloud.w_values()[k] * phi[k] * cloud.weights()[k]);
            }
            double val = kap * acc.value();
            s_norm = std::max(s_norm, std::pow(cloud.radii()[t], alpha) * std::fabs(val));
        }
        if (phi_norm > 0.0) worst = std::max(worst, s_norm / phi_norm);
    }
    return worst;
}

}  // namespace zs
