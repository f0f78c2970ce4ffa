#include <doctest.h>

#include "oracles.hpp"
#include "zs/potential.hpp"

using namespace zs;

namespace {

// numerical 3D Laplacian at a point, Richardson-extrapolated central stencil
double fd_laplacian(const std::function<double(const Vec&)>& f, const Vec& x, double h0 = 0.02) {
    auto stencil = [&](double h) {
        double s = -2.0 * x.dim * f(x);
        for (int a = 0; a < x.dim; ++a) {
            Vec xp = x, xm = x;
            xp[a] += h;
            xm[a] -= h;
            s += f(xp) + f(xm);
        }
        return s / (h * h);
    };
    double a0 = stencil(h0), a1 = stencil(h0 / 2.0);
    return (4.0 * a1 - a0) / 3.0;
}

RadialGrid pipeline_grid() { return make_core_tail_radial_grid(0.1, 8.55, 34.0, 0.05, 3); }

}  // namespace

TEST_CASE("inverse-design potentials are Delta psi / psi") {
    SUBCASE("radial family at the origin (n = 3)") {
        PotentialSpec spec;
        spec.kind = PotentialKind::inverse_design_radial;
        spec.dim = 3;
        CHECK(evaluate(spec, Vec{0.0, 0.0, 0.0}) == doctest::Approx(-3.0).epsilon(1e-12));
        auto psi = [](const Vec& p) { return std::pow(1.0 + p.norm2(), -0.5); };
        Vec x{0.3, -0.2, 0.5};
        CHECK(evaluate(spec, x) == doctest::Approx(fd_laplacian(psi, x) / psi(x)).epsilon(1e-5));
    }
    SUBCASE("dipole family (n = 3)") {
        PotentialSpec spec;
        spec.kind = PotentialKind::inverse_design_dipole;
        spec.dim = 3;
        CHECK(evaluate(spec, Vec{0.0, 0.0, 0.0}) == doctest::Approx(-15.0).epsilon(1e-12));
        auto psi = [](const Vec& p) { return p[0] * std::pow(1.0 + p.norm2(), -1.5); };
        Vec x{0.4, 0.1, -0.3};
        CHECK(evaluate(spec, x) == doctest::Approx(fd_laplacian(psi, x) / psi(x)).epsilon(1e-5));
    }
    SUBCASE("higher dimensions") {
        for (int n : {4, 5, 6}) {
            PotentialSpec spec;
            spec.kind = PotentialKind::inverse_design_radial;
            spec.dim = n;
            Vec x = Vec::zero(n);
            x[0] = 0.7;
            auto psi = [&](const Vec& p) { return std::pow(1.0 + p.norm2(), -0.5 * (n - 2)); };
            CHECK(evaluate(spec, x) == doctest::Approx(fd_laplacian(psi, x) / psi(x)).epsilon(1e-5));
        }
    }
    SUBCASE("zero-amplitude bump vanishes everywhere") {
        PotentialSpec spec;
        spec.kind = PotentialKind::compact_bump;
        spec.dim = 3;
        spec.bump_amplitude = 0.0;
        for (double r : {0.0, 0.5, 1.0, 3.0}) {
            Vec x{r, 0.0, 0.0};
            CHECK(evaluate(spec, x) == 0.0);
        }
    }
}

TEST_CASE("decompose certifies the remainder") {
    RadialGrid g = pipeline_grid();
    SUBCASE("zero potential is its own decomposition") {
        std::vector<double> z(g.size(), 0.0);
        Decomposition d = decompose(SampledFunction::on_radial(g, z), 0.5, 8);
        CHECK(d.measured_W_norm == 0.0);
        for (double v : d.W.values()) CHECK(v == 0.0);
        for (double v : d.K.values()) CHECK(v == 0.0);
    }
    SUBCASE("radial inverse-design potential at the default smallness") {
        PotentialSpec spec;
        spec.kind = PotentialKind::inverse_design_radial;
        spec.dim = 3;
        SampledFunction V = sample_radial(spec, g);
        double delta = default_delta(V, 0.4);
        Decomposition d = decompose(V, delta, 24, spec);
        CHECK(d.measured_W_norm <= delta);
        CHECK(d.contraction_C <= 0.4 * 1.0001);
        CHECK(d.rounds <= 24);
        // independent re-measurement through the lorentz module
        double remeasured = quasinorm(d.W, LorentzIndex::of(1.5, 1.0));
        CHECK(remeasured == doctest::Approx(d.measured_W_norm).epsilon(1e-12));
        // K is simple with exactly compact support
        int levels = 0;
        std::vector<double> sorted = d.K.values();
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            if (sorted[i] != 0.0 && (i == 0 || sorted[i] != sorted[i - 1])) ++levels;
        CHECK(levels == d.distinct_levels);
        CHECK(levels <= int(2.0 * d.clamp_level / d.quant_step) + 1);
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g.nodes()[i] > d.support_radius) CHECK(d.K.values()[i] == 0.0);
        // W + K reassembles V exactly
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(d.W.values()[i] + d.K.values()[i] == V.values()[i]);
    }
    SUBCASE("already-simple potentials are fixed points") {
        PotentialSpec spec;
        spec.kind = PotentialKind::compact_bump;
        spec.dim = 3;
        spec.bump_amplitude = 1.0;
        spec.bump_radius = 1.0;
        SampledFunction V = sample_radial(spec, g);
        Decomposition d = decompose(V, 0.37, 8, spec);
        CHECK(d.rounds == 1);
        CHECK(d.measured_W_norm == 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(d.W.values()[i] == 0.0);
            CHECK(d.K.values()[i] == V.values()[i]);
        }
    }
    SUBCASE("unreachable delta exhausts the budget") {
        PotentialSpec spec;
        spec.kind = PotentialKind::inverse_design_radial;
        spec.dim = 3;
        SampledFunction V = sample_radial(spec, g);
        CHECK_THROWS_AS(decompose(V, 1e-9, 4), Error);
    }
    SUBCASE("dipole potential also reaches contraction 0.4") {
        RadialGrid gd = make_core_tail_radial_grid(0.1, 16.55, 66.0, 0.05, 3);
        PotentialSpec spec;
        spec.kind = PotentialKind::inverse_design_dipole;
        spec.dim = 3;
        SampledFunction V = sample_radial(spec, gd);
        double delta = default_delta(V, 0.4);
        Decomposition d = decompose(V, delta, 24, spec);
        CHECK(d.measured_W_norm <= delta);
        CHECK(d.contraction_C <= 0.4 * 1.0001);
    }
}

TEST_CASE("moments of the oracle families") {
    SUBCASE("radial family: M_0 = -4 pi by the divergence theorem (n = 3)") {
        RadialGrid g = make_core_tail_radial_grid(0.05, 10.05, 120.0, 0.02, 3);
        PotentialSpec spec;
        spec.kind = PotentialKind::inverse_design_radial;
        spec.dim = 3;
        SampledFunction V = sample_radial(spec, g);
        std::vector<double> pv(g.size());
        for (std::size_t i = 0; i < pv.size(); ++i) pv[i] = psi_radial_family(3, g.nodes()[i]);
        SampledFunction psi = SampledFunction::on_radial(g, std::move(pv));
        MomentMap m = moments(V, psi, 2);
        // oracle: int Delta psi = lim 4 pi r^2 psi'(r), psi' = -r (1+r^2)^{-3/2}
        double r = 1e5;
        double oracle_m0 = 4.0 * M_PI * r * r * (-r * std::pow(1.0 + r * r, -1.5));
        CHECK(oracle_m0 == doctest::Approx(-4.0 * M_PI).epsilon(1e-8));
        CHECK(moment_order0(m) == doctest::Approx(-4.0 * M_PI).epsilon(2e-2));
        // odd moments vanish identically on the radial reduction
        CHECK(max_abs_moment_of_order(m, 1) == 0.0);
    }
    SUBCASE("radial family in n = 4") {
        RadialGrid g = make_core_tail_radial_grid(0.05, 10.05, 120.0, 0.02, 4);
        PotentialSpec spec;
        spec.kind = PotentialKind::inverse_design_radial;
        spec.dim = 4;
        SampledFunction V = sample_radial(spec, g);
        std::vector<double> pv(g.size());
        for (std::size_t i = 0; i < pv.size(); ++i) pv[i] = psi_radial_family(4, g.nodes()[i]);
        SampledFunction psi = SampledFunction::on_radial(g, std::move(pv));
        MomentMap m = moments(V, psi, 0);
        // psi = (1+r^2)^{-1}: lim omega_3 r^3 psi' = -2 omega_3 = -4 pi^2
        CHECK(moment_order0(m) == doctest::Approx(-4.0 * M_PI * M_PI).epsilon(2e-2));
    }
    SUBCASE("dipole family on a tensor grid") {
        TensorGrid g(0.15, 12.0, 3);
        PotentialSpec spec;
        spec.kind = PotentialKind::inverse_design_dipole;
        spec.dim = 3;
        SampledFunction V = sample_tensor(spec, g);
        std::vector<double> pv(g.size());
        for (std::size_t i = 0; i < pv.size(); ++i) pv[i] = psi_dipole_family(3, g.point(i));
        SampledFunction psi = SampledFunction::on_tensor(g, std::move(pv));
        MomentMap m = moments(V, psi, 1);
        // odd symmetry: exact zero by mirror-paired summation
        CHECK(moment_order0(m) == 0.0);
        // Beta-function oracle: -15 int y_1^2 (1+r^2)^{-7/2} = -4 pi
        double beta = oracle::integrate_half_line(
            [](double r) { return std::pow(r, 4.0) * std::pow(1.0 + r * r, -3.5); });
        double oracle_m1 = -15.0 * (4.0 * M_PI / 3.0) * beta;
        CHECK(oracle_m1 == doctest::Approx(-4.0 * M_PI).epsilon(1e-8));
        MultiIndex e1{1, 0, 0};
        CHECK(m.at(e1) == doctest::Approx(-4.0 * M_PI).epsilon(2e-2));
        // cross moments are odd in y_1 alone: zero up to roundoff (full-point
        // mirror pairing cancels bitwise only for point-odd integrands)
        CHECK(std::fabs(m.at(MultiIndex{0, 1, 0})) < 1e-12);
        CHECK(std::fabs(m.at(MultiIndex{0, 0, 1})) < 1e-12);
        // point-odd integrand: exact zero
        CHECK(moment_order0(m) == 0.0);
    }
    SUBCASE("zero state has zero moments") {
        RadialGrid g = pipeline_grid();
        PotentialSpec spec;
        spec.kind = PotentialKind::inverse_design_radial;
        spec.dim = 3;
        SampledFunction V = sample_radial(spec, g);
        std::vector<double> z(g.size(), 0.0);
        MomentMap m = moments(V, SampledFunction::on_radial(g, z), 2);
        for (const auto& [a, v] : m) CHECK(v == 0.0);
    }
    SUBCASE("grid mismatch rejected") {
        RadialGrid g1 = pipeline_grid();
        RadialGrid g2 = make_core_tail_radial_grid(0.2, 8.6, 34.0, 0.05, 3);
        PotentialSpec spec;
        spec.kind = PotentialKind::inverse_design_radial;
        spec.dim = 3;
        CHECK_THROWS_AS(moments(sample_radial(spec, g1), sample_radial(spec, g2), 1), Error);
    }
}

TEST_CASE("detuning moves the potential off the inverse-design identity") {
    PotentialSpec spec;
    spec.kind = PotentialKind::inverse_design_radial;
    spec.dim = 3;
    spec.scale = 1.1;
    CHECK(evaluate(spec, Vec{0.0, 0.0, 0.0}) == doctest::Approx(-3.3));
}
