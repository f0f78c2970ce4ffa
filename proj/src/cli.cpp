#include "zs/cli.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace zs::cli {

using nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

PotentialKind kind_from_string(const std::string& s) {
    if (s == "inverse_design_radial") return PotentialKind::inverse_design_radial;
    if (s == "inverse_design_dipole") return PotentialKind::inverse_design_dipole;
    if (s == "compact_bump") return PotentialKind::compact_bump;
    if (s == "custom_samples") return PotentialKind::custom_samples;
    fail(ErrorCode::config_parse, "unknown potential kind: " + s);
}

std::string kind_to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::inverse_design_radial: return "inverse_design_radial";
        case PotentialKind::inverse_design_dipole: return "inverse_design_dipole";
        case PotentialKind::compact_bump: return "compact_bump";
        case PotentialKind::custom_samples: return "custom_samples";
    }
    return "?";
}

class StopWatch {
public:
    StopWatch() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

void set_threads(const RunConfig& cfg) {
    int n = cfg.threads;
    if (const char* env = std::getenv("ZS_THREADS")) n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
}

struct Pipeline {
    RunConfig cfg;
    RadialGrid grid;
    SampledFunction V;
    double delta = 0.0;
    Decomposition dec;
    bool full_mode = false;
    std::unique_ptr<GreensEvaluator> ev;
};

Pipeline build_pipeline(const RunConfig& cfg, bool with_evaluator) {
    RadialGrid grid = make_core_tail_radial_grid(cfg.grid.spacing, cfg.grid.core_radius,
                                                 cfg.grid.r_max, cfg.grid.tail_step, cfg.dim);
    SampledFunction V = sample_radial(cfg.potential, grid);
    double delta = cfg.delta > 0.0 ? cfg.delta : default_delta(V, cfg.contraction_target);
    Decomposition dec = decompose(V, delta, cfg.budget, cfg.potential);
    if (cfg.w_scale != 1.0) {
        std::vector<double> wv = dec.W.values();
        for (double& v : wv) v *= cfg.w_scale;
        dec.W = SampledFunction::on_radial(grid, std::move(wv));
        dec.measured_W_norm =
            quasinorm_checked(dec.W, LorentzIndex::of(cfg.dim / 2.0, 1.0)).value;
        dec.contraction_C = contraction_constant(cfg.dim, dec.measured_W_norm);
    }
    bool full = (cfg.solver_mode == "full") || (cfg.solver_mode == "auto" && cfg.dim == 3);
    if (full && cfg.dim != 3) fail(ErrorCode::invalid_range, "full solver mode is n = 3 only");

    Pipeline p{cfg, grid, std::move(V), delta, std::move(dec), full, nullptr};
    if (with_evaluator) {
        Cloud cloud = full ? Cloud::shells_from(p.dec.W, DirectionSet::product_rule(
                                                             cfg.grid.n_polar, cfg.grid.n_azimuth))
                           : Cloud::radial_from(p.dec.W);
        p.ev = std::make_unique<GreensEvaluator>(std::move(cloud),
                                                 full ? KernelScheme::spectral : KernelScheme::punctured,
                                                 p.dec.measured_W_norm, cfg.series_tol);
    }
    return p;
}

ordered_json config_echo(const RunConfig& cfg) {
    ordered_json j;
    j["schema_version"] = cfg.schema_version;
    j["dim"] = cfg.dim;
    j["potential"] = {{"kind", kind_to_string(cfg.potential.kind)},
                      {"scale", cfg.potential.scale},
                      {"bump_amplitude", cfg.potential.bump_amplitude},
                      {"bump_radius", cfg.potential.bump_radius}};
    j["grid"] = {{"spacing", cfg.grid.spacing},       {"core_radius", cfg.grid.core_radius},
                 {"r_max", cfg.grid.r_max},           {"tail_step", cfg.grid.tail_step},
                 {"n_polar", cfg.grid.n_polar},       {"n_azimuth", cfg.grid.n_azimuth}};
    j["delta"] = cfg.delta;
    j["contraction_target"] = cfg.contraction_target;
    j["budget"] = cfg.budget;
    j["series_tol"] = cfg.series_tol;
    j["solver_mode"] = cfg.solver_mode;
    j["solver_tol"] = cfg.solver_tol;
    j["w_scale"] = cfg.w_scale;
    j["tail"] = {{"r_lo", cfg.tail_r_lo}, {"r_hi", cfg.tail_r_hi}, {"count", cfg.tail_count}};
    j["moment_tol"] = cfg.moment_tol;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::internal, "cannot write " + path);
    out << text;
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::budget_exhausted: return exit_budget_exhausted;
        case ErrorCode::contraction_violated: return exit_contraction_violated;
        case ErrorCode::no_zero_state: return exit_no_zero_state;
        case ErrorCode::inconsistent_classification: return exit_inconsistent_classification;
        case ErrorCode::config_parse: return exit_config_parse;
        default: return exit_generic;
    }
}

std::string moment_key(const MultiIndex& a) {
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorCode::config_parse, std::string("config parse: ") + e.what());
    }
    RunConfig cfg;
    try {
        cfg.dim = j.value("dim", 3);
        if (j.contains("potential")) {
            const auto& p = j["potential"];
            cfg.potential.kind = kind_from_string(p.value("kind", std::string("inverse_design_radial")));
            cfg.potential.scale = p.value("scale", 1.0);
            cfg.potential.bump_amplitude = p.value("bump_amplitude", 0.0);
            cfg.potential.bump_radius = p.value("bump_radius", 1.0);
            if (p.contains("custom_radii")) {
                cfg.potential.custom_radii = p["custom_radii"].get<std::vector<double>>();
                cfg.potential.custom_values = p["custom_values"].get<std::vector<double>>();
            }
        }
        cfg.potential.dim = cfg.dim;
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            cfg.grid.spacing = g.value("spacing", cfg.grid.spacing);
            cfg.grid.core_radius = g.value("core_radius", cfg.grid.core_radius);
            cfg.grid.r_max = g.value("r_max", cfg.grid.r_max);
            cfg.grid.tail_step = g.value("tail_step", cfg.grid.tail_step);
            cfg.grid.n_polar = g.value("n_polar", cfg.grid.n_polar);
            cfg.grid.n_azimuth = g.value("n_azimuth", cfg.grid.n_azimuth);
        }
        cfg.delta = j.value("delta", 0.0);
        cfg.contraction_target = j.value("contraction_target", 0.4);
        cfg.budget = j.value("budget", 24);
        cfg.series_tol = j.value("series_tol", 1e-4);
        cfg.solver_mode = j.value("solver_mode", std::string("auto"));
        cfg.solver_tol = j.value("solver_tol", 0.0);
        cfg.w_scale = j.value("w_scale", 1.0);
        if (j.contains("tail")) {
            cfg.tail_r_lo = j["tail"].value("r_lo", 0.0);
            cfg.tail_r_hi = j["tail"].value("r_hi", 0.0);
            cfg.tail_count = j["tail"].value("count", 24);
        }
        cfg.moment_tol = j.value("moment_tol", 0.0);
        cfg.seed = j.value("seed", std::uint64_t{1});
        cfg.threads = j.value("threads", 0);
        cfg.out_dir = j.value("out_dir", std::string("out"));
        cfg.norm_target = j.value("norm_target", std::string("potential"));
        if (j.contains("norm_indices"))
            for (const auto& row : j["norm_indices"]) {
                double p = row.at(0).get<double>();
                double q = row.at(1).is_string() ? std::numeric_limits<double>::infinity()
                                                 : row.at(1).get<double>();
                cfg.norm_indices.emplace_back(p, q);
            }
        cfg.verify_pairs = j.value("verify_pairs", 100);
        cfg.verify_expansion_pairs = j.value("verify_expansion_pairs", 3000);
        cfg.verify_probes = j.value("verify_probes", 16);
        cfg.mc_samples = j.value("mc_samples", 400000L);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorCode::config_parse, std::string("config field: ") + e.what());
    }
    if (cfg.dim < 3) fail(ErrorCode::config_parse, "config: dim >= 3 required");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::config_parse, "cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

RunConfig preset(const std::string& name) {
    if (name == "radial3")
        return parse_config_text(R"({
            "dim": 3,
            "potential": {"kind": "inverse_design_radial"},
            "grid": {"spacing": 0.1, "core_radius": 8.55, "r_max": 34.0, "tail_step": 0.05,
                     "n_polar": 2, "n_azimuth": 4},
            "solver_mode": "full",
            "seed": 1
        })");
    if (name == "dipole3")
        return parse_config_text(R"({
            "dim": 3,
            "potential": {"kind": "inverse_design_dipole"},
            "grid": {"spacing": 0.1, "core_radius": 16.55, "r_max": 66.0, "tail_step": 0.05,
                     "n_polar": 2, "n_azimuth": 4},
            "solver_mode": "full",
            "seed": 1
        })");
    if (name == "radial5")
        return parse_config_text(R"({
            "dim": 5,
            "potential": {"kind": "inverse_design_radial"},
            "grid": {"spacing": 0.1, "core_radius": 32.55, "r_max": 130.0, "tail_step": 0.05},
            "solver_mode": "radial",
            "seed": 1
        })");
    fail(ErrorCode::config_parse, "unknown preset: " + name + " (available: " + preset_list() + ")");
}

std::string preset_list() { return "radial3, dipole3, radial5"; }

int run_classify(const RunConfig& cfg) {
    set_threads(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    std::ostringstream log;
    StopWatch total;
    ordered_json report;
    report["schema_version"] = 1;
    report["command"] = "classify";
    report["effective_config"] = config_echo(cfg);

    try {
        StopWatch t_setup;
        Pipeline p = build_pipeline(cfg, /*with_evaluator=*/true);
        log << "setup_seconds " << t_setup.seconds() << "\n";

        double vnorm = quasinorm_checked(p.V, LorentzIndex::of(cfg.dim / 2.0, 1.0)).value;
        report["norms"] = {{"V_n2_1", vnorm}, {"W_n2_1", p.dec.measured_W_norm}};
        report["decomposition"] = {{"delta", p.delta},
                                   {"measured_W_norm", p.dec.measured_W_norm},
                                   {"contraction_C", p.dec.contraction_C},
                                   {"support_radius", p.dec.support_radius},
                                   {"clamp_level", p.dec.clamp_level},
                                   {"quant_step", p.dec.quant_step},
                                   {"distinct_levels", p.dec.distinct_levels},
                                   {"rounds", p.dec.rounds}};
        report["greens"] = {{"scheme", p.full_mode ? "spectral" : "radial"},
                            {"cloud_nodes", p.ev->cloud().size()},
                            {"J", p.ev->truncation_order()},
                            {"C_measured", p.ev->c_measured()},
                            {"C_bound", p.ev->c_bound()},
                            {"tail_bound", p.ev->tail_bound()}};

        StopWatch t_asm;
        CompactOperator op = assemble(p.dec, *p.ev);
        log << "assemble_seconds " << t_asm.seconds() << "\n";
        double tol = cfg.solver_tol > 0.0 ? cfg.solver_tol : 10.0 * cfg.grid.spacing;

        StopWatch t_svd;
        double sigma_min = 0.0;
        int multiplicity = 0;
        auto z = solve(op, tol, &sigma_min, &multiplicity);
        log << "svd_seconds " << t_svd.seconds() << "\n";
        report["solve"] = {{"support_nodes", op.support_nodes.size()},
                           {"tol", tol},
                           {"sigma_min", sigma_min},
                           {"multiplicity", multiplicity},
                           {"found", z.has_value()}};
        if (!z) {
            report["status"] = "no-zero-state";
            write_text(cfg.out_dir + "/report.json", report.dump(2) + "\n");
            log << "total_seconds " << total.seconds() << "\n";
            write_text(cfg.out_dir + "/run.log", log.str());
            return exit_no_zero_state;
        }

        StopWatch t_post;
        double r_lo = cfg.tail_r_lo > 0 ? cfg.tail_r_lo : 1.3 * p.dec.support_radius;
        double r_hi = cfg.tail_r_hi > 0 ? cfg.tail_r_hi : 13.0 * p.dec.support_radius;
        std::vector<double> radii;
        for (int i = 0; i < cfg.tail_count; ++i)
            radii.push_back(r_lo * std::pow(r_hi / r_lo, double(i) / (cfg.tail_count - 1)));
        TailSamples tail = tail_profile(*z, p.dec, *p.ev, radii);
        MomentMap moms = state_moments(*z, *p.ev, 2);
        double scale = state_abs_vpsi_integral(*z, *p.ev);
        double mtol = cfg.moment_tol > 0.0
                          ? cfg.moment_tol
                          : 10.0 * cfg.grid.spacing * cfg.grid.spacing * scale;
        Classification cls = classify(tail, moms, cfg.dim, mtol);
        TailIntegral l2 = state_l2(*z, *p.ev);
        log << "post_seconds " << t_post.seconds() << "\n";

        double kap = fundamental_solution_constant(cfg.dim);
        double m0 = moment_order0(moms);
        ordered_json jm;
        for (const auto& [a, v] : moms) jm[moment_key(a)] = v;
        report["classification"] = {
            {"tag", cls.tag == StateTag::resonance ? "resonance" : "eigenfunction"},
            {"decay_class", cls.decay_class},
            {"vanishing_order", cls.vanishing_order},
            {"A_limit", cls.A_limit},
            {"limit_fit", {{"A", cls.limit_fit.A}, {"b", cls.limit_fit.slope_b}, {"rms", cls.limit_fit.rms}, {"n_used", cls.limit_fit.n_used}}},
            {"decay_fit", {{"alpha", cls.decay_fit.alpha}, {"r_squared", cls.decay_fit.r_squared}, {"n_used", cls.decay_fit.n_used}}},
            {"moment_tol", mtol},
            {"moments", jm},
            {"consistent", cls.consistent}};
        report["checks"] = {{"limit_identity",
                             {{"lhs_A_limit", cls.A_limit},
                              {"rhs_minus_kappa_M0", -kap * m0},
                              {"note", "Both sides of lim r^{n-2} psi = -kappa_n int V psi"}}},
                            {"l2", {{"value", l2.value}, {"tail_convergent", l2.tail_convergent}}}};

        if (cfg.dim == 3) {
            double hres = std::max(0.25, 2.0 * cfg.grid.spacing);
            TensorGrid rg(hres, 2.4, 3);
            SampledFunction psi_t = extend_to_tensor(*z, p.dec, *p.ev, rg);
            SampledFunction v_t = sample_tensor(cfg.potential, rg);
            report["checks"]["residual"] = {{"h", hres},
                                            {"value", laplacian_residual(psi_t, v_t)}};
        }

        // tail CSV: r, psi_max, psi_avg, r^{n-2} psi_avg
        std::ostringstream csv;
        csv << "r,psi_max,psi_avg,r_pow_psi_avg\n";
        for (std::size_t i = 0; i < tail.r.size(); ++i)
            csv << fmt_double(tail.r[i]) << "," << fmt_double(tail.max_abs[i]) << ","
                << fmt_double(tail.avg[i]) << ","
                << fmt_double(std::pow(tail.r[i], cfg.dim - 2.0) * tail.avg[i]) << "\n";
        write_text(cfg.out_dir + "/tail_profile.csv", csv.str());

        report["status"] = cls.consistent ? "ok" : "inconsistent-classification";
        write_text(cfg.out_dir + "/report.json", report.dump(2) + "\n");
        log << "total_seconds " << total.seconds() << "\n";
        write_text(cfg.out_dir + "/run.log", log.str());
        return cls.consistent ? exit_ok : exit_inconsistent_classification;
    } catch (const Error& e) {
        report["status"] = "error";
        report["error"] = e.what();
        write_text(cfg.out_dir + "/report.json", report.dump(2) + "\n");
        write_text(cfg.out_dir + "/run.log", log.str());
        return exit_code_for(e);
    }
}

int run_norms(const RunConfig& cfg) {
    set_threads(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    try {
        SampledFunction f = [&]() -> SampledFunction {
            if (cfg.norm_target == "kernel_a") {
                RadialGrid g = make_log_radial_grid(1e-3, 1e3, 4096, cfg.dim);
                std::vector<double> v(g.size());
                for (std::size_t i = 0; i < v.size(); ++i)
                    v[i] = std::pow(g.nodes()[i], 2.0 - cfg.dim);
                return SampledFunction::on_radial(g, std::move(v));
            }
            RadialGrid g = make_core_tail_radial_grid(cfg.grid.spacing, cfg.grid.core_radius,
                                                      cfg.grid.r_max, cfg.grid.tail_step, cfg.dim);
            return sample_radial(cfg.potential, g);
        }();
        auto indices = cfg.norm_indices;
        if (indices.empty()) {
            if (cfg.norm_target == "kernel_a") {
                indices = {{cfg.dim * 1.0, std::numeric_limits<double>::infinity()},
                           {cfg.dim * 1.0, cfg.dim * 1.0}};
            } else {
                indices = {{cfg.dim / 2.0, 1.0}};
            }
        }
        std::ostringstream csv;
        csv << "p,q,value,status\n";
        std::printf("%-10s %-10s %-22s %s\n", "p", "q", "value", "status");
        for (auto [p, q] : indices) {
            NormResult r = quasinorm_checked(f, LorentzIndex::of(p, q));
            const char* st = r.status == NormStatus::ok
                                 ? "ok"
                                 : (r.status == NormStatus::divergent ? "divergent" : "overflow");
            std::printf("%-10g %-10g %-22.12g %s\n", p, q, r.value, st);
            csv << fmt_double(p) << "," << (std::isinf(q) ? "inf" : fmt_double(q)) << ","
                << fmt_double(r.value) << "," << st << "\n";
        }
        write_text(cfg.out_dir + "/norms.csv", csv.str());
        return exit_ok;
    } catch (const Error& e) {
        std::fprintf(stderr, "norms: %s\n", e.what());
        return exit_code_for(e);
    }
}

int run_verify(const RunConfig& cfg) {
    set_threads(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    try {
        Pipeline p = build_pipeline(cfg, /*with_evaluator=*/false);
        if (p.dec.contraction_C >= 1.0)
            fail(ErrorCode::contraction_violated,
                 "verify: scaled W gives contraction constant >= 1");

        Rng rng(cfg.seed);
        int violations = 0;
        auto vecstr = [](const Vec& v) {
            std::string s;
            for (int i = 0; i < v.dim; ++i) {
                if (i) s += ";";
                s += fmt_double(v[i]);
            }
            return s;
        };

        // kernel-sandwich inequality sweep
        {
            Cloud cloud = (cfg.dim == 3)
                              ? Cloud::shells_from(p.dec.W, DirectionSet::product_rule(4, 8))
                              : Cloud::radial_from(p.dec.W);
            if (cfg.dim != 3)
                fail(ErrorCode::invalid_range, "verify: gwg sweep needs n = 3 (full cloud)");
            std::ostringstream csv;
            csv << "x,y,lhs,rhs,margin\n";
            for (int i = 0; i < cfg.verify_pairs; ++i) {
                double sep = rng.log_uniform(0.1, 20.0);
                Vec c = rng.uniform(0.0, 4.0) * rng.direction(3);
                Vec d = rng.direction(3);
                Vec x = c + (0.5 * sep) * d;
                Vec y = c - (0.5 * sep) * d;
                BoundPair b = gwg_bound(cloud, x, y, p.dec.measured_W_norm);
                // Monte Carlo cross-check of the quadrature lhs
                if (cfg.mc_samples > 0 && p.dec.source) {
                    double rad = p.grid.r_max();
                    KahanSum acc;
                    long nsamp = cfg.mc_samples;
                    for (long s = 0; s < nsamp; ++s) {
                        // uniform in the ball of radius rad
                        Vec z = (rad * std::cbrt(rng.uniform())) * rng.direction(3);
                        double rr = z.norm();
                        double w = cfg.w_scale * (evaluate_radial(*p.dec.source, rr) -
                                                  p.dec.k_at(rr, evaluate_radial(*p.dec.source, rr)));
                        if (w == 0.0) continue;
                        double val = std::pow(dist(x, z), 2.0 - cfg.dim) * std::fabs(w) *
                                     std::pow(dist(z, y), 2.0 - cfg.dim);
                        acc.add(val);
                    }
                    double vol = unit_ball_volume(3) * rad * rad * rad;
                    double mc = vol * acc.value() / double(nsamp);
                    if (mc > b.rhs * (1.0 + 1e-9)) ++violations;
                }
                if (b.lhs > b.rhs * (1.0 + 1e-9)) ++violations;
                csv << vecstr(x) << "," << vecstr(y) << "," << fmt_double(b.lhs) << ","
                    << fmt_double(b.rhs) << "," << fmt_double(b.rhs - b.lhs) << "\n";
            }
            write_text(cfg.out_dir + "/gwg_sweep.csv", csv.str());
        }

        // expansion-error sweep over the three regimes
        {
            std::ostringstream csv;
            csv << "x,y,lhs,rhs,margin\n";
            int per = cfg.verify_expansion_pairs / 3;
            for (int regime = 0; regime < 3; ++regime) {
                for (int i = 0; i < per; ++i) {
                    int N = (i % 3);
                    double rx = rng.log_uniform(0.1, 10.0);
                    double u = regime == 0 ? rng.log_uniform(1e-3, 0.5)
                               : regime == 1 ? rng.uniform(0.5, 2.0)
                                             : rng.log_uniform(2.0, 1e3);
                    Vec x = rx * rng.direction(cfg.dim);
                    Vec y = (i % 97 == 0) ? Vec::zero(cfg.dim) : (u * rx) * rng.direction(cfg.dim);
                    if (dist(x, y) <= 1e-12) continue;
                    BoundPair b = expansion_error(x, y, N, cfg.dim);
                    if (y.norm() == 0.0 && b.lhs != 0.0) ++violations;
                    if (b.lhs > b.rhs * (1.0 + 1e-9) && y.norm() > 0.0) ++violations;
                    csv << vecstr(x) << "," << vecstr(y) << "," << fmt_double(b.lhs) << ","
                        << fmt_double(b.rhs) << "," << fmt_double(b.rhs - b.lhs) << "\n";
                }
            }
            write_text(cfg.out_dir + "/expansion_sweep.csv", csv.str());
        }

        // tail-operator contraction probes
        {
            std::ostringstream csv;
            csv << "alpha,N,R,estimate\n";
            double R = p.dec.support_radius;
            for (int N = 0; N <= 1; ++N)
                for (int da = 0; da <= 1; ++da) {
                    double alpha = N + cfg.dim - 2 + da;
                    double est = contraction_estimate(p.dec, alpha, N, R, cfg.verify_probes, cfg.seed);
                    if (est >= 1.0) ++violations;
                    csv << fmt_double(alpha) << "," << N << "," << fmt_double(R) << ","
                        << fmt_double(est) << "\n";
                }
            write_text(cfg.out_dir + "/contraction.csv", csv.str());
        }

        std::printf("verify: %d violations\n", violations);
        return violations == 0 ? exit_ok : exit_generic;
    } catch (const Error& e) {
        std::fprintf(stderr, "verify: %s\n", e.what());
        return exit_code_for(e);
    }
}

int run_expand(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    try {
        MultipoleExpansion me = multipole_coeffs(2, cfg.dim);
        std::ostringstream csv;
        csv << "n,k,l,c_kl\n";
        std::printf("dim %d Taylor coefficients d_k of (1+s)^{-(n-2)/2}:\n", cfg.dim);
        for (int k = 0; k <= 2; ++k) std::printf("  d_%d = %.12g\n", k, me.d[std::size_t(k)]);
        std::printf("table c_kl = d_k binom(k,l) (-2)^{k-l}:\n");
        for (int k = 0; k <= 2; ++k)
            for (int l = 0; l <= k; ++l) {
                std::printf("  c_%d%d = %.12g\n", k, l, me.c[std::size_t(k)][std::size_t(l)]);
                csv << cfg.dim << "," << k << "," << l << ","
                    << fmt_double(me.c[std::size_t(k)][std::size_t(l)]) << "\n";
            }
        write_text(cfg.out_dir + "/expansion.csv", csv.str());
        return exit_ok;
    } catch (const Error& e) {
        std::fprintf(stderr, "expand: %s\n", e.what());
        return exit_code_for(e);
    }
}

}  // namespace zs::cli
