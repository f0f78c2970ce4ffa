#pragma once

#include <cstdint>
#include <string>

#include "zs/asymptotics.hpp"

namespace zs::cli {

// Exit codes of the batch front-end.
enum ExitCode : int {
    exit_ok = 0,
    exit_generic = 1,
    exit_budget_exhausted = 2,
    exit_contraction_violated = 3,
    exit_no_zero_state = 4,
    exit_inconsistent_classification = 5,
    exit_config_parse = 6
};

struct GridParams {
    double spacing = 0.1;       // core shell spacing
    double core_radius = 8.5;   // uniform-core extent (must cover supp K)
    double r_max = 34.0;        // cloud extent
    double tail_step = 0.05;    // log step beyond the core
    int n_polar = 2;            // direction rule (full solver mode, n = 3)
    int n_azimuth = 4;
};

struct RunConfig {
    int schema_version = 1;
    int dim = 3;
    PotentialSpec potential;
    GridParams grid;
    double delta = 0.0;  // 0 -> min(0.1 ||V||, contraction-target value)
    double contraction_target = 0.4;
    int budget = 24;
    double series_tol = 1e-4;
    std::string solver_mode = "auto";  // auto | radial | full
    double solver_tol = 0.0;           // 0 -> 10 * spacing
    double w_scale = 1.0;              // detuning knob for verify sweeps
    double tail_r_lo = 0.0, tail_r_hi = 0.0;  // 0 -> derived from the grid
    int tail_count = 24;
    double moment_tol = 0.0;  // 0 -> 10 h^2 int|V psi|
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out_dir = "out";
    // norms subcommand
    std::string norm_target = "potential";  // potential | kernel_a
    std::vector<std::pair<double, double>> norm_indices;
    // verify subcommand sweep sizes
    int verify_pairs = 100;
    int verify_expansion_pairs = 3000;
    int verify_probes = 16;
    long mc_samples = 400000;
};

RunConfig parse_config_text(const std::string& json_text);
RunConfig load_config(const std::string& path);
RunConfig preset(const std::string& name);  // radial3 | dipole3 | radial5
std::string preset_list();

int run_classify(const RunConfig& cfg);
int run_norms(const RunConfig& cfg);
int run_verify(const RunConfig& cfg);
int run_expand(const RunConfig& cfg);

}  // namespace zs::cli
