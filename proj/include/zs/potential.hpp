#pragma once

#include <map>
#include <optional>
#include <vector>

#include "zs/lorentz.hpp"

namespace zs {

// Fundamental-solution constant: -Delta (kappa_n |x|^{-(n-2)}) = delta_0,
// kappa_n = 1 / ((n-2) omega_{n-1}).  Equals 1/(4 pi) for n = 3.
inline double fundamental_solution_constant(int dim) {
    return 1.0 / ((dim - 2) * unit_sphere_area(dim));
}

enum class PotentialKind { inverse_design_radial, inverse_design_dipole, compact_bump, custom_samples };

// Potential catalogue.  The inverse-design families come from choosing the
// state first and setting V = (Delta psi)/psi:
//   radial: psi = (1+r^2)^{-(n-2)/2}  ->  V = -n(n-2)/(1+r^2)^2
//   dipole: psi = x_1 (1+r^2)^{-n/2}  ->  V = -n(n+2)/(1+r^2)^2
// `scale` multiplies V (detuning knob; the closed-form state is exact only
// at scale = 1).
struct PotentialSpec {
    PotentialKind kind = PotentialKind::inverse_design_radial;
    int dim = 3;
    double scale = 1.0;
    double bump_amplitude = 0.0;  // compact_bump
    double bump_radius = 1.0;
    std::vector<double> custom_radii;  // custom_samples (radial profile)
    std::vector<double> custom_values;

    bool is_radial_profile() const { return true; }  // the whole catalogue is radial
};

double evaluate(const PotentialSpec& spec, const Vec& x);
double evaluate_radial(const PotentialSpec& spec, double r);

// Closed-form zero states of the inverse-design families (oracles and
// pipeline cross-checks live on these).
double psi_radial_family(int dim, double r);
double psi_dipole_family(int dim, const Vec& x);

SampledFunction sample_radial(const PotentialSpec& spec, const RadialGrid& grid);
SampledFunction sample_tensor(const PotentialSpec& spec, const TensorGrid& grid);

// V = W + K with K a simple function (finitely many values, compact support
// in B(0, support_radius)) and ||W||_{n/2,1} <= delta, certified by direct
// re-measurement.  The quantization lattice keeps 0 exactly, so supp K is
// exactly contained in the stated ball.
struct Decomposition {
    SampledFunction W;
    SampledFunction K;
    double delta = 0.0;
    double measured_W_norm = 0.0;
    double contraction_C = 0.0;  // 2^{n-1} kappa_n ||a||_{n/(n-2),inf} ||W||_{n/2,1}
    double support_radius = 0.0;
    double clamp_level = 0.0;
    double quant_step = 0.0;
    int distinct_levels = 0;
    int rounds = 0;
    std::optional<PotentialSpec> source;  // pointwise re-evaluation (MC oracles)

    int dim() const { return W.dim(); }
    // K at an arbitrary radius, from the quantization metadata
    double k_at(double r, double v_of_r) const;
};

// Escalates (support radius, clamp level, quantization step) until the
// measured remainder norm certifies <= delta; throws budget_exhausted if the
// grid cannot reach delta within `budget` rounds.
Decomposition decompose(const SampledFunction& V, double delta, int budget,
                        std::optional<PotentialSpec> source = std::nullopt);

// Default smallness target: min(0.1 ||V||_{n/2,1}, value giving contraction
// target `c_target`).
double default_delta(const SampledFunction& V, double c_target = 0.4);

double contraction_constant(int dim, double w_norm);

using MultiIndex = std::vector<int>;
using MomentMap = std::map<MultiIndex, double>;

// M_alpha = int y^alpha V(y) psi(y) dy for all |alpha| <= max_order (<= 2).
// Radial-symmetric pairs use the exact angular reductions (odd moments are
// exactly zero); tensor pairs integrate with mirror-paired summation.
MomentMap moments(const SampledFunction& V, const SampledFunction& psi, int max_order);

// Euclidean norm over the order-1 block, |M_0|, etc. convenience accessors.
double moment_order0(const MomentMap& m);
double moment_order1_norm(const MomentMap& m, int dim);
double max_abs_moment_of_order(const MomentMap& m, int order);

}  // namespace zs
