#pragma once

#include <limits>

#include "zs/grid.hpp"

namespace zs {

// Exponent pair (p, q) indexing L^{p,q}; q = +infinity encoded explicitly.
struct LorentzIndex {
    double p = 2.0;
    double q = 2.0;

    static LorentzIndex of(double p, double q) { return {p, q}; }
    static LorentzIndex weak(double p) { return {p, std::numeric_limits<double>::infinity()}; }
    bool q_infinite() const { return std::isinf(q); }
    void validate() const;
};

enum class NormStatus { ok, divergent, overflow };

struct NormResult {
    double value = 0.0;
    NormStatus status = NormStatus::ok;
    bool ok() const { return status == NormStatus::ok; }
};

// d_f(t) = |{ |f| > t }|, measured by quadrature of the superlevel-set
// indicator on f's own grid.  Nonincreasing and right-continuous in t.
double distribution_function(const SampledFunction& f, double t);

// f*(s) = inf{ t > 0 : d_f(t) < s }, right-continuous bisection over the
// sampled value ladder (plateaus resolve to the jump location).
double decreasing_rearrangement(const SampledFunction& f, double s);

// L^{p,q} quasinorm from the distribution function:
//   q < inf : p^{1/q} ( int_0^inf t^{q-1} d_f(t)^{q/p} dt )^{1/q}
//   q = inf : sup_t t d_f(t)^{1/p}
// The t-integral runs over a log mesh spanning [min nonzero |f|/10,
// max|f|*10], adaptively refined with the sampled-value breakpoints so jump
// integrals are closed-form.  Divergence (non-decaying dyadic tail blocks)
// is reported distinctly from floating-point overflow.
NormResult quasinorm_checked(const SampledFunction& f, LorentzIndex idx, int mesh_points = 512);

// Throwing wrapper: Error(divergent_norm) / Error(numeric_overflow).
double quasinorm(const SampledFunction& f, LorentzIndex idx, int mesh_points = 512);

struct BoundPair {
    double lhs = 0.0;
    double rhs = 0.0;
};

// Two-indexed Hoelder inequality data: lhs = ||f g||_{p,q}, rhs =
// ||f||_{p1,q1} ||g||_{p2,q2} with 1/p = 1/p1 + 1/p2, 1/q = 1/q1 + 1/q2.
// Caller asserts lhs <= rhs (1 + tol).
BoundPair holder_product_bound(const SampledFunction& f, const SampledFunction& g,
                               LorentzIndex idx_f, LorentzIndex idx_g, LorentzIndex idx_out);

// Interpolation across the first index: if ||f||_{p0,inf} and ||f||_{p1,inf}
// are finite and p0 < p < p1, then ||f||_{p,q} is finite; returns it.
double interpolation_membership(const SampledFunction& f, double p0, double p1, double p, double q);

// ||  |x|^{-(n-2)} ||_{n/(n-2), inf} = |B(0,1)|^{(n-2)/n}; t d^{1/p} is
// exactly constant for this kernel, so the value is closed-form.
double weak_norm_inverse_power(int dim);

}  // namespace zs
