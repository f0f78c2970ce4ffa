#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zs {

// Spatial point in R^n, n <= ZS_MAX_DIM. Fixed-size storage keeps node
// clouds contiguous without per-point allocation.
constexpr int kMaxDim = 8;

struct Vec {
    std::array<double, kMaxDim> x{};
    int dim = 3;

    Vec() = default;
    Vec(std::initializer_list<double> v) {
        dim = static_cast<int>(v.size());
        int i = 0;
        for (double c : v) x[i++] = c;
    }
    static Vec zero(int n) {
        Vec p;
        p.dim = n;
        return p;
    }
    double operator[](int i) const { return x[i]; }
    double& operator[](int i) { return x[i]; }

    double norm2() const {
        double s = 0;
        for (int i = 0; i < dim; ++i) s += x[i] * x[i];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.x[i] = a.x[i] - b.x[i];
    return r;
}
inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.x[i] = a.x[i] + b.x[i];
    return r;
}
inline Vec operator*(double s, const Vec& a) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.x[i] = s * a.x[i];
    return r;
}
inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < a.dim; ++i) s += a.x[i] * b.x[i];
    return s;
}
inline double dist(const Vec& a, const Vec& b) { return (a - b).norm(); }

// Error taxonomy. Each failure mode named by the operation contracts gets a
// distinct code so callers (and the CLI exit-code mapping) can dispatch on it.
enum class ErrorCode {
    invalid_range,
    nan_input,
    grid_mismatch,
    negative_threshold,
    nonpositive_s,
    divergent_norm,
    numeric_overflow,
    exponent_mismatch,
    unknown_kind,
    budget_exhausted,
    coincident_points,
    contraction_violated,
    insufficient_tail,
    degenerate_fit,
    inconsistent_classification,
    no_zero_state,
    config_parse,
    linear_algebra,
    internal
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) { throw Error(c, msg); }

// Surface area of the unit sphere S^{n-1} and volume of the unit ball in R^n.
double unit_sphere_area(int dim);
double unit_ball_volume(int dim);

// Deterministic splittable RNG helpers. std::mt19937_64 with explicit bit
// manipulation so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        // xorshift* variant; period 2^64-1, plenty for test streams.
        s_ ^= s_ >> 12;
        s_ ^= s_ << 25;
        s_ ^= s_ >> 27;
        return s_ * 0x2545f4914f6cdd1dull;
    }
    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double log_uniform(double a, double b) { return a * std::exp(uniform() * std::log(b / a)); }
    // uniform direction on S^{n-1} (Marsaglia via Gaussians)
    Vec direction(int dim);
    double gaussian();

private:
    std::uint64_t s_;
    bool have_spare_ = false;
    double spare_ = 0;
};

// Compensated (Kahan) accumulator; fixed summation order gives run-to-run
// identical results.
class KahanSum {
public:
    void add(double v) {
        double y = v - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0, c_ = 0;
};

}  // namespace zs
