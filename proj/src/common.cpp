#include "zs/common.hpp"

namespace zs {

double unit_sphere_area(int dim) {
    if (dim < 1) fail(ErrorCode::invalid_range, "unit_sphere_area: dim >= 1 required");
    // omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)
    return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double unit_ball_volume(int dim) { return unit_sphere_area(dim) / dim; }

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0, u2 = 0, s = 0;
    do {
        u1 = uniform(-1.0, 1.0);
        u2 = uniform(-1.0, 1.0);
        s = u1 * u1 + u2 * u2;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = u2 * m;
    have_spare_ = true;
    return u1 * m;
}

Vec Rng::direction(int dim) {
    Vec v = Vec::zero(dim);
    double n2 = 0;
    do {
        for (int i = 0; i < dim; ++i) v[i] = gaussian();
        n2 = v.norm2();
    } while (n2 < 1e-300);
    double inv = 1.0 / std::sqrt(n2);
    for (int i = 0; i < dim; ++i) v[i] *= inv;
    return v;
}

}  // namespace zs
