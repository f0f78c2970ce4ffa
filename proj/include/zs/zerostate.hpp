#pragma once

#include <optional>

#include "zs/greens.hpp"

namespace zs {

// Dense integral operator on the support of K:
//   A[x_i, y_j] = G(x_i, y_j) K(y_j) w_j
// so the zero-state equation psi(x) = -int G(x,y) K(y) psi(y) dy restricted
// to supp K reads (I + A) psi = 0.
struct CompactOperator {
    std::vector<std::size_t> support_nodes;  // cloud node indices with K != 0
    Eigen::VectorXd k_times_w;               // K_j w_j per support node
    Eigen::MatrixXd A;
    std::shared_ptr<const GreensEvaluator::SeriesColumns> series;
};

CompactOperator assemble(const Decomposition& dec, const GreensEvaluator& ev);

struct ZeroState {
    Eigen::VectorXd psi;  // on supp K, max |psi| = 1 exactly
    double sigma_min = 0.0;
    int multiplicity = 0;
    double tol = 0.0;
    std::vector<std::size_t> support_nodes;
    Eigen::VectorXd k_times_w;
    std::shared_ptr<const GreensEvaluator::SeriesColumns> series;
};

// Smallest singular value of (I + A); a state is returned when sigma_min <=
// tol (right singular vector, sup-normalized with a sign fixed by the
// normalizing entry).  Degeneracy is reported via `multiplicity`; the
// optional out-parameters receive sigma_min/multiplicity even when no state
// qualifies.
std::optional<ZeroState> solve(const CompactOperator& op, double tol,
                               double* sigma_min_out = nullptr, int* multiplicity_out = nullptr);

// psi at arbitrary points via psi(x) = -sum_l G(x, y_l) K_l w_l psi_l, with
// G(x, y_l) = ker(x, y_l) - rowS(x) . P[:, l].
std::vector<double> extend(const ZeroState& z, const Decomposition& dec, const GreensEvaluator& ev,
                           const std::vector<Vec>& targets);

// psi at every cloud node (used for moments and L^2 tail checks)
std::vector<double> extend_on_cloud(const ZeroState& z, const GreensEvaluator& ev);

struct TailSamples {
    std::vector<double> r;
    std::vector<double> avg;      // direction-averaged psi
    std::vector<double> max_abs;  // max over directions of |psi|
};

// Profile over spheres |x| = r for the given radii: direction-average and
// max taken over the cloud's direction rule (the value itself for radial
// clouds).
TailSamples tail_profile(const ZeroState& z, const Decomposition& dec, const GreensEvaluator& ev,
                         const std::vector<double>& radii);

// y^alpha V psi integrals over the cloud with psi extended everywhere;
// V = W + K on the cloud nodes.
MomentMap state_moments(const ZeroState& z, const GreensEvaluator& ev, int max_order);

struct TailIntegral {
    double value = 0.0;
    bool tail_convergent = false;  // dyadic radial blocks decay
};

// int psi^2 over the cloud with a dyadic-block convergence check.
TailIntegral state_l2(const ZeroState& z, const GreensEvaluator& ev);

// int |V psi| over the cloud (discretization scale for the moment tolerance)
double state_abs_vpsi_integral(const ZeroState& z, const GreensEvaluator& ev);

// psi sampled on a tensor grid (for the finite-difference residual check)
SampledFunction extend_to_tensor(const ZeroState& z, const Decomposition& dec,
                                 const GreensEvaluator& ev, const TensorGrid& grid);

}  // namespace zs
