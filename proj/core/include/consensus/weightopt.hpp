#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "consensus/system.hpp"

namespace consensus {

// Distance-parametrized connection weights on a ring of n_total nodes:
// w_ij = c_{d(i,j)} with d(i,j) = min(|i-j|, n_total - |i-j|), diagonal fixed
// at -omega0. Feasible profiles satisfy sum_j w_ij = 0 for every row, which
// for this parametrization reduces to  sum_d mult_d c_d = omega0  with
// mult_d = 2 (1 for d = n/2 when n is even).
struct WeightProfile {
    std::vector<double> coeffs;  // c_d, d = 1 .. floor(n_total/2)
    double omega = 0.0;          // target angular frequency
    int n_total = 0;
    double omega0 = 1.0;

    int max_distance() const { return static_cast<int>(coeffs.size()); }
};

// Link multiplicity per distance (2 per row, except the antipodal distance
// on even rings).
std::vector<double> distance_multiplicity(int n_total);

// Full n x n weight matrix reconstructed from the profile.
Eigen::MatrixXd profile_matrix(const WeightProfile& p);

// Grounded system (leader 0) for the profile.
ConsensusSystem profile_system(const WeightProfile& p);

// Max over rows of |sum_j w_ij| for the reconstructed matrix.
double constraint_violation(const WeightProfile& p);

// Analytic gradient dH^2/dw_ij for all free entries, node-indexed: entry
// (i, j) is the derivative with respect to w_ij for follower rows i (leader
// row and the fixed diagonal are zero). Uses two linear solves:
//   H = G W_L,  q = G^dag H,  with G = (i omega I - W_F)^{-1};
//   dH^2/dw_ij = 2 Re[conj(q_i) h_j],  dH^2/dw_i0 = 2 Re[conj(q_i)].
Eigen::MatrixXd response_gradient_weights(const ConsensusSystem& sys, double omega);

// Closed-form gradient dH^2/dc_k via the distance indicator matrices.
Eigen::VectorXd response_gradient_coeffs(const WeightProfile& p);

// H^2 of the profile at its target frequency.
double profile_response(const WeightProfile& p);

// Lagrange cost L = H^2 - (lambda/2) sum_i |sum_j w_ij|^2 and its gradient
// with respect to the coefficients.
struct CostResult {
    double cost = 0.0;
    double h_squared = 0.0;
    Eigen::VectorXd grad;
};
CostResult cost_and_gradient(const WeightProfile& p, double lambda);

struct OptimizeSchedule {
    double initial_step = 1e-2;
    int max_iterations = 4000;
    double grad_tolerance = 1e-8;
};

struct TracePoint {
    int iteration = 0;
    double cost = 0.0;
    double h_squared = 0.0;
    double constraint_norm = 0.0;
};

struct OptimizationTrace {
    std::vector<TracePoint> iterations;
    bool converged = false;
};

// Projected gradient ascent on the coefficients from a uniform profile plus
// 1% seeded noise. Each step is followed by an exact projection onto
// {c >= 0, sum_d mult_d c_d = omega0} (weighted simplex), so feasibility and
// non-negativity hold after every iterate. Backtracking line search accepts
// only H^2 increases.
std::pair<WeightProfile, OptimizationTrace> optimize_weight_profile(int n_total, double omega,
                                                                    const OptimizeSchedule& schedule,
                                                                    std::uint64_t seed,
                                                                    double omega0 = 1.0);

// Effective degree from a Heaviside fit: least-squares step c(d) = h [d <= d0]
// over the (distance, weight) pairs, returning k* = 2 d0. Throws on an
// all-zero profile.
double effective_degree(const WeightProfile& p);

}  // namespace consensus
