#include "consensus/weightopt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "consensus/circulant.hpp"
#include "consensus/rng.hpp"

namespace consensus {

namespace {
using cplx = std::complex<double>;

int ring_distance(int i, int j, int n) {
    const int d = std::abs(i - j);
    return std::min(d, n - d);
}

RingResponse make_ring(const WeightProfile& p) {
    return RingResponse(p.n_total, p.coeffs, p.omega0);
}

double weighted_sum(const WeightProfile& p, const std::vector<double>& mult) {
    double s = 0.0;
    for (std::size_t d = 0; d < p.coeffs.size(); ++d) s += mult[d] * p.coeffs[d];
    return s;
}

// Euclidean projection onto {c >= 0, sum_d mult_d c_d = target}:
// c_d(tau) = max(0, c_d - tau mult_d), tau found by bisection, followed by an
// exact rescale to remove residual round-off in the constraint.
void project_feasible(std::vector<double>& c, const std::vector<double>& mult, double target) {
    auto value = [&](double tau) {
        double s = 0.0;
        for (std::size_t d = 0; d < c.size(); ++d) s += mult[d] * std::max(0.0, c[d] - tau * mult[d]);
        return s;
    };
    double lo = 0.0, hi = 0.0;
    for (std::size_t d = 0; d < c.size(); ++d) {
        lo = std::min(lo, c[d] - target);
        hi = std::max(hi, c[d] + target);
    }
    lo -= 1.0;
    hi += 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (value(mid) > target ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    double s = 0.0;
    for (std::size_t d = 0; d < c.size(); ++d) {
        c[d] = std::max(0.0, c[d] - tau * mult[d]);
        s += mult[d] * c[d];
    }
    if (s <= 0.0) throw std::runtime_error("projection collapsed to the zero profile");
    const double scale = target / s;
    for (auto& v : c) v *= scale;
}
}  // namespace

std::vector<double> distance_multiplicity(int n_total) {
    std::vector<double> mult(n_total / 2, 2.0);
    if (n_total % 2 == 0) mult.back() = 1.0;
    return mult;
}

Eigen::MatrixXd profile_matrix(const WeightProfile& p) {
    const int n = p.n_total;
    Eigen::MatrixXd w(n, n);
    for (int i = 0; i < n; ++i) {
        w(i, i) = -p.omega0;
        for (int j = i + 1; j < n; ++j) {
            const double v = p.coeffs[ring_distance(i, j, n) - 1];
            w(i, j) = v;
            w(j, i) = v;
        }
    }
    return w;
}

ConsensusSystem profile_system(const WeightProfile& p) {
    const Eigen::MatrixXd w = profile_matrix(p);
    const int nf = p.n_total - 1;
    ConsensusSystem sys;
    sys.omega0 = p.omega0;
    sys.w_follower = w.bottomRightCorner(nf, nf);
    sys.w_leader = w.block(1, 0, nf, 1);
    sys.follower_ids.resize(nf);
    for (int i = 0; i < nf; ++i) sys.follower_ids[i] = i + 1;
    return sys;
}

double constraint_violation(const WeightProfile& p) {
    const auto mult = distance_multiplicity(p.n_total);
    return std::abs(weighted_sum(p, mult) - p.omega0);
}

Eigen::MatrixXd response_gradient_weights(const ConsensusSystem& sys, double omega) {
    const int n = sys.n_followers();
    Eigen::MatrixXcd a = (-sys.w_follower).cast<cplx>();
    a.diagonal().array() += cplx(0.0, omega);
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const Eigen::VectorXcd h = lu.solve(sys.w_leader.cast<cplx>().eval());
    const Eigen::VectorXcd q = lu.adjoint().solve(h);

    // Column 0: leader weights dH^2/dw_i0 = 2 Re[conj(q_i)];
    // column j+1: dH^2/dw_ij = 2 Re[conj(q_i) h_j], diagonal fixed at zero.
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, n + 1);
    for (int i = 0; i < n; ++i) {
        grad(i, 0) = 2.0 * std::real(std::conj(q(i)));
        for (int j = 0; j < n; ++j)
            if (j != i) grad(i, j + 1) = 2.0 * std::real(std::conj(q(i)) * h(j));
    }
    return grad;
}

double profile_response(const WeightProfile& p) { return make_ring(p).h_squared(p.omega); }

Eigen::VectorXd response_gradient_coeffs(const WeightProfile& p) {
    const int n = p.n_total;
    const RingResponse ring = make_ring(p);

    Eigen::VectorXcd w_leader(n - 1);
    for (int u = 1; u < n; ++u) w_leader(u - 1) = p.coeffs[ring_distance(u, 0, n) - 1];

    const cplx s(0.0, p.omega);
    const Eigen::VectorXcd h = ring.solve_grounded(s, w_leader);
    const Eigen::VectorXcd q = ring.solve_grounded(-s, h);  // (i w I - W_F)^dag q = h

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.max_distance());
    for (int u = 1; u < n; ++u) {
        const cplx qc = std::conj(q(u - 1));
        // Leader column contribution: dW_L/dc_k indicator.
        grad(ring_distance(u, 0, n) - 1) += 2.0 * std::real(qc);
        for (int v = 1; v < n; ++v) {
            if (v == u) continue;
            grad(ring_distance(u, v, n) - 1) += 2.0 * std::real(qc * h(v - 1));
        }
    }
    return grad;
}

CostResult cost_and_gradient(const WeightProfile& p, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("cost_and_gradient: lambda must be >= 0");
    const auto mult = distance_multiplicity(p.n_total);
    const double residual = weighted_sum(p, mult) - p.omega0;  // common row sum

    CostResult out;
    out.h_squared = profile_response(p);
    out.cost = out.h_squared - 0.5 * lambda * p.n_total * residual * residual;
    out.grad = response_gradient_coeffs(p);
    for (int d = 0; d < p.max_distance(); ++d) out.grad(d) -= lambda * p.n_total * residual * mult[d];
    return out;
}

std::pair<WeightProfile, OptimizationTrace> optimize_weight_profile(int n_total, double omega,
                                                                    const OptimizeSchedule& schedule,
                                                                    std::uint64_t seed, double omega0) {
    if (n_total < 8) throw std::invalid_argument("optimize_weight_profile: n_total must be >= 8");
    const auto mult = distance_multiplicity(n_total);
    const int n_followers = n_total - 1;

    WeightProfile p;
    p.n_total = n_total;
    p.omega = omega;
    p.omega0 = omega0;
    p.coeffs.assign(n_total / 2, omega0 / static_cast<double>(n_followers));
    Rng rng(seed);
    // 1% noise breaks symmetry; the small monotone taper picks the
    // distance-localized representative among relabeling-equivalent optima
    // (profiles related by i -> u*i mod n have identical response).
    const int nd = static_cast<int>(p.coeffs.size());
    for (int d = 0; d < nd; ++d)
        p.coeffs[d] *= (1.0 + 0.01 * rng.uniform(-1.0, 1.0)) *
                       (1.0 + 0.03 * (1.0 - 2.0 * d / std::max(1, nd - 1)));
    project_feasible(p.coeffs, mult, omega0);

    OptimizationTrace trace;
    double h2 = profile_response(p);

    const double mult_norm2 = [&] {
        double s = 0.0;
        for (double m : mult) s += m * m;
        return s;
    }();

    auto record = [&](int iter) {
        trace.iterations.push_back({iter, h2, h2, std::sqrt(static_cast<double>(n_total)) *
                                                      std::abs(weighted_sum(p, mult) - omega0)});
    };
    record(0);

    // Persistent adaptive step: grows after accepted steps, shrinks via
    // backtracking, so flat regions around the uniform start are crossed in
    // few iterations instead of crawling at the initial step size.
    double step_size = schedule.initial_step;
    for (int iter = 1; iter <= schedule.max_iterations; ++iter) {
        const Eigen::VectorXd grad = response_gradient_coeffs(p);

        // Feasible-direction gradient: tangent to the equality constraint,
        // with descent components blocked at active non-negativity bounds.
        double mg = 0.0;
        for (int d = 0; d < p.max_distance(); ++d) mg += mult[d] * grad(d);
        double pg_norm2 = 0.0;
        for (int d = 0; d < p.max_distance(); ++d) {
            double g = grad(d) - mg / mult_norm2 * mult[d];
            if (p.coeffs[d] <= 0.0 && g < 0.0) g = 0.0;
            pg_norm2 += g * g;
        }
        if (std::sqrt(pg_norm2) < schedule.grad_tolerance) {
            trace.converged = true;
            break;
        }

        // Backtracking: accept the first projected step that increases H^2.
        double step = step_size;
        bool accepted = false;
        while (step > 1e-14) {
            std::vector<double> trial = p.coeffs;
            for (int d = 0; d < p.max_distance(); ++d) trial[d] += step * grad(d);
            project_feasible(trial, mult, omega0);
            WeightProfile cand = p;
            cand.coeffs = std::move(trial);
            const double trial_h2 = profile_response(cand);
            if (trial_h2 > h2) {
                p = std::move(cand);
                h2 = trial_h2;
                accepted = true;
                step_size = std::min(step * 2.0, 1e4);
                break;
            }
            step *= 0.5;
        }
        record(iter);
        if (!accepted) {
            trace.converged = true;  // no ascent direction at line-search resolution
            break;
        }
        if (h2 > static_cast<double>(n_followers) + 1e-6)
            throw std::runtime_error("optimize_weight_profile: H^2 exceeded N (constraint drift)");
    }
    return {std::move(p), std::move(trace)};
}

double effective_degree(const WeightProfile& p) {
    const int nd = p.max_distance();
    double total = 0.0;
    for (double c : p.coeffs) total += std::abs(c);
    if (total <= 0.0) throw std::invalid_argument("effective_degree: all-zero profile");

    double best_sse = 0.0;
    int best_d0 = 1;
    bool first = true;
    double prefix = 0.0, prefix_sq = 0.0, total_sq = 0.0;
    for (double c : p.coeffs) total_sq += c * c;
    for (int d0 = 1; d0 <= nd; ++d0) {
        prefix += p.coeffs[d0 - 1];
        prefix_sq += p.coeffs[d0 - 1] * p.coeffs[d0 - 1];
        const double height = prefix / d0;
        // SSE = sum_{d<=d0} (c_d - h)^2 + sum_{d>d0} c_d^2
        const double sse = (prefix_sq - prefix * height) + (total_sq - prefix_sq);
        if (first || sse < best_sse) {
            best_sse = sse;
            best_d0 = d0;
            first = false;
        }
    }
    return 2.0 * best_d0;
}

}  // namespace consensus
