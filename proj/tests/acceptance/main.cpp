// Acceptance harness: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each check prints the measured quantities next to the
// bound it is held to.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "consensus/circulant.hpp"
#include "consensus/graph.hpp"
#include "consensus/netgen.hpp"
#include "consensus/parallel.hpp"
#include "consensus/rng.hpp"
#include "consensus/spectral.hpp"
#include "consensus/structopt.hpp"
#include "consensus/system.hpp"
#include "consensus/timesim.hpp"
#include "consensus/weightopt.hpp"

using namespace consensus;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGridStep = 1.0 / 24.0;  // decades, 24 points per decade

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------- 1
Check criterion_dc_anchor() {
    Check c;
    struct Instance {
        std::string name;
        InteractionGraph g;
    };
    std::vector<Instance> instances;
    for (int n : {17, 65, 257}) {
        instances.push_back({"ring" + std::to_string(n), ring_lattice(n, 4)});
        std::uint64_t seed = 1;
        InteractionGraph rr = regular_random(n, 4, seed);
        while (!is_connected(rr)) rr = regular_random(n, 4, ++seed);
        instances.push_back({"random" + std::to_string(n), rr});
    }
    for (int side : {4, 8, 16})
        instances.push_back({"mesh" + std::to_string(side * side), mesh_2d(side, 8)});
    for (int n : {16, 64, 256})
        instances.push_back({"caveman" + std::to_string(n), caveman(n / 4, 3)});

    for (const auto& inst : instances) {
        const auto sys = build_consensus_system(inst.g);
        const double n_followers = sys.n_followers();
        const double h2 = collective_response(frequency_response(sys, 0.0));
        c.require(std::abs(h2 - n_followers) <= 1e-8 * n_followers,
                  inst.name + ": H2(0)=" + fmt(h2) + " vs N=" + fmt(n_followers));
    }
    if (c.ok) c.note("H2(0)=N to 1e-8 N on 12 connected instances, all generators");
    return c;
}

// ---------------------------------------------------------------------- 2
Check criterion_low_pass() {
    Check c;
    const int n_followers = 2048;
    const GroundedEigenSolver solver(build_consensus_system(ring_lattice(n_followers + 1,
                                                                         n_followers)));
    double worst = 0.0;
    for (double w : log_grid(1e-5, 1.0, 24)) {
        const double expected = n_followers / (1.0 + n_followers * n_followers * w * w);
        worst = std::max(worst, std::abs(solver.h_squared(w) - expected) / expected);
    }
    c.require(worst <= 1e-9, "relative error " + fmt(worst) + " > 1e-9");
    if (c.ok) c.note("complete N=2048 matches N/(1+(Nw)^2), worst rel err " + fmt(worst));
    return c;
}

// ---------------------------------------------------------------------- 3
// Smallest grid frequency from which the first curve stays above the second.
double dominance_onset(const RingResponse& a, const RingResponse& b,
                       const std::vector<double>& grid) {
    int onset = static_cast<int>(grid.size());
    for (int i = static_cast<int>(grid.size()) - 1; i >= 0; --i) {
        if (a.h_squared(grid[i]) > b.h_squared(grid[i]))
            onset = i;
        else
            break;
    }
    if (onset == static_cast<int>(grid.size())) return 0.0;
    return grid[onset];
}

Check criterion_crossovers() {
    Check c;
    const int n = 2049;
    const auto grid = log_grid(1e-4, 1.0, 24);
    const RingResponse k10 = RingResponse::unweighted(n, 10, 1.0);
    const RingResponse k30 = RingResponse::unweighted(n, 30, 1.0);
    const RingResponse kn = RingResponse::unweighted(n, n - 1, 1.0);

    const double w_low = dominance_onset(k30, kn, grid);
    const double w_high = dominance_onset(k10, k30, grid);
    const double tol = kGridStep + 1e-12;
    c.require(w_low > 0.0 && std::abs(std::log10(w_low / 2.24e-3)) <= tol,
              "k30/kN crossover " + fmt(w_low) + " vs 2.24e-3");
    c.require(w_high > 0.0 && std::abs(std::log10(w_high / 1.38e-2)) <= tol,
              "k10/k30 crossover " + fmt(w_high) + " vs 1.38e-2");
    if (c.ok)
        c.note("crossovers at " + fmt(w_low) + " and " + fmt(w_high) +
               ", each within one grid step of the reference");
    return c;
}

// ---------------------------------------------------------------------- 4
PowerLawFit bulk_fit(const KStarCurve& curve, int k_lo, int k_hi) {
    KStarCurve bulk;
    for (const auto& e : curve.entries)
        if (e.k_star >= k_lo && e.k_star <= k_hi) bulk.entries.push_back(e);
    if (bulk.entries.size() < 5) throw std::runtime_error("bulk window too narrow");
    return fit_power_law(bulk, bulk.entries.front().omega, bulk.entries.back().omega);
}

Check criterion_scaling_law() {
    Check c;
    ModelSpec model;
    model.kind = ModelKind::Ring;
    model.n_total = 2049;
    const auto curve = kstar_curve(model, log_grid(1e-4, 1.0, 24));

    // bulk window: between the all-to-all plateau and the k* = 2 saturation
    const auto fit = bulk_fit(curve, 4, 512);
    c.require(std::abs(fit.gamma - 0.56) <= 0.05, "gamma=" + fmt(fit.gamma) + " vs 0.56+-0.05");
    c.require(std::abs(fit.k0 - 1.56) <= 0.25, "K0=" + fmt(fit.k0) + " vs 1.56+-0.25");

    double w_sat = 0.0;
    for (int i = static_cast<int>(curve.entries.size()) - 1; i >= 0; --i) {
        if (curve.entries[i].k_star == 2)
            w_sat = curve.entries[i].omega;
        else
            break;
    }
    c.require(w_sat > 0.0 && std::abs(std::log10(w_sat / 0.278)) <= kGridStep + 1e-12,
              "k*=2 saturation at " + fmt(w_sat) + " vs 0.278");
    if (c.ok)
        c.note("gamma=" + fmt(fit.gamma) + ", K0=" + fmt(fit.k0) + ", k*=2 from " + fmt(w_sat));
    return c;
}

// ---------------------------------------------------------------------- 5
Check criterion_finite_size_jump() {
    Check c;
    for (int n_followers : {256, 1024}) {
        ModelSpec model;
        model.kind = ModelKind::Ring;
        model.n_total = n_followers + 1;
        const auto curve = kstar_curve(model, log_grid(1e-4, 1.0, 24));

        double w_jump = 0.0;
        for (const auto& e : curve.entries)
            if (e.k_star == n_followers) w_jump = e.omega;
        const auto fit = bulk_fit(curve, 4, n_followers / 4);
        const double k_bulk = fit.k0 * std::pow(w_jump, -fit.gamma);
        const double ratio = k_bulk / std::sqrt(n_followers);
        c.require(w_jump > 0.0 && ratio >= 0.5 && ratio <= 2.0,
                  "N=" + std::to_string(n_followers) + ": bulk k*(w_jump)=" + fmt(k_bulk) +
                      " vs sqrt(N)=" + fmt(std::sqrt(n_followers)));
        if (c.ok)
            c.note("N=" + std::to_string(n_followers) + ": jump at " + fmt(w_jump) +
                   ", bulk k*=" + fmt(k_bulk) + " vs sqrt(N)=" + fmt(std::sqrt(n_followers)));
    }
    return c;
}

// ---------------------------------------------------------------------- 6
Check criterion_caveman_exponent() {
    Check c;
    ModelSpec model;
    model.kind = ModelKind::Caveman;
    model.n_total = 840;
    const auto curve = kstar_curve(model, log_grid(1e-3, 1.0, 24));
    const auto fit = bulk_fit(curve, 5, 120);
    c.require(std::abs(fit.gamma - 1.0) <= 0.15, "gamma=" + fmt(fit.gamma) + " vs 1.0+-0.15");
    if (c.ok) c.note("caveman N=840 continuous regime gamma=" + fmt(fit.gamma));
    return c;
}

// ---------------------------------------------------------------------- 7
Check criterion_gradients() {
    Check c;
    Rng rng(20260825);
    for (int inst = 0; inst < 10; ++inst) {
        const int n = 12 + inst * 12;  // up to 120 nodes
        std::uint64_t seed = inst + 1;
        InteractionGraph g = regular_random(n, 4, seed);
        while (!is_connected(g)) g = regular_random(n, 4, ++seed);
        const double omega = std::pow(10.0, rng.uniform(-2.0, 0.0));
        auto sys = build_consensus_system(g);

        // entry-wise gradient against central differences on sampled entries
        const Eigen::MatrixXd grad = response_gradient_weights(sys, omega);
        const double scale = grad.cwiseAbs().maxCoeff();
        auto h2_at = [&](double* slot, double v) {
            const double saved = *slot;
            *slot = v;
            const double h2 = collective_response(frequency_response(sys, omega));
            *slot = saved;
            return h2;
        };
        const double step = 1e-6;
        for (int trial = 0; trial < 12; ++trial) {
            const int i = static_cast<int>(rng.uniform_int(0, sys.n_followers() - 1));
            const int j = static_cast<int>(rng.uniform_int(0, sys.n_followers()));
            double* slot = j == 0 ? &sys.w_leader(i) : &sys.w_follower(i, j - 1);
            if (j - 1 == i) continue;  // diagonal held fixed by the parametrization
            const double fd = (h2_at(slot, *slot + step) - h2_at(slot, *slot - step)) / (2 * step);
            const double an = j == 0 ? grad(i, 0) : grad(i, j);
            c.require(std::abs(an - fd) <= 1e-5 * std::max(std::abs(fd), 1e-3 * scale),
                      "instance " + std::to_string(inst) + " dH2/dw: " + fmt(an) + " vs FD " +
                          fmt(fd));
        }

        // coefficient gradient of a random feasible ring profile
        WeightProfile p;
        p.n_total = 8 + 4 * inst;
        p.omega = omega;
        p.coeffs.resize(p.n_total / 2);
        const auto mult = distance_multiplicity(p.n_total);
        double total = 0.0;
        for (std::size_t d = 0; d < p.coeffs.size(); ++d) {
            p.coeffs[d] = rng.uniform(0.1, 1.0);
            total += mult[d] * p.coeffs[d];
        }
        for (auto& v : p.coeffs) v /= total;
        const Eigen::VectorXd cg = response_gradient_coeffs(p);
        const double cscale = cg.cwiseAbs().maxCoeff();
        for (std::size_t d = 0; d < p.coeffs.size(); ++d) {
            auto shifted = p;
            shifted.coeffs[d] += step;
            const double hi = profile_response(shifted);
            shifted.coeffs[d] -= 2 * step;
            const double lo = profile_response(shifted);
            const double fd = (hi - lo) / (2 * step);
            c.require(std::abs(cg(d) - fd) <= 1e-5 * std::max(std::abs(fd), 1e-3 * cscale),
                      "instance " + std::to_string(inst) + " dH2/dc: " + fmt(cg(d)) + " vs FD " +
                          fmt(fd));
        }
    }
    if (c.ok) c.note("both gradients match central differences on 10 instances, N up to 120");
    return c;
}

// ---------------------------------------------------------------------- 8
Check criterion_weight_optimization() {
    Check c;
    const auto [flat, flat_trace] = optimize_weight_profile(512, 1e-3, {}, 1);
    (void)flat_trace;
    const double uniform = 1.0 / 512.0;
    double worst = 0.0;
    for (double v : flat.coeffs) worst = std::max(worst, std::abs(v - uniform) / uniform);
    c.require(worst <= 0.05, "low-frequency profile deviates " + fmt(100 * worst) + "% from 1/N");

    const auto [steep, steep_trace] = optimize_weight_profile(512, 0.2, {}, 1);
    (void)steep_trace;
    const double k_fit = effective_degree(steep);
    ModelSpec ring;
    ring.kind = ModelKind::Ring;
    ring.n_total = 512;
    const int k_ring = optimal_degree(ring, 0.2);
    c.require(std::abs(k_fit - k_ring) <= 2.0,
              "Heaviside k*=" + fmt(k_fit) + " vs unweighted ring k*=" + fmt(k_ring));
    if (c.ok)
        c.note("profile uniform to " + fmt(100 * worst) + "% at w=1e-3; k*=" + fmt(k_fit) +
               " vs ring " + std::to_string(k_ring) + " at w=0.2");
    return c;
}

// ---------------------------------------------------------------------- 9
int largest_clique(const InteractionGraph& g) {
    const int n = g.n_nodes();
    int best = 0;
    for (int mask = 1; mask < (1 << n); ++mask) {
        const int size = __builtin_popcount(mask);
        if (size <= best) continue;
        bool clique = true;
        for (int i = 0; i < n && clique; ++i)
            if (mask & (1 << i))
                for (int j = i + 1; j < n && clique; ++j)
                    if ((mask & (1 << j)) && !g.has_edge(i, j)) clique = false;
        if (clique) best = size;
    }
    return best;
}

Check criterion_annealing() {
    Check c;
    const std::vector<double> omegas = {0.05, 0.1, 0.2, 0.3, 0.4, 0.6, 1.0};
    std::vector<AnnealResult> results;
    results.reserve(omegas.size());
    for (double omega : omegas) results.push_back(anneal_topology(11, omega, {}, 11));

    const int complete_edges = 11 * 10 / 2;
    for (std::size_t i : {std::size_t{0}, std::size_t{1}}) {
        int hits = 0;
        for (const auto& g : results[i].restart_graphs)
            if (g.n_edges() == complete_edges) ++hits;
        c.require(hits >= 7, "w=" + fmt(omegas[i]) + ": K11 in " + std::to_string(hits) +
                                 "/8 restarts");
    }

    const auto& mid = results[2].best_graph;  // w = 0.2
    c.require(std::abs(mean_degree(mid) - 4.7) <= 0.5,
              "w=0.2 mean degree " + fmt(mean_degree(mid)) + " vs 4.7+-0.5");
    const int clique = largest_clique(mid);
    c.require(clique >= 6, "w=0.2 largest clique " + std::to_string(clique) + " < 6");

    // Held to the stated bound even though it is unreachable on 11 nodes:
    // pairs cannot cover an odd node set, and the best use of the leftover
    // node is a 3-path, not a singleton. 5 dimers + singleton scores 5/11
    // while 4 dimers + 3-path scores (5 + 2 |0.5/(-0.5+2i)|^2 (1+|1+i|^2))/11,
    // strictly higher, so a correct optimizer reports 8 covered nodes.
    const auto& high = results.back().best_graph;  // w = 1.0
    int covered = 0;
    for (const auto& comp : connected_components(high))
        if (comp.size() <= 2) covered += static_cast<int>(comp.size());
    InteractionGraph matching(11, 0);
    for (int i = 0; i < 10; i += 2) matching.add_edge(i, i + 1);
    c.require(covered >= 10,
              "w=1.0 nodes in size<=2 components: " + std::to_string(covered) +
                  " (found objective " + fmt(results.back().best_objective) +
                  " > 5 dimers + singleton " + fmt(leader_averaged_response(matching, 1.0)) + ")");

    std::string degrees;
    for (std::size_t i = 0; i + 1 < results.size(); ++i)
        c.require(mean_degree(results[i].best_graph) >=
                      mean_degree(results[i + 1].best_graph) - 1e-9,
                  "mean degree rises from w=" + fmt(omegas[i]) + " to w=" + fmt(omegas[i + 1]));
    for (const auto& r : results) degrees += (degrees.empty() ? "" : ",") + fmt(r.mean_degree);
    c.note("mean degrees over w: " + degrees + "; clique " + std::to_string(clique) + " at w=0.2");
    return c;
}

// --------------------------------------------------------------------- 10
Check criterion_exhaustive() {
    Check c;
    for (double omega : {0.1, 1.0}) {
        double best = -1.0;
        for (int mask = 0; mask < 64; ++mask) {
            InteractionGraph g(4, 0);
            int bit = 0;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j, ++bit)
                    if (mask & (1 << bit)) g.add_edge(i, j);
            best = std::max(best, leader_averaged_response(g, omega));
        }
        AnnealSchedule schedule;
        schedule.steps = 4000;
        const auto res = anneal_topology(4, omega, schedule, 5, 4);
        c.require(std::abs(res.best_objective - best) <= 1e-9,
                  "w=" + fmt(omega) + ": anneal " + fmt(res.best_objective) + " vs brute force " +
                      fmt(best));
        if (c.ok) c.note("w=" + fmt(omega) + " optimum " + fmt(best) + " recovered");
    }
    return c;
}

// --------------------------------------------------------------------- 11
Check criterion_time_frequency() {
    Check c;
    Rng rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(9, 65));
        int k = static_cast<int>(rng.uniform_int(3, 6));
        if ((k * n) % 2 != 0) ++k;
        std::uint64_t seed = trial * 101 + 1;
        InteractionGraph g = regular_random(n, k, seed);
        while (!is_connected(g)) g = regular_random(n, k, ++seed);
        const double omega = std::pow(10.0, rng.uniform(-1.3, 0.3));

        const auto sys = build_consensus_system(g);
        const double speed = consensus_speed(sys);
        const double duration = 12.0 / speed + 8.0 * 2.0 * kPi / omega;
        const double dt = std::min({0.02, 0.1 / omega, 0.1 / speed});
        const auto traj = simulate_linear(sys, {1.0, omega, 0.3}, duration, dt);
        const auto sim_gains = steady_state_amplitude(traj, omega);
        const auto rv = frequency_response(sys, omega);
        for (int i = 0; i < sys.n_followers(); ++i) {
            const double ref = std::abs(rv.gains(i));
            c.require(std::abs(std::abs(sim_gains(i)) - ref) <= 0.01 * ref,
                      "trial " + std::to_string(trial) + " agent " + std::to_string(i) + ": " +
                          fmt(std::abs(sim_gains(i))) + " vs " + fmt(ref));
        }
    }
    if (c.ok) c.note("20 random (graph, w) pairs agree within 1% per agent");
    return c;
}

// --------------------------------------------------------------------- 12
Check criterion_heading_crossing() {
    Check c;
    const auto cal = calibrate_rotation_rate(11, 0.05, 10, 1000);
    const std::vector<double> freqs = {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.085, 0.1};
    const int seeds = 10;  // measurement seeds 1..10, disjoint from calibration

    auto sweep = [&](int k) {
        std::vector<double> h2(freqs.size(), 0.0), pol(freqs.size(), 0.0);
        const auto g = ring_lattice(11, k);
        for (std::size_t f = 0; f < freqs.size(); ++f) {
            const double duration = std::max(4.0 / freqs[f], 120.0);
            LeaderMotion motion{LeaderMotion::Kind::Rotate, freqs[f], 0.0};
            std::vector<FollowMetrics> metrics(seeds);
            parallel_for(seeds, [&](int s) {
                metrics[s] = follow_metric(simulate_heading(g, motion, cal.omega0, duration,
                                                            {.seed = std::uint64_t(s) + 1}));
            });
            for (const auto& m : metrics) {
                h2[f] += m.collective / seeds / 10.0;  // normalized by N
                pol[f] += m.polarization / seeds;
            }
        }
        return std::pair(h2, pol);
    };
    const auto [h2_sparse, pol_sparse] = sweep(2);
    const auto [h2_dense, pol_dense] = sweep(10);

    c.require(h2_dense.front() > h2_sparse.front(),
              "at 0.01 Hz: k=10 " + fmt(h2_dense.front()) + " vs k=2 " + fmt(h2_sparse.front()));
    c.require(h2_sparse.back() > h2_dense.back(),
              "at 0.1 Hz: k=2 " + fmt(h2_sparse.back()) + " vs k=10 " + fmt(h2_dense.back()));

    std::vector<double> crossings;
    for (std::size_t f = 0; f + 1 < freqs.size(); ++f) {
        const double a = h2_sparse[f] - h2_dense[f];
        const double b = h2_sparse[f + 1] - h2_dense[f + 1];
        if (a < 0.0 && b >= 0.0) crossings.push_back(std::sqrt(freqs[f] * freqs[f + 1]));
        if (a >= 0.0 && b < 0.0) crossings.push_back(-1.0);  // reverse crossing
    }
    c.require(crossings.size() == 1, std::to_string(crossings.size()) + " sign changes");
    if (crossings.size() == 1) {
        c.require(crossings[0] > 0.0 && std::abs(crossings[0] - 0.05) <= 0.02,
                  "crossing at " + fmt(crossings[0]) + " Hz vs 0.05+-0.02");
        c.note("omega0=" + fmt(cal.omega0) + ", crossing near " + fmt(crossings[0]) + " Hz");
    }
    double pol_gap = 1e9;
    for (std::size_t f = 0; f < freqs.size(); ++f)
        pol_gap = std::min(pol_gap, pol_dense[f] - pol_sparse[f]);
    c.require(pol_gap > 0.0, "k=10 polarization band dips below k=2 (gap " + fmt(pol_gap) + ")");
    c.note("polarization k=10 in [" + fmt(*std::min_element(pol_dense.begin(), pol_dense.end())) +
           "," + fmt(*std::max_element(pol_dense.begin(), pol_dense.end())) + "], k=2 in [" +
           fmt(*std::min_element(pol_sparse.begin(), pol_sparse.end())) + "," +
           fmt(*std::max_element(pol_sparse.begin(), pol_sparse.end())) + "]");
    return c;
}

// --------------------------------------------------------------------- 13
Check criterion_small_signal() {
    Check c;
    const auto cal = calibrate_heading_rate(11, 0.05);
    for (int k : {2, 10}) {
        const auto g = ring_lattice(11, k);
        const double freq_hz = 0.005;
        const LeaderMotion motion{LeaderMotion::Kind::Oscillate, freq_hz, 0.1};
        const auto traj = simulate_heading(g, motion, cal.omega0, 1600.0, {.seed = 4});
        const auto gains = heading_gains(traj);
        const auto rv = frequency_response(build_consensus_system(g, cal.omega0),
                                           2.0 * kPi * freq_hz);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i)
            worst = std::max(worst, std::abs(gains(i) - rv.gains(i)) / std::abs(rv.gains(i)));
        c.require(worst <= 0.05, "k=" + std::to_string(k) + ": worst per-agent error " +
                                     fmt(100 * worst) + "%");
        if (c.ok) c.note("k=" + std::to_string(k) + " worst gain error " + fmt(100 * worst) + "%");
    }
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"1 connected-consensus anchor H2(0)=N", criterion_dc_anchor},
        {"2 all-to-all first-order low-pass", criterion_low_pass},
        {"3 ring crossover frequencies", criterion_crossovers},
        {"4 scaling law k* = K0 w^-gamma", criterion_scaling_law},
        {"5 finite-size jump at k* ~ sqrt(N)", criterion_finite_size_jump},
        {"6 caveman exponent gamma ~ 1", criterion_caveman_exponent},
        {"7 analytic gradients vs finite differences", criterion_gradients},
        {"8 weight-profile optimization", criterion_weight_optimization},
        {"9 annealed structure vs frequency", criterion_annealing},
        {"10 exhaustive annealing oracle at N+1=4", criterion_exhaustive},
        {"11 time/frequency-domain equivalence", criterion_time_frequency},
        {"12 heading-consensus crossing", criterion_heading_crossing},
        {"13 small-signal linearization", criterion_small_signal},
    };

    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Check result;
        try {
            result = fn();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        if (!result.ok) ++failures;
        std::cout << (result.ok ? "PASS" : "FAIL") << " criterion " << name;
        if (!result.detail.empty()) std::cout << " [" << result.detail << "]";
        std::cout << "\n" << std::flush;
    }
    if (failures > 0) std::cout << failures << " criteria failed\n";
    return failures == 0 ? 0 : 1;
}
