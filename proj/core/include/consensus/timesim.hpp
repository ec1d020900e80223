#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "consensus/graph.hpp"
#include "consensus/system.hpp"

namespace consensus {

// u(t) = amplitude * cos(omega t + phase)
struct SinusoidInput {
    double amplitude = 1.0;
    double omega = 0.0;
    double phase = 0.0;

    double value(double t) const;
};

struct LinearTrajectory {
    double dt = 0.0;
    std::vector<double> times;
    Eigen::MatrixXd states;  // (n_samples) x (n_followers)
    SinusoidInput input;
};

// Classical fixed-step RK4 integration of dx/dt = W_F x + W_L u(t) from
// x(0) = 0. Throws on instability (|x_i| exceeding 10 |u|_max).
LinearTrajectory simulate_linear(const ConsensusSystem& sys, const SinusoidInput& input,
                                 double duration, double dt);

// Complex per-agent gains from a Fourier projection of each state series onto
// e^{i omega t} over an integer number of periods after the settle window,
// normalized by the input amplitude and phase. Requires >= 3 full periods
// after settling.
Eigen::VectorXcd steady_state_amplitude(const LinearTrajectory& traj, double omega,
                                        double settle_fraction = 0.5);

// Circular mean of the neighbor headings (two-argument arctangent of summed
// sines over summed cosines). Returns nullopt when the resultant length is
// below 1e-12 (antipodal cancellation); callers keep the current heading.
std::optional<double> heading_target(std::span<const double> neighbor_headings);

// Wrap an angle to (-pi, pi].
double wrap_angle(double theta);

struct LeaderMotion {
    enum class Kind { Rotate, Oscillate };
    Kind kind = Kind::Rotate;
    double freq_hz = 0.0;
    double amplitude = 0.0;  // radians, Oscillate only

    double heading(double t) const;
};

struct HeadingTrajectory {
    std::vector<double> times;   // seconds, uniform grid
    Eigen::MatrixXd headings;    // (n_samples) x (n_nodes); leader column = g.leader()
    LeaderMotion motion;
    double update_period = 0.1;  // Delta T
    double rate = 1.0;           // omega0, 1/s
    InteractionGraph graph;
    std::uint64_t seed = 0;
};

struct HeadingOptions {
    double update_period = 0.1;  // seconds
    double jitter = 0.1;         // fraction of the period
    double sample_dt = 0.0;      // 0 -> update_period
    std::uint64_t seed = 0;
};

// Asynchronous discrete-event heading consensus. Each follower holds a timer
// of period dT (1 + jitter * eta), eta uniform in [-1, 1] resampled per tick;
// on a tick it reads the last-published neighbor headings (the leader
// publishes its prescribed heading continuously) and relaxes
//   theta_i <- theta_i + omega0 dT wrap(theta_bar - theta_i).
// Follower initial headings are uniform random. Deterministic given seed.
HeadingTrajectory simulate_heading(const InteractionGraph& g, const LeaderMotion& motion,
                                   double omega0, double duration, const HeadingOptions& opts = {});

struct FollowMetrics {
    Eigen::VectorXd per_agent;  // H_i per follower, in [-1, 1]
    double collective = 0.0;    // H^2 = sum H_i^2
    double polarization = 0.0;  // time-averaged Vicsek order parameter
};

// H_i = (1/T) int cos(theta_i - theta_L) dt via trapezoidal quadrature over
// the full duration (transient included).
FollowMetrics follow_metric(const HeadingTrajectory& traj);

// Synchronous small-step integration of the continuous heading ODE
// dtheta_i/dt = omega0 (<theta_j> - theta_i) with circular-mean coupling.
// Refinement target for simulate_heading as dT omega0 -> 0.
HeadingTrajectory continuous_heading_limit(const InteractionGraph& g, const LeaderMotion& motion,
                                           double omega0, double dt, double duration,
                                           double sample_dt = 0.1);

// Per-agent complex gains of follower headings at the leader frequency,
// normalized by the oscillation amplitude (small-signal comparisons against
// the LTI response). Projection over whole periods after the settle window.
Eigen::VectorXcd heading_gains(const HeadingTrajectory& traj, double settle_fraction = 0.5);

// Relaxation rate such that the LTI crossing of the k=2 ring and the complete
// graph on n_total nodes lands at the target leader frequency (Hz). Returns
// omega0 in 1/s; the crossing frequency in omega0 units is also exposed.
struct HeadingCalibration {
    double omega0 = 1.0;
    double crossing_omega = 0.0;  // in omega0 units
    double target_hz = 0.0;
};
HeadingCalibration calibrate_heading_rate(int n_total = 11, double target_hz = 0.05);

// Relaxation rate for the rotating-leader experiment. Tracking a full
// rotation is a large-signal problem (steady ramp lag, phase slip at pi/2),
// so the LTI calibration does not transfer; instead bisect omega0 until the
// seed-averaged H^2 of the k=2 ring and the complete graph coincide at the
// target rotation frequency. Deterministic given seed_base.
struct RotationCalibration {
    double omega0 = 1.0;
    double target_hz = 0.0;
    int seeds = 0;
};
RotationCalibration calibrate_rotation_rate(int n_total = 11, double target_hz = 0.05,
                                            int seeds = 10, std::uint64_t seed_base = 1000);

}  // namespace consensus
