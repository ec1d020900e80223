#include "consensus/timesim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "consensus/circulant.hpp"
#include "consensus/netgen.hpp"
#include "consensus/parallel.hpp"
#include "consensus/rng.hpp"

namespace consensus {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
using cplx = std::complex<double>;
}  // namespace

double SinusoidInput::value(double t) const { return amplitude * std::cos(omega * t + phase); }

double wrap_angle(double theta) {
    double w = std::remainder(theta, kTwoPi);  // (-pi, pi] up to the -pi edge
    if (w <= -kPi) w = kPi;
    return w;
}

LinearTrajectory simulate_linear(const ConsensusSystem& sys, const SinusoidInput& input,
                                 double duration, double dt) {
    if (dt <= 0.0 || duration <= 0.0) throw std::invalid_argument("simulate_linear: bad time arguments");
    const int n = sys.n_followers();
    const int steps = static_cast<int>(std::ceil(duration / dt));

    LinearTrajectory traj;
    traj.dt = dt;
    traj.input = input;
    traj.times.resize(steps + 1);
    traj.states.resize(steps + 1, n);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    traj.times[0] = 0.0;
    traj.states.row(0) = x.transpose();

    const double bound = 10.0 * std::abs(input.amplitude) + 1e-9;
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n);
    auto deriv = [&](const Eigen::VectorXd& state, double t, Eigen::VectorXd& out) {
        out.noalias() = sys.w_follower * state;
        out.noalias() += sys.w_leader * input.value(t);
    };
    for (int s = 0; s < steps; ++s) {
        const double t = s * dt;
        deriv(x, t, k1);
        deriv(x + 0.5 * dt * k1, t + 0.5 * dt, k2);
        deriv(x + 0.5 * dt * k2, t + 0.5 * dt, k3);
        deriv(x + dt * k3, t + dt, k4);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (x.cwiseAbs().maxCoeff() > bound)
            throw std::runtime_error("simulate_linear: state exceeded 10x the input amplitude "
                                     "(dt too large or unstable system)");
        traj.times[s + 1] = (s + 1) * dt;
        traj.states.row(s + 1) = x.transpose();
    }
    return traj;
}

namespace {
// Projection of uniformly sampled series onto e^{i omega t} over whole
// periods ending at the last sample. Trapezoid weights.
Eigen::VectorXcd project_on_tone(const Eigen::MatrixXd& series, const std::vector<double>& times,
                                 double omega, double settle_fraction, int min_periods) {
    const double t_end = times.back();
    const double period = kTwoPi / omega;
    const double settle = t_end * settle_fraction;
    const int periods = static_cast<int>(std::floor((t_end - settle) / period));
    if (periods < min_periods)
        throw std::invalid_argument("steady-state window too short: need >= " +
                                    std::to_string(min_periods) + " periods after settling");
    const double window = periods * period;
    const double t0 = t_end - window;

    // First sample index at or after t0.
    const auto it = std::lower_bound(times.begin(), times.end(), t0 - 1e-12);
    const int i0 = static_cast<int>(it - times.begin());
    const int count = static_cast<int>(times.size()) - i0;
    if (count < 16) throw std::invalid_argument("steady-state window holds too few samples");

    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(series.cols());
    double time_acc = 0.0;
    for (int s = i0; s + 1 < static_cast<int>(times.size()); ++s) {
        const double h = times[s + 1] - times[s];
        const cplx w0 = std::polar(1.0, -omega * times[s]);
        const cplx w1 = std::polar(1.0, -omega * times[s + 1]);
        acc += 0.5 * h * (w0 * series.row(s).transpose().cast<cplx>() +
                          w1 * series.row(s + 1).transpose().cast<cplx>());
        time_acc += h;
    }
    return acc * (2.0 / time_acc);
}
}  // namespace

Eigen::VectorXcd steady_state_amplitude(const LinearTrajectory& traj, double omega,
                                        double settle_fraction) {
    Eigen::VectorXcd c = project_on_tone(traj.states, traj.times, omega, settle_fraction, 3);
    // x_i(t) = Re[c_i e^{i omega t}] for input a cos(wt + phi) = Re[a e^{i phi} e^{i w t}];
    // normalize by the complex input amplitude.
    const cplx input_amp = std::polar(traj.input.amplitude, traj.input.phase);
    return c / input_amp;
}

std::optional<double> heading_target(std::span<const double> neighbor_headings) {
    if (neighbor_headings.empty())
        throw std::invalid_argument("heading_target: need at least one neighbor");
    double s = 0.0, c = 0.0;
    for (double th : neighbor_headings) {
        s += std::sin(th);
        c += std::cos(th);
    }
    if (std::hypot(s, c) < 1e-12) return std::nullopt;  // antipodal cancellation
    return std::atan2(s, c);
}

double LeaderMotion::heading(double t) const {
    switch (kind) {
        case Kind::Rotate: return wrap_angle(kTwoPi * freq_hz * t);
        case Kind::Oscillate: return wrap_angle(amplitude * std::sin(kTwoPi * freq_hz * t));
    }
    return 0.0;
}

HeadingTrajectory simulate_heading(const InteractionGraph& g, const LeaderMotion& motion,
                                   double omega0, double duration, const HeadingOptions& opts) {
    const int n = g.n_nodes();
    const int leader = g.leader();
    const double dT = opts.update_period;
    if (dT <= 0.0 || duration <= 0.0) throw std::invalid_argument("simulate_heading: bad time arguments");
    if (motion.freq_hz > 0.0 && duration < 4.0 / motion.freq_hz)
        throw std::invalid_argument("simulate_heading: duration must cover >= 4 leader periods");
    const double sample_dt = opts.sample_dt > 0.0 ? opts.sample_dt : dT;
    const auto adj = g.adjacency_lists();
    for (int v = 0; v < n; ++v)
        if (v != leader && adj[v].empty())
            throw std::invalid_argument("simulate_heading: follower " + std::to_string(v) +
                                        " has no neighbors");

    // Per-agent RNG streams keep the run independent of evaluation order.
    std::vector<Rng> agent_rng;
    agent_rng.reserve(n);
    for (int v = 0; v < n; ++v) agent_rng.push_back(Rng::substream(opts.seed, static_cast<std::uint64_t>(v)));

    std::vector<double> published(n, 0.0);
    for (int v = 0; v < n; ++v)
        if (v != leader) published[v] = agent_rng[v].uniform(-kPi, kPi);

    // Event queue over follower ticks; ties resolved by agent index.
    using Event = std::pair<double, int>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
    for (int v = 0; v < n; ++v)
        if (v != leader) queue.push({agent_rng[v].uniform(0.0, dT), v});  // staggered start

    const int samples = static_cast<int>(std::floor(duration / sample_dt)) + 1;
    HeadingTrajectory traj{{}, {}, motion, dT, omega0, g, opts.seed};
    traj.times.resize(samples);
    traj.headings.resize(samples, n);

    int next_sample = 0;
    std::vector<double> neighbor_buf;
    auto record_until = [&](double t) {
        while (next_sample < samples && next_sample * sample_dt <= t + 1e-12) {
            const double ts = next_sample * sample_dt;
            traj.times[next_sample] = ts;
            for (int v = 0; v < n; ++v)
                traj.headings(next_sample, v) = v == leader ? motion.heading(ts) : published[v];
            ++next_sample;
        }
    };

    while (!queue.empty()) {
        const auto [t, v] = queue.top();
        queue.pop();
        if (t > duration) break;
        record_until(std::nextafter(t, 0.0));  // samples strictly before the event fire first

        neighbor_buf.clear();
        for (int u : adj[v]) neighbor_buf.push_back(u == leader ? motion.heading(t) : published[u]);
        const auto target = heading_target(neighbor_buf);
        if (target) {
            const double delta = wrap_angle(*target - published[v]);
            published[v] = wrap_angle(published[v] + omega0 * dT * delta);
        }
        const double eta = opts.jitter > 0.0 ? agent_rng[v].uniform(-1.0, 1.0) : 0.0;
        queue.push({t + dT * (1.0 + opts.jitter * eta), v});
    }
    record_until(duration);
    return traj;
}

FollowMetrics follow_metric(const HeadingTrajectory& traj) {
    const int samples = static_cast<int>(traj.times.size());
    if (samples < 2) throw std::invalid_argument("follow_metric: empty trajectory");
    const int n = traj.headings.cols();
    const int leader = traj.graph.leader();

    FollowMetrics m;
    m.per_agent = Eigen::VectorXd::Zero(n - 1);
    double pol_acc = 0.0;
    double time_acc = 0.0;
    Eigen::VectorXd cos_prev(n - 1), cos_cur(n - 1);
    auto fill_cos = [&](int s, Eigen::VectorXd& out) {
        const double th_l = traj.headings(s, leader);
        int r = 0;
        for (int v = 0; v < n; ++v)
            if (v != leader) out(r++) = std::cos(traj.headings(s, v) - th_l);
    };
    auto order = [&](int s) {
        cplx acc(0.0, 0.0);
        for (int v = 0; v < n; ++v) acc += std::polar(1.0, traj.headings(s, v));
        return std::abs(acc) / static_cast<double>(n);
    };

    fill_cos(0, cos_prev);
    double order_prev = order(0);
    for (int s = 1; s < samples; ++s) {
        const double h = traj.times[s] - traj.times[s - 1];
        fill_cos(s, cos_cur);
        const double order_cur = order(s);
        m.per_agent += 0.5 * h * (cos_prev + cos_cur);
        pol_acc += 0.5 * h * (order_prev + order_cur);
        time_acc += h;
        cos_prev.swap(cos_cur);
        order_prev = order_cur;
    }
    m.per_agent /= time_acc;
    m.polarization = pol_acc / time_acc;
    m.collective = m.per_agent.squaredNorm();
    return m;
}

HeadingTrajectory continuous_heading_limit(const InteractionGraph& g, const LeaderMotion& motion,
                                           double omega0, double dt, double duration,
                                           double sample_dt) {
    const int n = g.n_nodes();
    const int leader = g.leader();
    if (dt <= 0.0 || duration <= 0.0)
        throw std::invalid_argument("continuous_heading_limit: bad time arguments");
    const auto adj = g.adjacency_lists();
    for (int v = 0; v < n; ++v)
        if (v != leader && adj[v].empty())
            throw std::invalid_argument("continuous_heading_limit: follower " + std::to_string(v) +
                                        " has no neighbors");

    std::vector<double> theta(n, 0.0);
    std::vector<double> neighbor_buf;
    auto rhs = [&](const std::vector<double>& th, double t, std::vector<double>& out) {
        for (int v = 0; v < n; ++v) {
            if (v == leader) {
                out[v] = 0.0;
                continue;
            }
            neighbor_buf.clear();
            for (int u : adj[v]) neighbor_buf.push_back(u == leader ? motion.heading(t) : th[u]);
            const auto target = heading_target(neighbor_buf);
            out[v] = target ? omega0 * wrap_angle(*target - th[v]) : 0.0;
        }
    };

    const int samples = static_cast<int>(std::floor(duration / sample_dt)) + 1;
    HeadingTrajectory traj{{}, {}, motion, dt, omega0, g, 0};
    traj.times.resize(samples);
    traj.headings.resize(samples, n);

    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = 0.0;
    int next_sample = 0;
    auto record_until = [&](double now) {
        while (next_sample < samples && next_sample * sample_dt <= now + 1e-12) {
            const double ts = next_sample * sample_dt;
            traj.times[next_sample] = ts;
            for (int v = 0; v < n; ++v)
                traj.headings(next_sample, v) = v == leader ? motion.heading(ts) : wrap_angle(theta[v]);
            ++next_sample;
        }
    };
    record_until(0.0);
    while (t < duration - 1e-12) {
        const double h = std::min(dt, duration - t);
        rhs(theta, t, k1);
        for (int v = 0; v < n; ++v) tmp[v] = theta[v] + 0.5 * h * k1[v];
        rhs(tmp, t + 0.5 * h, k2);
        for (int v = 0; v < n; ++v) tmp[v] = theta[v] + 0.5 * h * k2[v];
        rhs(tmp, t + 0.5 * h, k3);
        for (int v = 0; v < n; ++v) tmp[v] = theta[v] + h * k3[v];
        rhs(tmp, t + h, k4);
        for (int v = 0; v < n; ++v)
            theta[v] = wrap_angle(theta[v] + (h / 6.0) * (k1[v] + 2.0 * k2[v] + 2.0 * k3[v] + k4[v]));
        t += h;
        record_until(t);
    }
    return traj;
}

Eigen::VectorXcd heading_gains(const HeadingTrajectory& traj, double settle_fraction) {
    if (traj.motion.kind != LeaderMotion::Kind::Oscillate)
        throw std::invalid_argument("heading_gains: requires an oscillating leader");
    const int n = traj.headings.cols();
    const int leader = traj.graph.leader();
    const double omega = kTwoPi * traj.motion.freq_hz;

    Eigen::MatrixXd followers(traj.headings.rows(), n - 1);
    int r = 0;
    for (int v = 0; v < n; ++v)
        if (v != leader) followers.col(r++) = traj.headings.col(v);
    Eigen::VectorXcd c = project_on_tone(followers, traj.times, omega, settle_fraction, 3);
    // Leader heading is amplitude*sin(wt) = Re[-i a e^{i w t}].
    return c / (cplx(0.0, -1.0) * traj.motion.amplitude);
}

HeadingCalibration calibrate_heading_rate(int n_total, double target_hz) {
    if (n_total < 4) throw std::invalid_argument("calibrate_heading_rate: n_total too small");
    const RingResponse sparse = RingResponse::unweighted(n_total, 2, 1.0);
    const RingResponse dense = RingResponse::unweighted(n_total, n_total - 1, 1.0);
    auto diff = [&](double w) { return sparse.h_squared(w) - dense.h_squared(w); };

    double lo = 1e-4, hi = 10.0;
    if (diff(lo) >= 0.0 || diff(hi) <= 0.0)
        throw std::runtime_error("calibrate_heading_rate: no response crossing bracketed");
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (diff(mid) < 0.0 ? lo : hi) = mid;
    }
    HeadingCalibration cal;
    cal.crossing_omega = std::sqrt(lo * hi);
    cal.target_hz = target_hz;
    cal.omega0 = kTwoPi * target_hz / cal.crossing_omega;
    return cal;
}

namespace {

// Seed-averaged collective follow metric for a rotating leader, common random
// numbers across calls so the bisection below sees a deterministic function.
double mean_rotation_h2(const InteractionGraph& g, double freq_hz, double omega0, int seeds,
                        std::uint64_t seed_base) {
    const double duration = std::max(4.0 / freq_hz, 120.0);
    LeaderMotion motion;
    motion.kind = LeaderMotion::Kind::Rotate;
    motion.freq_hz = freq_hz;
    std::vector<double> h2(seeds, 0.0);
    parallel_for(seeds, [&](int s) {
        HeadingOptions opts;
        opts.seed = seed_base + static_cast<std::uint64_t>(s);
        h2[s] = follow_metric(simulate_heading(g, motion, omega0, duration, opts)).collective;
    });
    double sum = 0.0;
    for (double v : h2) sum += v;
    return sum / seeds;
}

}  // namespace

RotationCalibration calibrate_rotation_rate(int n_total, double target_hz, int seeds,
                                            std::uint64_t seed_base) {
    if (n_total < 4) throw std::invalid_argument("calibrate_rotation_rate: n_total too small");
    if (seeds < 1) throw std::invalid_argument("calibrate_rotation_rate: seeds must be >= 1");
    const InteractionGraph sparse = ring_lattice(n_total, 2);
    const InteractionGraph dense = ring_lattice(n_total, n_total - 1);

    // The dense graph tracks the ramp collectively: raising omega0 shrinks its
    // uniform lag and lifts its H^2 past the ring's, so the difference below
    // changes sign exactly once over a wide omega0 bracket.
    auto diff = [&](double w0) {
        return mean_rotation_h2(sparse, target_hz, w0, seeds, seed_base) -
               mean_rotation_h2(dense, target_hz, w0, seeds, seed_base);
    };

    // Upper bracket stays well below the discrete-update stability limit
    // omega0 dT ~ 1, where both graphs stop tracking and the sign flips back.
    double lo = 0.25, hi = 8.0;
    if (diff(lo) <= 0.0 || diff(hi) >= 0.0)
        throw std::runtime_error("calibrate_rotation_rate: no crossing bracketed");
    for (int it = 0; it < 24; ++it) {
        const double mid = std::sqrt(lo * hi);
        (diff(mid) > 0.0 ? lo : hi) = mid;
    }
    RotationCalibration cal;
    cal.omega0 = std::sqrt(lo * hi);
    cal.target_hz = target_hz;
    cal.seeds = seeds;
    return cal;
}

}  // namespace consensus
