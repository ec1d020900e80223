#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "consensus/netgen.hpp"
#include "consensus/spectral.hpp"
#include "consensus/timesim.hpp"

using namespace consensus;
using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

TEST_CASE("zero input stays at rest") {
    const auto sys = build_consensus_system(ring_lattice(9, 2), 1.0);
    const auto traj = simulate_linear(sys, {0.0, 0.5, 0.0}, 10.0, 0.01);
    CHECK(traj.states.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scalar follower is a first-order low-pass") {
    InteractionGraph g(2, 0);
    g.add_edge(0, 1);
    const auto sys = build_consensus_system(g, 1.0);
    const double omega = 0.5;
    const auto traj = simulate_linear(sys, {1.0, omega, 0.3}, 300.0, 0.01);
    const auto gains = steady_state_amplitude(traj, omega);
    const cplx expected = 1.0 / cplx(1.0, omega);
    CHECK(std::abs(gains(0) - expected) < 1e-6);
}

TEST_CASE("projection identity on a synthetic sinusoid") {
    LinearTrajectory traj;
    traj.dt = 0.01;
    traj.input = {2.0, 0.7, 0.4};
    const int steps = 40000;
    traj.times.resize(steps + 1);
    traj.states.resize(steps + 1, 1);
    const cplx c(0.3, -0.8);
    for (int s = 0; s <= steps; ++s) {
        traj.times[s] = s * traj.dt;
        traj.states(s, 0) = std::real(c * std::polar(1.0, traj.input.omega * traj.times[s]));
    }
    const auto gains = steady_state_amplitude(traj, traj.input.omega);
    const cplx expected = c / std::polar(traj.input.amplitude, traj.input.phase);
    CHECK(std::abs(gains(0) - expected) < 1e-5);  // trapezoid error ~ (omega dt)^2

    traj.states.setZero();
    CHECK(steady_state_amplitude(traj, traj.input.omega).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("window shorter than three periods is rejected") {
    LinearTrajectory traj;
    traj.dt = 0.01;
    traj.input = {1.0, 0.05, 0.0};
    traj.times = {0.0, 0.01, 0.02};
    traj.states = Eigen::MatrixXd::Zero(3, 1);
    CHECK_THROWS(steady_state_amplitude(traj, 0.05));
}

TEST_CASE("instability aborts the integration") {
    const auto sys = build_consensus_system(ring_lattice(5, 2), 1.0);
    CHECK_THROWS(simulate_linear(sys, {1.0, 0.3, 0.0}, 100.0, 10.0));
}

TEST_CASE("time-domain amplitudes match the frequency response") {
    const auto sys = build_consensus_system(ring_lattice(65, 4), 1.0);
    const double omega = 0.1;
    const double speed = consensus_speed(sys);
    const auto traj = simulate_linear(sys, {1.0, omega, 0.0}, 12.0 / speed, 0.05);
    const auto measured = steady_state_amplitude(traj, omega);
    const auto rv = frequency_response(sys, omega);
    for (int i = 0; i < sys.n_followers(); ++i)
        REQUIRE(std::abs(measured(i)) == doctest::Approx(std::abs(rv.gains(i))).epsilon(0.01));
}

TEST_CASE("consensus speed matches the step-response decay rate") {
    const auto sys = build_consensus_system(ring_lattice(17, 2), 1.0);
    const double speed = consensus_speed(sys);
    // step input (omega = 0): all followers relax to 1; the slowest mode
    // dominates the tail of log|1 - x_i|
    const auto traj = simulate_linear(sys, {1.0, 0.0, 0.0}, 14.0 / speed, 0.02);
    const int last = static_cast<int>(traj.times.size()) - 1;
    const int mid = last / 2;
    const double r_mid = (traj.states.row(mid).array() - 1.0).abs().maxCoeff();
    const double r_last = (traj.states.row(last).array() - 1.0).abs().maxCoeff();
    const double fitted = std::log(r_mid / r_last) / (traj.times[last] - traj.times[mid]);
    CHECK(fitted == doctest::Approx(speed).epsilon(0.02));
}

TEST_CASE("circular mean of neighbor headings") {
    CHECK(*heading_target(std::vector<double>{pi / 2, pi / 2}) == doctest::Approx(pi / 2));
    CHECK(*heading_target(std::vector<double>{0.0, pi / 2}) == doctest::Approx(pi / 4));
    CHECK(!heading_target(std::vector<double>{0.0, pi}).has_value());
    CHECK_THROWS(heading_target(std::vector<double>{}));
}

TEST_CASE("angle wrapping") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(pi) == doctest::Approx(pi));
    CHECK(wrap_angle(-pi) == doctest::Approx(pi));
    CHECK(wrap_angle(3 * pi) == doctest::Approx(pi));
    CHECK(wrap_angle(2 * pi + 0.25) == doctest::Approx(0.25));
    for (double t : {-12.3, -3.2, 7.9, 100.0}) {
        const double w = wrap_angle(t);
        CHECK(w > -pi);
        CHECK(w <= pi);
        CHECK(std::abs(std::remainder(w - t, 2 * pi)) < 1e-12);
    }
}

TEST_CASE("static leader pulls the swarm to consensus") {
    const auto g = ring_lattice(11, 4);
    const LeaderMotion still{LeaderMotion::Kind::Rotate, 0.0, 0.0};
    const auto traj = simulate_heading(g, still, 1.0, 400.0, {.seed = 3});
    const int last = static_cast<int>(traj.times.size()) - 1;
    for (int v = 0; v < 11; ++v) CHECK(std::abs(traj.headings(last, v)) < 1e-3);
    const auto m = follow_metric(traj);
    CHECK(m.polarization > 0.5);
    CHECK(m.polarization <= 1.0);
}

TEST_CASE("headings stay wrapped and metrics stay in range") {
    const auto g = ring_lattice(11, 2);
    const LeaderMotion rotate{LeaderMotion::Kind::Rotate, 0.05, 0.0};
    const auto traj = simulate_heading(g, rotate, 2.0, 120.0, {.seed = 5});
    CHECK(traj.headings.maxCoeff() <= pi);
    CHECK(traj.headings.minCoeff() > -pi);
    const auto m = follow_metric(traj);
    CHECK(m.per_agent.maxCoeff() <= 1.0);
    CHECK(m.per_agent.minCoeff() >= -1.0);
    CHECK(m.collective >= 0.0);
    CHECK(m.collective <= 10.0);
    CHECK(m.polarization >= 0.0);
    CHECK(m.polarization <= 1.0);
}

TEST_CASE("leader heading advances exactly at the set frequency") {
    const auto g = ring_lattice(5, 2);
    const LeaderMotion rotate{LeaderMotion::Kind::Rotate, 0.02, 0.0};
    const auto traj = simulate_heading(g, rotate, 1.0, 250.0, {.seed = 1});
    for (std::size_t s = 0; s < traj.times.size(); s += 37)
        REQUIRE(traj.headings(s, 0) ==
                doctest::Approx(wrap_angle(2 * pi * 0.02 * traj.times[s])));
}

TEST_CASE("heading simulation is deterministic in the seed") {
    const auto g = ring_lattice(11, 2);
    const LeaderMotion rotate{LeaderMotion::Kind::Rotate, 0.05, 0.0};
    const auto a = simulate_heading(g, rotate, 1.5, 100.0, {.seed = 9});
    const auto b = simulate_heading(g, rotate, 1.5, 100.0, {.seed = 9});
    CHECK(a.headings == b.headings);
    const auto c = simulate_heading(g, rotate, 1.5, 100.0, {.seed = 10});
    CHECK(a.headings != c.headings);
}

TEST_CASE("short runs are rejected") {
    const auto g = ring_lattice(5, 2);
    CHECK_THROWS(simulate_heading(g, {LeaderMotion::Kind::Rotate, 0.1, 0.0}, 1.0, 10.0, {}));
}

TEST_CASE("follow metric on hand-built trajectories") {
    InteractionGraph g(2, 0);
    g.add_edge(0, 1);
    HeadingTrajectory traj{{}, {}, {LeaderMotion::Kind::Rotate, 0.01, 0.0}, 0.1, 1.0, g, 0};
    const int samples = 101;
    traj.times.resize(samples);
    traj.headings.resize(samples, 2);
    for (int s = 0; s < samples; ++s) {
        traj.times[s] = s * 0.1;
        traj.headings(s, 0) = wrap_angle(2 * pi * 0.01 * traj.times[s]);
    }

    SUBCASE("identical follower") {
        traj.headings.col(1) = traj.headings.col(0);
        const auto m = follow_metric(traj);
        CHECK(m.per_agent(0) == doctest::Approx(1.0));
        CHECK(m.collective == doctest::Approx(1.0));
        CHECK(m.polarization == doctest::Approx(1.0));
    }
    SUBCASE("quarter-turn offset") {
        for (int s = 0; s < samples; ++s)
            traj.headings(s, 1) = wrap_angle(traj.headings(s, 0) + pi / 2);
        const auto m = follow_metric(traj);
        CHECK(m.per_agent(0) == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(m.polarization == doctest::Approx(std::sqrt(0.5)));
    }
}

TEST_CASE("continuous limit fixed point") {
    const auto g = ring_lattice(7, 2);
    const LeaderMotion still{LeaderMotion::Kind::Rotate, 0.0, 0.0};
    const auto traj = continuous_heading_limit(g, still, 1.0, 0.01, 20.0, 0.1);
    CHECK(traj.headings.cwiseAbs().maxCoeff() == 0.0);  // starts aligned at zero
}

TEST_CASE("continuous limit matches the linearized system for small oscillations") {
    const auto g = ring_lattice(11, 2);
    const double freq_hz = 0.02, omega = 2 * pi * freq_hz, omega0 = 1.0;
    const LeaderMotion osc{LeaderMotion::Kind::Oscillate, freq_hz, 0.1};
    const auto traj = continuous_heading_limit(g, osc, omega0, 0.01, 1200.0, 0.1);
    const auto gains = heading_gains(traj);
    const auto rv = frequency_response(build_consensus_system(g, omega0), omega);
    for (int i = 0; i < 10; ++i)
        REQUIRE(std::abs(gains(i) - rv.gains(i)) <= 0.02 * std::abs(rv.gains(i)));
}

TEST_CASE("discrete protocol converges to the continuous limit") {
    const auto g = ring_lattice(11, 2);
    const double freq_hz = 0.02, omega0 = 1.0;
    const LeaderMotion osc{LeaderMotion::Kind::Oscillate, freq_hz, 0.1};
    const auto reference = continuous_heading_limit(g, osc, omega0, 0.005, 1000.0, 0.1);
    const auto fine = simulate_heading(g, osc, omega0, 1000.0,
                                       {.update_period = 0.1 / 8, .jitter = 0.0, .sample_dt = 0.1,
                                        .seed = 2});
    const auto m_ref = follow_metric(reference);
    const auto m_fine = follow_metric(fine);
    // initial transients differ (random vs aligned start), so compare the
    // steady tone instead of the full-run H_i average
    const auto g_ref = heading_gains(reference);
    const auto g_fine = heading_gains(fine);
    for (int i = 0; i < 10; ++i)
        REQUIRE(std::abs(g_fine(i) - g_ref(i)) <= 0.01 * std::abs(g_ref(i)) + 1e-4);
    CHECK(m_ref.polarization > 0.9);
    CHECK(m_fine.polarization > 0.85);
}

TEST_CASE("nonlinear gains match the linear theory for small leader amplitude") {
    const auto cal = calibrate_heading_rate();
    for (int k : {2, 10}) {
        const auto g = ring_lattice(11, k);
        // low leader frequency: stale asynchronous reads act like an extra
        // coupling delay of about dT/2, an effect that grows with omega and
        // must stay inside the 5% band
        const double freq_hz = 0.005, omega = 2 * pi * freq_hz;
        const LeaderMotion osc{LeaderMotion::Kind::Oscillate, freq_hz, 0.1};
        const auto traj = simulate_heading(g, osc, cal.omega0, 1600.0, {.seed = 4});
        const auto gains = heading_gains(traj);
        const auto rv = frequency_response(build_consensus_system(g, cal.omega0), omega);
        for (int i = 0; i < 10; ++i)
            REQUIRE(std::abs(gains(i) - rv.gains(i)) <= 0.05 * std::abs(rv.gains(i)));
    }
}

TEST_CASE("calibration places the ring crossing at the target frequency") {
    const auto cal = calibrate_heading_rate(11, 0.05);
    CHECK(cal.target_hz == 0.05);
    CHECK(cal.omega0 == doctest::Approx(2 * pi * 0.05 / cal.crossing_omega));

    const auto sparse = build_consensus_system(ring_lattice(11, 2), cal.omega0);
    const auto dense = build_consensus_system(ring_lattice(11, 10), cal.omega0);
    auto h2 = [](const ConsensusSystem& sys, double w) {
        return collective_response(frequency_response(sys, w));
    };
    const double w_c = 2 * pi * 0.05;
    CHECK(std::abs(h2(sparse, w_c) - h2(dense, w_c)) < 1e-6);
    CHECK(h2(dense, w_c * 0.5) > h2(sparse, w_c * 0.5));
    CHECK(h2(sparse, w_c * 2.0) > h2(dense, w_c * 2.0));
}

TEST_CASE("rotation calibration balances ring and complete tracking at the target") {
    const auto cal = calibrate_rotation_rate(11, 0.05, 4);
    // below the discrete stability limit, above the small-signal LTI value
    // (ramp tracking with phase slip needs a faster relaxation)
    CHECK(cal.omega0 > 2.0);
    CHECK(cal.omega0 < 8.0);
    CHECK(cal.seeds == 4);

    const auto again = calibrate_rotation_rate(11, 0.05, 4);
    CHECK(cal.omega0 == again.omega0);

    // defining property: the seed-averaged H^2 of the two graphs coincide at
    // the target frequency, so neither dominates by a wide margin there
    const LeaderMotion rot{LeaderMotion::Kind::Rotate, 0.05, 0.0};
    auto mean_h2 = [&](int k) {
        double sum = 0.0;
        for (std::uint64_t s = 0; s < 4; ++s)
            sum += follow_metric(simulate_heading(ring_lattice(11, k), rot, cal.omega0, 120.0,
                                                  {.seed = 1000 + s}))
                       .collective;
        return sum / 4.0;
    };
    CHECK(std::abs(mean_h2(2) - mean_h2(10)) < 2.5);
}
