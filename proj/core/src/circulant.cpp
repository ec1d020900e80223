#include "consensus/circulant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace consensus {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
using cplx = std::complex<double>;
}  // namespace

RingResponse::RingResponse(int n_nodes, std::vector<double> distance_weights, double omega0)
    : n_(n_nodes), omega0_(omega0), weights_(std::move(distance_weights)) {
    if (n_ < 3) throw std::invalid_argument("RingResponse: need at least 3 nodes");
    if (static_cast<int>(weights_.size()) != n_ / 2)
        throw std::invalid_argument("RingResponse: expected floor(n/2) distance weights");

    // Circulant eigenvalues nu_m = -omega0 + sum_d c_d * (cos term multiplicity).
    nu_.resize(n_);
    for (int m = 0; m < n_; ++m) {
        double acc = -omega0_;
        for (int d = 1; d <= n_ / 2; ++d) {
            const double c = weights_[d - 1];
            if (c == 0.0) continue;
            const double mult = (2 * d == n_) ? 1.0 : 2.0;
            acc += c * mult * std::cos(kTwoPi * m * d / n_);
        }
        nu_[m] = acc;
    }
}

RingResponse RingResponse::unweighted(int n_nodes, int k, double omega0) {
    if (k < 2 || k > n_nodes - 1) throw std::invalid_argument("RingResponse: invalid ring degree");
    if (k % 2 != 0 && k != n_nodes - 1)
        throw std::invalid_argument("RingResponse: odd degree only valid all-to-all");
    std::vector<double> c(n_nodes / 2, 0.0);
    if (k == n_nodes - 1) {
        for (auto& w : c) w = omega0 / k;
    } else {
        for (int d = 1; d <= k / 2; ++d) c[d - 1] = omega0 / k;
    }
    return RingResponse(n_nodes, std::move(c), omega0);
}

bool RingResponse::connected() const {
    int g = n_;
    for (int d = 1; d <= n_ / 2; ++d)
        if (weights_[d - 1] != 0.0) g = std::gcd(g, d);
    return g == 1;
}

std::complex<double> RingResponse::resolvent_g0(cplx s) const {
    cplx acc(0.0, 0.0);
    for (int m = 0; m < n_; ++m) acc += 1.0 / (s - nu_[m]);
    return acc / static_cast<double>(n_);
}

double RingResponse::h_squared(double omega) const {
    if (omega == 0.0) {
        if (!connected())
            throw std::invalid_argument("RingResponse: zero-frequency response of a disconnected ring");
        return static_cast<double>(n_ - 1);
    }
    const cplx s(0.0, omega);
    // Parseval: sum_j |g_j|^2 = (1/n) sum_m |s - nu_m|^{-2}.
    double total = 0.0;
    cplx g0(0.0, 0.0);
    for (int m = 0; m < n_; ++m) {
        const cplx den = s - nu_[m];
        total += 1.0 / std::norm(den);
        g0 += 1.0 / den;
    }
    total /= n_;
    g0 /= static_cast<double>(n_);
    const double g0n = std::norm(g0);
    return (total - g0n) / g0n;
}

Eigen::VectorXcd RingResponse::forward_dft(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd out(n_);
    for (int m = 0; m < n_; ++m) {
        const cplx w = std::polar(1.0, -kTwoPi * m / n_);
        cplx phase(1.0, 0.0), acc(0.0, 0.0);
        for (int j = 0; j < n_; ++j) {
            acc += x(j) * phase;
            phase *= w;
            if ((j & 63) == 63) phase = std::polar(1.0, -kTwoPi * m * ((j + 1) % n_) / n_);
        }
        out(m) = acc;
    }
    return out;
}

Eigen::VectorXcd RingResponse::inverse_dft(const Eigen::VectorXcd& x_hat) const {
    Eigen::VectorXcd out(n_);
    for (int j = 0; j < n_; ++j) {
        const cplx w = std::polar(1.0, kTwoPi * j / n_);
        cplx phase(1.0, 0.0), acc(0.0, 0.0);
        for (int m = 0; m < n_; ++m) {
            acc += x_hat(m) * phase;
            phase *= w;
            if ((m & 63) == 63) phase = std::polar(1.0, kTwoPi * j * ((m + 1) % n_) / n_);
        }
        out(j) = acc / static_cast<double>(n_);
    }
    return out;
}

Eigen::VectorXcd RingResponse::gains(double omega) const {
    if (omega == 0.0) {
        if (!connected())
            throw std::invalid_argument("RingResponse: zero-frequency response of a disconnected ring");
        return Eigen::VectorXcd::Ones(n_ - 1);
    }
    const cplx s(0.0, omega);
    // g = (s I - W)^{-1} e_0 has Fourier coefficients 1/(s - nu_m).
    Eigen::VectorXcd g_hat(n_);
    for (int m = 0; m < n_; ++m) g_hat(m) = 1.0 / (s - nu_[m]);
    const Eigen::VectorXcd g = inverse_dft(g_hat);
    Eigen::VectorXcd h(n_ - 1);
    for (int j = 1; j < n_; ++j) h(j - 1) = g(j) / g(0);
    return h;
}

Eigen::VectorXcd RingResponse::solve_grounded(cplx s, const Eigen::VectorXcd& b) const {
    if (b.size() != n_ - 1) throw std::invalid_argument("RingResponse: rhs must have n-1 entries");
    // Solve (s I - W) y = b_full + alpha e_0 with alpha chosen so y_0 = 0;
    // the follower part of y then solves the grounded system.
    Eigen::VectorXcd b_full = Eigen::VectorXcd::Zero(n_);
    b_full.tail(n_ - 1) = b;
    Eigen::VectorXcd b_hat = forward_dft(b_full);
    for (int m = 0; m < n_; ++m) b_hat(m) /= (s - nu_[m]);
    Eigen::VectorXcd z = inverse_dft(b_hat);

    Eigen::VectorXcd g_hat(n_);
    for (int m = 0; m < n_; ++m) g_hat(m) = 1.0 / (s - nu_[m]);
    const Eigen::VectorXcd g = inverse_dft(g_hat);

    const cplx alpha = -z(0) / g(0);
    return (z + alpha * g).tail(n_ - 1);
}

MeshResponse::MeshResponse(int side, int k, double omega0) : side_(side), omega0_(omega0) {
    if (side < 2) throw std::invalid_argument("MeshResponse: side must be >= 2");
    // Reuse the generator's shell logic by rebuilding the offsets here from
    // squared torus distance.
    std::vector<std::pair<long, std::pair<int, int>>> all;
    for (int dx = 0; dx < side; ++dx)
        for (int dy = 0; dy < side; ++dy) {
            if (dx == 0 && dy == 0) continue;
            const int ex = std::min(dx, side - dx);
            const int ey = std::min(dy, side - dy);
            all.push_back({static_cast<long>(ex) * ex + static_cast<long>(ey) * ey, {dx, dy}});
        }
    std::stable_sort(all.begin(), all.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    if (k < 1 || k > static_cast<int>(all.size()))
        throw std::invalid_argument("MeshResponse: invalid degree");
    if (k < static_cast<int>(all.size()) && all[k - 1].first == all[k].first)
        throw std::invalid_argument("MeshResponse: degree would split a distance shell");

    nu_.assign(static_cast<std::size_t>(side) * side, 0.0);
    for (int m1 = 0; m1 < side; ++m1)
        for (int m2 = 0; m2 < side; ++m2) {
            double acc = -omega0_;
            for (int o = 0; o < k; ++o) {
                const auto& [dx, dy] = all[o].second;
                acc += (omega0_ / k) * std::cos(kTwoPi * (static_cast<double>(m1) * dx +
                                                          static_cast<double>(m2) * dy) / side);
            }
            nu_[static_cast<std::size_t>(m1) * side + m2] = acc;
        }
}

double MeshResponse::h_squared(double omega) const {
    const std::size_t n = nu_.size();
    if (omega == 0.0) return static_cast<double>(n - 1);  // torus lattices are connected
    const cplx s(0.0, omega);
    double total = 0.0;
    cplx g0(0.0, 0.0);
    for (double nu : nu_) {
        const cplx den = s - nu;
        total += 1.0 / std::norm(den);
        g0 += 1.0 / den;
    }
    total /= static_cast<double>(n);
    g0 /= static_cast<double>(n);
    const double g0n = std::norm(g0);
    return (total - g0n) / g0n;
}

}  // namespace consensus
