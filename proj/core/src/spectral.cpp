#include "consensus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include "consensus/circulant.hpp"
#include "consensus/netgen.hpp"
#include "consensus/parallel.hpp"
#include "consensus/rng.hpp"

namespace consensus {

namespace {
using cplx = std::complex<double>;

void require_sorted(const std::vector<double>& omegas) {
    if (!std::is_sorted(omegas.begin(), omegas.end()))
        throw std::invalid_argument("frequency grid must be sorted ascending");
}
}  // namespace

ResponseVector frequency_response(const ConsensusSystem& sys, double omega) {
    if (omega < 0.0) throw std::invalid_argument("frequency_response: omega must be >= 0");
    const int n = sys.n_followers();
    Eigen::MatrixXcd a = (-sys.w_follower).cast<cplx>();
    a.diagonal().array() += cplx(0.0, omega);

    // i*0*I - W_F is singular iff some follower component has no path to the
    // leader; consensus_speed detects that case with a precise error.
    if (omega == 0.0) consensus_speed(sys);

    ResponseVector rv;
    rv.omega = omega;
    rv.gains = Eigen::PartialPivLU<Eigen::MatrixXcd>(a).solve(sys.w_leader.cast<cplx>().eval());
    return rv;
}

double collective_response(const ResponseVector& rv) { return rv.gains.squaredNorm(); }

GroundedEigenSolver::GroundedEigenSolver(const ConsensusSystem& sys) : omega0_(sys.omega0) {
    const int n = sys.n_followers();
    // W_F = omega0 (D^{-1} A_FF - I) with D from the full-graph degrees.
    // Recover D and A_FF from the rows: off-diagonal w_ij = omega0 a_ij / k_i.
    Eigen::VectorXd d(n);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    // k_i = omega0 / w_ij for any neighbor j; equivalently the row pattern is
    // a_ij = w_ij k_i / omega0. Row sums give k_i directly:
    // sum_{j != i} w_ij + w_leader_i = omega0 * (count of neighbors)/k_i... use
    // the largest off-diagonal entry instead: w_ij is omega0/k_i for all
    // neighbors, so k_i = omega0 / max_j w_ij (rows with at least one link).
    for (int i = 0; i < n; ++i) {
        double row_max = sys.w_leader(i);
        for (int j = 0; j < n; ++j)
            if (j != i) row_max = std::max(row_max, sys.w_follower(i, j));
        if (row_max <= 0.0) throw std::invalid_argument("GroundedEigenSolver: isolated follower row");
        d(i) = omega0_ / row_max;
    }
    d_inv_sqrt_ = d.cwiseSqrt().cwiseInverse();
    const Eigen::VectorXd d_sqrt = d.cwiseSqrt();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i) b(i, j) = sys.w_follower(i, j) / omega0_ * d_sqrt(i) / d_sqrt(j);
    // b_ij = (a_ij / k_i) sqrt(k_i)/sqrt(k_j) = a_ij / sqrt(k_i k_j): symmetric
    // for any row-normalized system. Guard against inputs outside that family.
    const double asym = (b - b.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-9)
        throw std::invalid_argument(
            "GroundedEigenSolver: system is not symmetrizable by degree scaling; use the LU path");
    b = 0.5 * (b + b.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    if (es.info() != Eigen::Success) throw std::runtime_error("GroundedEigenSolver: eigensolver failed");
    lambda_ = es.eigenvalues();
    q_ = es.eigenvectors();
    y_ = q_.transpose() * (d_sqrt.asDiagonal() * sys.w_leader);
}

Eigen::VectorXcd GroundedEigenSolver::gains(double omega) const {
    const int n = static_cast<int>(lambda_.size());
    if (omega == 0.0 && omega0_ * (1.0 - lambda_max()) <= 1e-12 * omega0_)
        throw std::runtime_error("GroundedEigenSolver: singular at omega=0 (disconnected from leader)");
    Eigen::VectorXcd z(n);
    for (int m = 0; m < n; ++m)
        z(m) = y_(m) / cplx(omega0_ * (1.0 - lambda_(m)), omega);
    return d_inv_sqrt_.asDiagonal() * (q_ * z).eval();
}

double GroundedEigenSolver::h_squared(double omega) const { return gains(omega).squaredNorm(); }

ResponseSpectrum response_spectrum(const ConsensusSystem& sys, const std::vector<double>& omegas,
                                   const SpectrumOptions& opts) {
    require_sorted(omegas);
    ResponseSpectrum spectrum;
    spectrum.points.resize(omegas.size());

    if (opts.method == SolveMethod::Eigendecomposition) {
        const GroundedEigenSolver solver(sys);
        parallel_for(static_cast<int>(omegas.size()), [&](int idx) {
            SpectrumPoint& pt = spectrum.points[idx];
            pt.omega = omegas[idx];
            try {
                Eigen::VectorXcd g = solver.gains(omegas[idx]);
                pt.h_squared = g.squaredNorm();
                if (opts.with_gains) pt.gains = std::move(g);
            } catch (const std::exception& e) {
                throw std::runtime_error("at omega=" + std::to_string(omegas[idx]) + ": " + e.what());
            }
        });
    } else {
        parallel_for(static_cast<int>(omegas.size()), [&](int idx) {
            SpectrumPoint& pt = spectrum.points[idx];
            pt.omega = omegas[idx];
            try {
                ResponseVector rv = frequency_response(sys, omegas[idx]);
                pt.h_squared = collective_response(rv);
                if (opts.with_gains) pt.gains = std::move(rv.gains);
            } catch (const std::exception& e) {
                throw std::runtime_error("at omega=" + std::to_string(omegas[idx]) + ": " + e.what());
            }
        });
    }
    return spectrum;
}

double consensus_speed(const ConsensusSystem& sys) {
    const GroundedEigenSolver solver(sys);
    const double speed = sys.omega0 * (1.0 - solver.lambda_max());
    if (speed <= 1e-12 * sys.omega0)
        throw std::runtime_error(
            "consensus_speed: non-positive decay rate (followers disconnected from the leader)");
    return speed;
}

// ---------------------------------------------------------------------------

std::string model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Ring: return "ring";
        case ModelKind::Mesh: return "mesh";
        case ModelKind::Caveman: return "caveman";
        case ModelKind::RegularRandom: return "random";
    }
    return "?";
}

ModelKind model_from_name(const std::string& name) {
    if (name == "ring") return ModelKind::Ring;
    if (name == "mesh") return ModelKind::Mesh;
    if (name == "caveman") return ModelKind::Caveman;
    if (name == "random") return ModelKind::RegularRandom;
    throw std::invalid_argument("unknown model '" + name + "' (expected ring|mesh|caveman|random)");
}

std::vector<int> valid_degrees(const ModelSpec& model) {
    const int n = model.n_total;
    std::vector<int> out;
    switch (model.kind) {
        case ModelKind::Ring:
            for (int k = 2; k <= n - 2; k += 2) out.push_back(k);
            out.push_back(n - 1);
            break;
        case ModelKind::Mesh: {
            const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
            if (side * side != n) throw std::invalid_argument("mesh model: n_total must be a square");
            out = mesh_valid_degrees(side);
            break;
        }
        case ModelKind::Caveman:
            for (int k = 2; k < n; ++k)
                if (n % (k + 1) == 0 && n / (k + 1) >= 2) out.push_back(k);
            break;
        case ModelKind::RegularRandom:
            for (int k = 2; k <= n - 2; ++k)
                if ((static_cast<long>(k) * n) % 2 == 0) out.push_back(k);
            break;
    }
    return out;
}

InteractionGraph make_model_graph(const ModelSpec& model, int k, int sample_index) {
    switch (model.kind) {
        case ModelKind::Ring: return ring_lattice(model.n_total, k, model.leader);
        case ModelKind::Mesh: {
            const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(model.n_total))));
            if (side * side != model.n_total)
                throw std::invalid_argument("mesh model: n_total must be a square");
            return mesh_2d(side, k, model.leader);
        }
        case ModelKind::Caveman: return caveman(model.n_total / (k + 1), k, model.leader);
        case ModelKind::RegularRandom: {
            Rng sub = Rng::substream(model.seed, (static_cast<std::uint64_t>(k) << 20) +
                                                     static_cast<std::uint64_t>(sample_index));
            return regular_random(model.n_total, k, sub.next_u64(), model.leader);
        }
    }
    throw std::logic_error("unreachable model kind");
}

struct DegreeResponse::Impl {
    std::unique_ptr<RingResponse> ring;
    std::unique_ptr<MeshResponse> mesh;
    std::vector<GroundedEigenSolver> solvers;  // one per sample (dense models)
    std::vector<bool> connected_flags;
    double omega0 = 1.0;

    double eval(double omega) const {
        if (ring) return ring->h_squared(omega);
        if (mesh) return mesh->h_squared(omega);
        double acc = 0.0;
        for (const auto& s : solvers) acc += s.h_squared(omega);
        return acc / static_cast<double>(solvers.size());
    }
};

DegreeResponse::DegreeResponse(const ModelSpec& model, int k, int samples) {
    auto impl = std::make_shared<Impl>();
    impl->omega0 = model.omega0;
    switch (model.kind) {
        case ModelKind::Ring:
            if (model.leader == 0) {
                impl->ring = std::make_unique<RingResponse>(
                    RingResponse::unweighted(model.n_total, k, model.omega0));
            }
            break;
        case ModelKind::Mesh:
            if (model.leader == 0) {
                const int side =
                    static_cast<int>(std::lround(std::sqrt(static_cast<double>(model.n_total))));
                impl->mesh = std::make_unique<MeshResponse>(side, k, model.omega0);
            }
            break;
        default: break;
    }
    if (!impl->ring && !impl->mesh) {
        const int n_samples = model.kind == ModelKind::RegularRandom ? std::max(1, samples) : 1;
        for (int s = 0; s < n_samples; ++s) {
            const InteractionGraph g = make_model_graph(model, k, s);
            impl->solvers.emplace_back(build_consensus_system(g, model.omega0));
        }
    }
    impl_ = std::move(impl);
}

double DegreeResponse::h_squared(double omega) const { return impl_->eval(omega); }

int optimal_degree(const ModelSpec& model, double omega, int samples) {
    const auto curve = kstar_curve(model, {omega}, samples);
    return curve.entries.front().k_star;
}

KStarCurve kstar_curve(const ModelSpec& model, const std::vector<double>& omegas, int samples) {
    require_sorted(omegas);
    const auto degrees = valid_degrees(model);
    if (degrees.empty()) throw std::invalid_argument("kstar_curve: model has no valid degrees");

    // k outer so the per-degree factorization is reused across the grid.
    std::vector<std::vector<double>> h2(degrees.size(), std::vector<double>(omegas.size()));
    parallel_for(static_cast<int>(degrees.size()), [&](int di) {
        const DegreeResponse resp(model, degrees[di], samples);
        for (std::size_t wi = 0; wi < omegas.size(); ++wi) h2[di][wi] = resp.h_squared(omegas[wi]);
    });

    KStarCurve curve;
    curve.model = model;
    curve.samples = samples;
    curve.entries.resize(omegas.size());
    for (std::size_t wi = 0; wi < omegas.size(); ++wi) {
        KStarEntry& e = curve.entries[wi];
        e.omega = omegas[wi];
        e.k_star = degrees[0];
        e.h_squared = h2[0][wi];
        for (std::size_t di = 1; di < degrees.size(); ++di) {
            if (h2[di][wi] > e.h_squared) {  // strict: ties break toward smaller k
                e.h_squared = h2[di][wi];
                e.k_star = degrees[di];
            }
        }
    }
    return curve;
}

PowerLawFit fit_power_law(const KStarCurve& curve, double window_lo, double window_hi) {
    std::vector<double> lx, ly;
    for (const auto& e : curve.entries) {
        if (e.omega < window_lo || e.omega > window_hi) continue;
        lx.push_back(std::log(e.omega));
        ly.push_back(std::log(static_cast<double>(e.k_star)));
    }
    if (lx.size() < 5)
        throw std::invalid_argument("fit_power_law: fewer than 5 curve points inside the window");
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    PowerLawFit fit;
    fit.k0 = std::exp(intercept);
    fit.gamma = -slope;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.n_points = static_cast<int>(lx.size());
    return fit;
}

std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
    if (lo <= 0.0 || hi <= lo) throw std::invalid_argument("log_grid: need 0 < lo < hi");
    if (points_per_decade < 1) throw std::invalid_argument("log_grid: points_per_decade >= 1");
    const double decades = std::log10(hi / lo);
    const int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = lo * std::pow(10.0, decades * static_cast<double>(i) / (n - 1));
    grid.back() = hi;
    return grid;
}

}  // namespace consensus
