#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "consensus/system.hpp"

namespace consensus {

struct ResponseVector {
    double omega = 0.0;
    Eigen::VectorXcd gains;  // h_i, one per follower
};

struct SpectrumPoint {
    double omega = 0.0;
    double h_squared = 0.0;
    std::optional<Eigen::VectorXcd> gains;
};

struct ResponseSpectrum {
    std::vector<SpectrumPoint> points;
};

// Reference path: dense complex LU solve of (i omega I - W_F) H = W_L.
// At omega = 0 the system must be leader-connected; otherwise throws.
ResponseVector frequency_response(const ConsensusSystem& sys, double omega);

// H^2 = sum_i |h_i|^2.
double collective_response(const ResponseVector& rv);

enum class SolveMethod { Lu, Eigendecomposition };

struct SpectrumOptions {
    SolveMethod method = SolveMethod::Eigendecomposition;
    bool with_gains = false;
};

// One solve per grid point (grid must be sorted ascending). Grid points are
// evaluated concurrently and reassembled in order.
ResponseSpectrum response_spectrum(const ConsensusSystem& sys, const std::vector<double>& omegas,
                                   const SpectrumOptions& opts = {});

// Fast path for many frequencies on a fixed graph. The row-normalized
// follower block is similar to a symmetric matrix via D^{1/2}, so one real
// symmetric eigendecomposition yields the resolvent at every omega.
class GroundedEigenSolver {
  public:
    explicit GroundedEigenSolver(const ConsensusSystem& sys);

    Eigen::VectorXcd gains(double omega) const;
    double h_squared(double omega) const;

    // Largest eigenvalue of the scaled adjacency; < 1 iff leader-connected.
    double lambda_max() const { return lambda_.size() ? lambda_(lambda_.size() - 1) : 0.0; }

  private:
    double omega0_;
    Eigen::VectorXd lambda_;     // eigenvalues of D^{-1/2} A_FF D^{-1/2}, ascending
    Eigen::MatrixXd q_;          // eigenvectors
    Eigen::VectorXd y_;          // Q^T D^{1/2} W_L
    Eigen::VectorXd d_inv_sqrt_;
};

// Smallest decay rate of the grounded dynamics: min Re(eig(-W_F)). Equals
// omega0 (1 - lambda_max). Throws if it is not positive (follower component
// disconnected from the leader).
double consensus_speed(const ConsensusSystem& sys);

// ---------------------------------------------------------------------------
// Degree sweeps over the network models.

enum class ModelKind { Ring, Mesh, Caveman, RegularRandom };

struct ModelSpec {
    ModelKind kind = ModelKind::Ring;
    int n_total = 0;           // total nodes including the leader (mesh: side^2)
    int leader = 0;
    double omega0 = 1.0;
    std::uint64_t seed = 0;    // base seed for the random model
};

std::string model_name(ModelKind kind);
ModelKind model_from_name(const std::string& name);

// Full ordered set of valid degrees for the model at its fixed size:
// even 2..n-1 plus n-1 for the ring; cumulative whole shells for the mesh;
// k with (k+1) | n and >= 2 cliques for the caveman; 2..n-2 with k*n even
// for the regular random model.
std::vector<int> valid_degrees(const ModelSpec& model);

// Build one instance of the model at degree k. For the random model,
// sample_index selects a counter-derived RNG stream.
InteractionGraph make_model_graph(const ModelSpec& model, int k, int sample_index = 0);

// H^2(omega) evaluator for a fixed (model, k), choosing the cheapest exact
// backend (analytic circulant for ring/mesh, eigendecomposition otherwise,
// sample-averaged for the random model).
class DegreeResponse {
  public:
    DegreeResponse(const ModelSpec& model, int k, int samples);
    double h_squared(double omega) const;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

struct KStarEntry {
    double omega = 0.0;
    int k_star = 0;
    double h_squared = 0.0;
};

struct KStarCurve {
    ModelSpec model;
    int samples = 1;
    std::vector<KStarEntry> entries;
};

// Argmax of (sample-averaged) H^2(omega) over the model's valid degree set;
// ties break toward smaller k.
int optimal_degree(const ModelSpec& model, double omega, int samples = 1);

KStarCurve kstar_curve(const ModelSpec& model, const std::vector<double>& omegas, int samples = 1);

struct PowerLawFit {
    double k0 = 0.0;
    double gamma = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    int n_points = 0;
};

// Least-squares fit of log k* vs log omega over entries inside the window.
// Throws if fewer than 5 points fall inside.
PowerLawFit fit_power_law(const KStarCurve& curve, double window_lo, double window_hi);

// Log-spaced grid with points_per_decade points per decade, inclusive ends.
std::vector<double> log_grid(double lo, double hi, int points_per_decade);

}  // namespace consensus
