#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace consensus {

// Analytic response path for distance-weighted ring systems (grounded at the
// leader, node 0). The full (n x n) weight matrix W with entries
//   w_ij = c_{d(i,j)} for i != j,  w_ii = -omega0,
// where d is the circular distance min(|i-j|, n-|i-j|), is circulant, so its
// resolvent is diagonal in the Fourier basis. The grounded response follows
// from the block-inverse identity: if g = (sI - W)^{-1} e_0, then the
// grounded solution of (sI - W_F) h = W_L is h_j = g_j / g_0 for followers j.
//
// This gives H^2(omega) in O(n) per frequency (Parseval) and full gain
// vectors in O(n^2), and covers the unweighted k-ring and the complete graph
// as special cases (c_d = omega0/k for d <= k/2). It is the fast path behind
// ring sweeps; tests pin its agreement with the dense LU path to 1e-8.
class RingResponse {
  public:
    // distance_weights[d-1] = c_d for d = 1 .. floor(n/2).
    RingResponse(int n_nodes, std::vector<double> distance_weights, double omega0);

    // Unweighted ring with even degree k (or k = n-1, the complete graph).
    static RingResponse unweighted(int n_nodes, int k, double omega0);

    int n_nodes() const { return n_; }
    double omega0() const { return omega0_; }
    // Circulant eigenvalue for Fourier mode m.
    double eigenvalue(int m) const { return nu_[m]; }

    // True iff the support of the weights generates the whole ring.
    bool connected() const;

    // Collective response of the n-1 followers at angular frequency omega.
    double h_squared(double omega) const;

    // Per-follower complex gains (length n-1, follower j at ring position j).
    Eigen::VectorXcd gains(double omega) const;

    // Solve (s I - W_F) x = b on the followers via circulant embedding.
    // Used for adjoint solves in gradient computations (s = +-i omega).
    Eigen::VectorXcd solve_grounded(std::complex<double> s, const Eigen::VectorXcd& b) const;

  private:
    // DFT helpers over length-n vectors (direct evaluation, O(n^2)).
    Eigen::VectorXcd forward_dft(const Eigen::VectorXcd& x) const;
    Eigen::VectorXcd inverse_dft(const Eigen::VectorXcd& x_hat) const;
    std::complex<double> resolvent_g0(std::complex<double> s) const;

    int n_;
    double omega0_;
    std::vector<double> weights_;  // c_d, d = 1..floor(n/2)
    std::vector<double> nu_;       // circulant eigenvalues, m = 0..n-1
};

// Analytic H^2 for the periodic 2D mesh (torus side x side, whole shells up
// to degree k), leader at node 0. Same circulant machinery in two indices;
// only the collective response is exposed (gains go through the dense path).
class MeshResponse {
  public:
    MeshResponse(int side, int k, double omega0);
    double h_squared(double omega) const;

  private:
    int side_;
    double omega0_;
    std::vector<double> nu_;  // side*side eigenvalues
};

}  // namespace consensus
