#pragma once

#include <Eigen/Dense>
#include <vector>

#include "consensus/graph.hpp"

namespace consensus {

// Leader-grounded consensus matrices. Rows/columns of w_follower are indexed
// by follower position; follower_ids maps a row back to the graph vertex.
//
//   w_ij = omega0 * (a_ij / k_i - delta_ij)   restricted to follower rows,
//   w_leader_i = omega0 * a_{i,leader} / k_i.
//
// Degrees k_i are taken from the full graph (leader included), so every row
// sum of w_follower plus the matching w_leader entry is exactly zero.
struct ConsensusSystem {
    Eigen::MatrixXd w_follower;   // N x N
    Eigen::VectorXd w_leader;     // N
    double omega0 = 1.0;
    std::vector<int> follower_ids;

    int n_followers() const { return static_cast<int>(follower_ids.size()); }
};

// Throws std::invalid_argument naming the vertex if any follower is isolated
// (zero degree makes the 1/k_i normalization undefined).
ConsensusSystem build_consensus_system(const InteractionGraph& g, double omega0 = 1.0);

}  // namespace consensus
