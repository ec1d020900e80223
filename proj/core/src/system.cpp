#include "consensus/system.hpp"

#include <stdexcept>
#include <string>

namespace consensus {

ConsensusSystem build_consensus_system(const InteractionGraph& g, double omega0) {
    const int n = g.n_nodes();
    const int leader = g.leader();
    const auto deg = g.degrees();

    std::vector<int> follower_ids;
    follower_ids.reserve(n - 1);
    std::vector<int> row_of(n, -1);
    for (int v = 0; v < n; ++v) {
        if (v == leader) continue;
        if (deg[v] == 0)
            throw std::invalid_argument("build_consensus_system: follower node " + std::to_string(v) +
                                        " is isolated (degree 0 breaks the 1/k_i normalization)");
        row_of[v] = static_cast<int>(follower_ids.size());
        follower_ids.push_back(v);
    }

    ConsensusSystem sys;
    sys.omega0 = omega0;
    sys.follower_ids = std::move(follower_ids);
    const int nf = sys.n_followers();
    sys.w_follower = Eigen::MatrixXd::Zero(nf, nf);
    sys.w_leader = Eigen::VectorXd::Zero(nf);
    sys.w_follower.diagonal().setConstant(-omega0);

    for (const auto& [a, b] : g.edges()) {
        if (a == leader) {
            sys.w_leader(row_of[b]) += omega0 / deg[b];
        } else if (b == leader) {
            sys.w_leader(row_of[a]) += omega0 / deg[a];
        } else {
            sys.w_follower(row_of[a], row_of[b]) = omega0 / deg[a];
            sys.w_follower(row_of[b], row_of[a]) = omega0 / deg[b];
        }
    }
    return sys;
}

}  // namespace consensus
