#pragma once

#include <cstdint>
#include <vector>

#include "consensus/graph.hpp"
#include "consensus/rng.hpp"

namespace consensus {

// Mean over all n choices of leader of H^2(omega) on the remaining
// followers. Requires omega > 0 so disconnected graphs stay solvable;
// followers with no neighbors at all contribute h_i = 0.
double leader_averaged_response(const InteractionGraph& g, double omega, double omega0 = 1.0);

// Toggle one uniformly chosen node pair (never a self-loop). The move is its
// own inverse.
void propose_move(InteractionGraph& g, Rng& rng);

struct AnnealSchedule {
    double t0 = 1.0;
    double cooling = 0.995;  // geometric, per step
    int steps = 20000;
};

struct AnnealTracePoint {
    int step = 0;
    double temperature = 0.0;
    double objective = 0.0;
    bool accepted = false;
};

struct AnnealResult {
    InteractionGraph best_graph;
    double best_objective = 0.0;
    double mean_degree = 0.0;
    std::vector<AnnealTracePoint> trace;  // all restarts, global step index
    std::uint64_t seed = 0;

    // Per-restart bests, in restart order.
    std::vector<InteractionGraph> restart_graphs;
    std::vector<double> restart_objectives;
};

// Metropolis acceptance on the objective with geometric cooling; restarts run
// concurrently on counter-derived RNG streams and the best-ever graph is
// returned. Deterministic given seed.
AnnealResult anneal_topology(int n_total, double omega, const AnnealSchedule& schedule,
                             std::uint64_t seed, int restarts = 8, double omega0 = 1.0);

// Single Metropolis chain from a given starting graph at the given schedule
// (set cooling = 1 for a fixed-temperature chain). Exposed for statistical
// tests of the acceptance rule.
AnnealResult run_chain(const InteractionGraph& start, double omega, const AnnealSchedule& schedule,
                       std::uint64_t seed, double omega0 = 1.0);

}  // namespace consensus
