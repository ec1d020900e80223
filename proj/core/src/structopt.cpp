#include "consensus/structopt.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <unordered_map>

#include "consensus/parallel.hpp"

namespace consensus {

namespace {
using cplx = std::complex<double>;

// H^2 for one leader choice, tolerating disconnection (omega > 0). Followers
// with no neighbors at all have no dynamics under the 1/k normalization and
// contribute h_i = 0.
double grounded_response(const InteractionGraph& g, int leader, double omega, double omega0) {
    const int n = g.n_nodes();
    const auto deg = g.degrees();
    std::vector<int> rows(n, -1);
    int nf = 0;
    for (int v = 0; v < n; ++v)
        if (v != leader && deg[v] > 0) rows[v] = nf++;
    if (nf == 0) return 0.0;

    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(nf, nf);
    Eigen::VectorXcd w_leader = Eigen::VectorXcd::Zero(nf);
    a.diagonal().setConstant(cplx(omega0, omega));  // i w - (-omega0)
    for (const auto& [u, v] : g.edges()) {
        if (rows[u] >= 0) {
            if (v == leader)
                w_leader(rows[u]) += omega0 / deg[u];
            else if (rows[v] >= 0)
                a(rows[u], rows[v]) -= omega0 / deg[u];
        }
        if (rows[v] >= 0) {
            if (u == leader)
                w_leader(rows[v]) += omega0 / deg[v];
            else if (rows[u] >= 0)
                a(rows[v], rows[u]) -= omega0 / deg[v];
        }
    }
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(a).solve(w_leader).squaredNorm();
}

// 55-edge graphs fit a single word; larger ones (up to 23 nodes) need two.
struct GraphKey {
    std::uint64_t lo = 0, hi = 0;
    bool operator==(const GraphKey& o) const { return lo == o.lo && hi == o.hi; }
};
struct GraphKeyHash {
    std::size_t operator()(const GraphKey& k) const {
        return std::hash<std::uint64_t>{}(k.lo * 0x9e3779b97f4a7c15ULL ^ k.hi);
    }
};

GraphKey graph_key(const InteractionGraph& g) {
    const int n = g.n_nodes();
    GraphKey key;
    for (const auto& [i, j] : g.edges()) {
        const int bit = i * n + j;  // i < j, injective enough for fixed n
        if (bit < 64)
            key.lo |= 1ULL << bit;
        else
            key.hi |= 1ULL << (bit - 64);
    }
    return key;
}

}  // namespace

double leader_averaged_response(const InteractionGraph& g, double omega, double omega0) {
    if (omega <= 0.0)
        throw std::invalid_argument("leader_averaged_response: omega must be > 0 (disconnected "
                                    "graphs are singular at omega = 0)");
    double acc = 0.0;
    for (int leader = 0; leader < g.n_nodes(); ++leader)
        acc += grounded_response(g, leader, omega, omega0);
    return acc / static_cast<double>(g.n_nodes());
}

void propose_move(InteractionGraph& g, Rng& rng) {
    const int n = g.n_nodes();
    const int i = static_cast<int>(rng.uniform_int(0, n - 1));
    const int j_raw = static_cast<int>(rng.uniform_int(0, n - 2));
    const int j = j_raw >= i ? j_raw + 1 : j_raw;  // uniform over pairs, never a self-loop
    g.toggle_edge(i, j);
}

AnnealResult run_chain(const InteractionGraph& start, double omega, const AnnealSchedule& schedule,
                       std::uint64_t seed, double omega0) {
    Rng rng(seed);
    const bool cacheable = start.n_nodes() <= 11;  // key uses i*n+j < 128
    std::unordered_map<GraphKey, double, GraphKeyHash> cache;
    auto objective = [&](const InteractionGraph& g) {
        if (!cacheable) return leader_averaged_response(g, omega, omega0);
        const GraphKey key = graph_key(g);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        const double v = leader_averaged_response(g, omega, omega0);
        cache.emplace(key, v);
        return v;
    };

    AnnealResult res{start, 0.0, 0.0, {}, seed, {}, {}};
    InteractionGraph current = start;
    double current_obj = objective(current);
    res.best_graph = current;
    res.best_objective = current_obj;

    double temperature = schedule.t0;
    res.trace.reserve(schedule.steps);
    for (int step = 0; step < schedule.steps; ++step) {
        InteractionGraph proposal = current;
        propose_move(proposal, rng);
        const double obj = objective(proposal);
        const double delta = obj - current_obj;
        const bool accept = delta >= 0.0 || rng.uniform() < std::exp(delta / temperature);
        if (accept) {
            current = std::move(proposal);
            current_obj = obj;
            if (current_obj > res.best_objective) {
                res.best_objective = current_obj;
                res.best_graph = current;
            }
        }
        res.trace.push_back({step, temperature, current_obj, accept});
        temperature *= schedule.cooling;
    }
    res.mean_degree = consensus::mean_degree(res.best_graph);
    return res;
}

AnnealResult anneal_topology(int n_total, double omega, const AnnealSchedule& schedule,
                             std::uint64_t seed, int restarts, double omega0) {
    if (restarts < 1) throw std::invalid_argument("anneal_topology: need at least one restart");
    std::vector<AnnealResult> chains(restarts, AnnealResult{InteractionGraph(n_total, 0)});
    parallel_for(restarts, [&](int r) {
        Rng stream = Rng::substream(seed, static_cast<std::uint64_t>(r));
        // Random initial graph: each pair present with probability 1/2.
        InteractionGraph g0(n_total, 0);
        for (int i = 0; i < n_total; ++i)
            for (int j = i + 1; j < n_total; ++j)
                if (stream.uniform() < 0.5) g0.add_edge(i, j);
        chains[r] = run_chain(g0, omega, schedule, stream.next_u64(), omega0);
    });

    AnnealResult out = chains[0];
    out.seed = seed;
    out.trace.clear();
    int global_step = 0;
    for (const auto& chain : chains) {
        out.restart_graphs.push_back(chain.best_graph);
        out.restart_objectives.push_back(chain.best_objective);
        for (auto pt : chain.trace) {
            pt.step = global_step++;
            out.trace.push_back(pt);
        }
        if (chain.best_objective > out.best_objective) {
            out.best_objective = chain.best_objective;
            out.best_graph = chain.best_graph;
        }
    }
    out.mean_degree = consensus::mean_degree(out.best_graph);
    return out;
}

}  // namespace consensus
