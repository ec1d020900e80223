#include "consensus/netgen.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "consensus/rng.hpp"
#include "consensus/system.hpp"

namespace consensus {

InteractionGraph ring_lattice(int n_total, int k, int leader) {
    if (n_total < 3) throw std::invalid_argument("ring_lattice: need at least 3 nodes");
    if (k > n_total - 1) throw std::invalid_argument("ring_lattice: k exceeds n-1");
    if (k < 2) throw std::invalid_argument("ring_lattice: k must be >= 2");
    if (k % 2 != 0 && k != n_total - 1)
        throw std::invalid_argument("ring_lattice: odd degree k=" + std::to_string(k) +
                                    " is only valid for the all-to-all case k=n-1");
    InteractionGraph g(n_total, leader);
    if (k == n_total - 1) {
        for (int i = 0; i < n_total; ++i)
            for (int j = i + 1; j < n_total; ++j) g.add_edge(i, j);
        return g;
    }
    // k even and <= n-2, so d <= k/2 < n/2: each edge {i, i+d} appears once.
    for (int i = 0; i < n_total; ++i)
        for (int d = 1; d <= k / 2; ++d) g.add_edge(i, (i + d) % n_total);
    return g;
}

InteractionGraph mesh_2d(int side, int k, int leader) {
    if (side < 2) throw std::invalid_argument("mesh_2d: side must be >= 2");
    if (k % 4 != 0 || k < 4) throw std::invalid_argument("mesh_2d: degree must be a positive multiple of 4");

    // Group neighbor offsets by squared torus distance; only whole shells of
    // distinct offsets may be taken.
    std::map<long, std::vector<std::pair<int, int>>> shells;
    for (int dx = 0; dx < side; ++dx)
        for (int dy = 0; dy < side; ++dy) {
            if (dx == 0 && dy == 0) continue;
            const int ex = std::min(dx, side - dx);
            const int ey = std::min(dy, side - dy);
            shells[static_cast<long>(ex) * ex + static_cast<long>(ey) * ey].push_back({dx, dy});
        }

    std::vector<std::pair<int, int>> offsets;
    int acc = 0;
    for (const auto& [d2, shell] : shells) {
        if (acc == k) break;
        acc += static_cast<int>(shell.size());
        if (acc > k)
            throw std::invalid_argument("mesh_2d: degree " + std::to_string(k) +
                                        " would split a distance shell (valid neighbor counts are "
                                        "cumulative shell sizes)");
        offsets.insert(offsets.end(), shell.begin(), shell.end());
    }
    if (acc < k) throw std::invalid_argument("mesh_2d: degree exceeds available shells");

    InteractionGraph g(side * side, leader);
    for (int x = 0; x < side; ++x)
        for (int y = 0; y < side; ++y) {
            const int i = x * side + y;
            for (const auto& [dx, dy] : offsets) {
                const int j = ((x + dx) % side) * side + (y + dy) % side;
                if (i < j) g.add_edge(i, j);
            }
        }
    return g;
}

std::vector<int> mesh_valid_degrees(int side) {
    std::map<long, int> shell_sizes;
    for (int dx = 0; dx < side; ++dx)
        for (int dy = 0; dy < side; ++dy) {
            if (dx == 0 && dy == 0) continue;
            const int ex = std::min(dx, side - dx);
            const int ey = std::min(dy, side - dy);
            shell_sizes[static_cast<long>(ex) * ex + static_cast<long>(ey) * ey] += 1;
        }
    std::vector<int> degrees;
    int acc = 0;
    for (const auto& [d2, size] : shell_sizes) {
        if (size % 4 != 0) break;  // degenerate half-turn shells end the regular range
        acc += size;
        degrees.push_back(acc);
    }
    return degrees;
}

InteractionGraph caveman(int n_clusters, int k, int leader) {
    if (n_clusters < 2) throw std::invalid_argument("caveman: need at least 2 cliques");
    if (k < 2) throw std::invalid_argument("caveman: k must be >= 2");
    const int size = k + 1;
    InteractionGraph g(size * n_clusters, leader);
    for (int c = 0; c < n_clusters; ++c) {
        const int base = c * size;
        for (int a = 0; a < size; ++a)
            for (int b = a + 1; b < size; ++b) g.add_edge(base + a, base + b);
        // Rewire one edge per clique to link neighboring cliques in a cycle.
        // With exactly two cliques the head-head link already exists when the
        // second clique rewires; fall back to the next clique's third node so
        // the degree counts (n at k+1, n at k-1) still hold.
        g.remove_edge(base, base + 1);
        int target = (base + size) % (size * n_clusters);
        if (g.has_edge(base, target)) target = (base + size + 2) % (size * n_clusters);
        g.add_edge(base, target);
    }
    return g;
}

namespace {

// One pass of the pairing model: shuffle the remaining stubs, pair them off,
// keep pairs that form new simple edges and carry the rest over. Returns
// false on a dead end (leftover stubs admit no suitable pair), which triggers
// a full restart in the caller. Rejecting at the pair level instead of
// discarding whole pairings keeps the expected work near-linear even at
// moderate k, where whole-graph rejection would almost never accept.
bool try_pairing(int n_total, int k, Rng& rng, InteractionGraph& g) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n_total) * k);
    for (int i = 0; i < n_total; ++i)
        for (int c = 0; c < k; ++c) stubs.push_back(i);

    while (!stubs.empty()) {
        rng.shuffle(stubs);
        std::vector<int> leftover;
        bool progress = false;
        for (std::size_t p = 0; p + 1 < stubs.size(); p += 2) {
            const int a = stubs[p], b = stubs[p + 1];
            if (a == b || g.has_edge(a, b)) {
                leftover.push_back(a);
                leftover.push_back(b);
            } else {
                g.add_edge(a, b);
                progress = true;
            }
        }
        if (!progress) {
            std::vector<int> nodes = leftover;
            std::sort(nodes.begin(), nodes.end());
            nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
            bool suitable = false;
            for (std::size_t a = 0; a < nodes.size() && !suitable; ++a)
                for (std::size_t b = a + 1; b < nodes.size() && !suitable; ++b)
                    if (!g.has_edge(nodes[a], nodes[b])) suitable = true;
            if (!suitable) return false;
        }
        stubs = std::move(leftover);
    }
    return true;
}

}  // namespace

InteractionGraph regular_random(int n_total, int k, std::uint64_t seed, int leader) {
    if (k < 1 || k >= n_total) throw std::invalid_argument("regular_random: need 1 <= k < n");
    if ((static_cast<long>(k) * n_total) % 2 != 0)
        throw std::invalid_argument("regular_random: k*n must be even");
    if (k == n_total - 1) return ring_lattice(n_total, k, leader);  // forced: complete graph

    // Dense regime: sample the (n-1-k)-regular complement instead. The
    // complement of a simple r-regular graph is (n-1-r)-regular, and the
    // pairing model is only efficient for sparse degrees.
    if (k > n_total / 2) {
        const InteractionGraph sparse = regular_random(n_total, n_total - 1 - k, seed, leader);
        InteractionGraph g(n_total, leader);
        for (int i = 0; i < n_total; ++i)
            for (int j = i + 1; j < n_total; ++j)
                if (!sparse.has_edge(i, j)) g.add_edge(i, j);
        return g;
    }

    Rng rng(seed);
    const int max_restarts = 1000;
    for (int attempt = 0; attempt < max_restarts; ++attempt) {
        InteractionGraph g(n_total, leader);
        if (try_pairing(n_total, k, rng, g)) return g;
    }
    throw std::runtime_error("regular_random: no simple pairing found for n=" + std::to_string(n_total) +
                             " k=" + std::to_string(k) + " after " + std::to_string(max_restarts) +
                             " restarts");
}

}  // namespace consensus
