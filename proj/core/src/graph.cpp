#include "consensus/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace consensus {

InteractionGraph::InteractionGraph(int n_nodes, int leader) : n_nodes_(n_nodes), leader_(leader) {
    if (n_nodes < 1) throw std::invalid_argument("graph needs at least one node");
    if (leader < 0 || leader >= n_nodes) throw std::invalid_argument("leader index out of range");
}

void InteractionGraph::set_leader(int leader) {
    if (leader < 0 || leader >= n_nodes_) throw std::invalid_argument("leader index out of range");
    leader_ = leader;
}

void InteractionGraph::check_pair(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_nodes_ || j >= n_nodes_)
        throw std::invalid_argument("node index out of range");
    if (i == j) throw std::invalid_argument("self-loops are not allowed");
}

bool InteractionGraph::has_edge(int i, int j) const {
    check_pair(i, j);
    if (i > j) std::swap(i, j);
    return edges_.count({i, j}) > 0;
}

void InteractionGraph::add_edge(int i, int j) {
    check_pair(i, j);
    if (i > j) std::swap(i, j);
    if (!edges_.insert({i, j}).second) throw std::invalid_argument("duplicate edge");
}

void InteractionGraph::remove_edge(int i, int j) {
    check_pair(i, j);
    if (i > j) std::swap(i, j);
    if (edges_.erase({i, j}) == 0) throw std::invalid_argument("edge not present");
}

bool InteractionGraph::toggle_edge(int i, int j) {
    check_pair(i, j);
    if (i > j) std::swap(i, j);
    auto it = edges_.find({i, j});
    if (it != edges_.end()) {
        edges_.erase(it);
        return false;
    }
    edges_.insert({i, j});
    return true;
}

std::vector<int> InteractionGraph::degrees() const {
    std::vector<int> deg(n_nodes_, 0);
    for (const auto& [i, j] : edges_) {
        ++deg[i];
        ++deg[j];
    }
    return deg;
}

int InteractionGraph::degree(int i) const {
    if (i < 0 || i >= n_nodes_) throw std::invalid_argument("node index out of range");
    int d = 0;
    for (const auto& [a, b] : edges_)
        if (a == i || b == i) ++d;
    return d;
}

std::vector<std::vector<int>> InteractionGraph::adjacency_lists() const {
    std::vector<std::vector<int>> adj(n_nodes_);
    for (const auto& [i, j] : edges_) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    return adj;
}

std::vector<int> reachable_from(const InteractionGraph& g, int start) {
    const auto adj = g.adjacency_lists();
    std::vector<char> seen(g.n_nodes(), 0);
    std::vector<int> stack{start}, out;
    seen[start] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_connected(const InteractionGraph& g) {
    return static_cast<int>(reachable_from(g, 0).size()) == g.n_nodes();
}

std::vector<std::vector<int>> connected_components(const InteractionGraph& g) {
    std::vector<std::vector<int>> comps;
    std::vector<char> seen(g.n_nodes(), 0);
    for (int v = 0; v < g.n_nodes(); ++v) {
        if (seen[v]) continue;
        auto comp = reachable_from(g, v);
        for (int w : comp) seen[w] = 1;
        comps.push_back(std::move(comp));
    }
    return comps;
}

double mean_degree(const InteractionGraph& g) {
    return 2.0 * static_cast<double>(g.n_edges()) / static_cast<double>(g.n_nodes());
}

void write_edge_list(std::ostream& os, const InteractionGraph& g) {
    os << g.n_nodes() << ' ' << g.leader() << '\n';
    for (const auto& [i, j] : g.edges()) os << i << ' ' << j << '\n';
}

InteractionGraph read_edge_list(std::istream& is) {
    // '#' lines may carry run metadata in front of the header
    std::string line;
    int n = 0, leader = 0;
    bool have_header = false;
    InteractionGraph g(1, 0);  // replaced once the header is seen
    while (std::getline(is, line)) {
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream fields(line);
        int a = 0, b = 0;
        if (!(fields >> a >> b)) throw std::runtime_error("edge list: bad line '" + line + "'");
        std::string extra;
        if (fields >> extra) throw std::runtime_error("edge list: trailing tokens in '" + line + "'");
        if (!have_header) {
            n = a;
            leader = b;
            g = InteractionGraph(n, leader);
            have_header = true;
        } else {
            g.add_edge(a, b);  // add_edge validates bounds/duplicates
        }
    }
    if (!have_header) throw std::runtime_error("edge list: missing header line");
    return g;
}

void save_edge_list(const std::string& path, const InteractionGraph& g) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_edge_list(os, g);
}

InteractionGraph load_edge_list(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_edge_list(is);
}

}  // namespace consensus
