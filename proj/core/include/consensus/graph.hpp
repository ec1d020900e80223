#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace consensus {

// Undirected, unweighted simple graph on n_nodes() vertices with one
// designated leader vertex. Edges are stored as ordered (lo, hi) pairs so the
// edge list is always canonical (sorted, no duplicates, no self-loops).
class InteractionGraph {
  public:
    InteractionGraph(int n_nodes, int leader);

    int n_nodes() const { return n_nodes_; }
    int leader() const { return leader_; }
    void set_leader(int leader);

    bool has_edge(int i, int j) const;
    void add_edge(int i, int j);
    void remove_edge(int i, int j);
    // Add if absent, remove if present. Returns true if the edge now exists.
    bool toggle_edge(int i, int j);

    std::size_t n_edges() const { return edges_.size(); }
    const std::set<std::pair<int, int>>& edges() const { return edges_; }

    std::vector<int> degrees() const;
    int degree(int i) const;
    std::vector<std::vector<int>> adjacency_lists() const;

  private:
    void check_pair(int i, int j) const;

    int n_nodes_;
    int leader_;
    std::set<std::pair<int, int>> edges_;
};

bool is_connected(const InteractionGraph& g);

// Vertices reachable from `start`, sorted.
std::vector<int> reachable_from(const InteractionGraph& g, int start);

// All connected components, each sorted, ordered by smallest member.
std::vector<std::vector<int>> connected_components(const InteractionGraph& g);

double mean_degree(const InteractionGraph& g);

// Edge-list text format: first line "n_nodes leader", then one "i j" pair per
// line, 0-indexed. The reader validates bounds, rejects self-loops and
// duplicates.
void write_edge_list(std::ostream& os, const InteractionGraph& g);
InteractionGraph read_edge_list(std::istream& is);
void save_edge_list(const std::string& path, const InteractionGraph& g);
InteractionGraph load_edge_list(const std::string& path);

}  // namespace consensus
