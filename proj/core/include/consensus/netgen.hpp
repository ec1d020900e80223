#pragma once

#include <cstdint>
#include <vector>

#include "consensus/graph.hpp"

namespace consensus {

// Periodic 1D lattice: node i adjacent to i +- 1, ..., i +- k/2 (mod n).
// k must be even, except k = n_total - 1 which yields the complete graph.
InteractionGraph ring_lattice(int n_total, int k, int leader = 0);

// Periodic 2D lattice (torus) on side*side nodes. Each node is linked to its
// k nearest grid neighbors by Euclidean torus distance; distance shells are
// taken whole, so k must be a sum of leading shell sizes (multiples of 4).
InteractionGraph mesh_2d(int side, int k, int leader = 0);

// Valid mesh degrees, ascending: cumulative shell sizes up to the last shell
// whose offsets are all distinct (shells of size 4 by square symmetry).
std::vector<int> mesh_valid_degrees(int side);

// Connected caveman graph: n_clusters cliques of k+1 nodes arranged in a
// cycle, with one edge per clique rewired to the next clique. Produces
// n_clusters nodes of degree k+1, n_clusters of degree k-1, the rest k.
InteractionGraph caveman(int n_clusters, int k, int leader = 0);

// Uniform-ish k-regular graph via the pairing (configuration) model: stubs
// are matched in shuffled rounds, pairs forming self-loops or duplicate edges
// are rejected and re-drawn, and a dead end restarts the whole pairing.
// Deterministic given seed; throws after a bounded number of restarts.
InteractionGraph regular_random(int n_total, int k, std::uint64_t seed, int leader = 0);

}  // namespace consensus
