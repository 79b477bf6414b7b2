#pragma once

#include "qnos/circuit.hpp"

#include <map>
#include <utility>
#include <vector>

namespace qnos {

/// Weighted undirected qubit-interaction graph. Edge keys are (min, max)
/// node pairs; no self-loops.
class InteractionGraph {
public:
    explicit InteractionGraph(int num_nodes);

    /// Accumulates weight onto edge {a, b}.
    void add_edge_weight(int a, int b, int weight);

    int num_nodes() const { return static_cast<int>(node_weights_.size()); }
    const std::map<std::pair<int, int>, int>& edges() const { return edges_; }
    int weight(int a, int b) const;

    const std::vector<int>& node_weights() const { return node_weights_; }
    void set_node_weight(int node, int weight);
    int total_node_weight() const;

    /// Adjacency lists of (neighbor, weight), neighbors ascending.
    std::vector<std::vector<std::pair<int, int>>> adjacency() const;

private:
    std::map<std::pair<int, int>, int> edges_;
    std::vector<int> node_weights_;
};

/// k-way node assignment. k = 1 is admitted as a degenerate value for
/// validator-only paths (edge_cut, nonlocal extraction on a local circuit);
/// the partitioners themselves require k >= 2.
struct Partition {
    int k = 1;
    std::vector<int> assignment;
    double balance_tol = 0.0;
};

/// Allowed part size range [lo, hi] for the given tolerance:
/// lo = floor(n/k) - s, hi = ceil(n/k) + s with s = floor(tol * n / k).
struct BalanceWindow {
    int lo = 0;
    int hi = 0;
};
BalanceWindow part_size_window(int total_weight, int k, double balance_tol);

/// One node per qubit; every two-qubit gate adds 1 to its qubit pair's edge,
/// except SWAP which adds 3 (its CNOT decomposition count).
InteractionGraph build_interaction_graph(const Circuit& c);

/// Total weight of edges whose endpoints lie in different parts.
int edge_cut(const InteractionGraph& g, const Partition& p);

/// Multilevel recursive bisection: heavy-edge-matching coarsening down to
/// 8 nodes, exhaustive initial bisection, FM refinement on uncoarsening.
/// Deterministic; `seed` is accepted for interface stability and unused.
Partition partition_graph(const InteractionGraph& g, int k, double balance_tol, unsigned seed);

/// Exhaustive oracle over canonical part labelings; num_nodes <= 16.
/// Ties broken by lowest-lexicographic assignment.
Partition brute_force_partition(const InteractionGraph& g, int k, double balance_tol);

namespace detail {

/// Internal working graph used by the multilevel partitioner; exposed so the
/// coarsening and refinement steps can be tested in isolation.
struct WorkGraph {
    std::vector<int> node_weight;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, weight)

    int size() const { return static_cast<int>(node_weight.size()); }
    bool has_edges() const;
    int total_weight() const;
};

WorkGraph work_graph_from(const InteractionGraph& g);
int cut_of(const WorkGraph& g, const std::vector<int>& side);

/// One heavy-edge-matching round. Returns the coarse graph and fills
/// node_map with fine node -> coarse node.
WorkGraph coarsen_once(const WorkGraph& g, std::vector<int>& node_map);

/// Minimum-cut bipartition with side-0 weight in [w0_lo, w0_hi], exhaustive
/// over all 2^n subsets. Empty result if no subset fits the window.
std::vector<int> exhaustive_bisection(const WorkGraph& g, int w0_lo, int w0_hi);

/// One FM pass of single-node moves (max gain, each node at most once,
/// best-prefix rollback). Mutates `side`; returns true if the cut improved.
bool fm_pass(const WorkGraph& g, std::vector<int>& side, int w0_lo, int w0_hi);

}  // namespace detail

}  // namespace qnos
