#include "qnos/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qnos {

InteractionGraph::InteractionGraph(int num_nodes) {
    if (num_nodes < 1) {
        throw std::invalid_argument("InteractionGraph: needs at least one node");
    }
    node_weights_.assign(static_cast<std::size_t>(num_nodes), 1);
}

void InteractionGraph::add_edge_weight(int a, int b, int weight) {
    if (a == b) {
        throw std::invalid_argument("InteractionGraph: self-loops are not allowed");
    }
    if (a < 0 || b < 0 || a >= num_nodes() || b >= num_nodes()) {
        throw std::out_of_range("InteractionGraph: node index out of range");
    }
    if (weight < 1) {
        throw std::invalid_argument("InteractionGraph: edge weights must be >= 1");
    }
    edges_[std::minmax(a, b)] += weight;
}

int InteractionGraph::weight(int a, int b) const {
    const auto it = edges_.find(std::minmax(a, b));
    return it == edges_.end() ? 0 : it->second;
}

void InteractionGraph::set_node_weight(int node, int weight) {
    if (weight < 1) {
        throw std::invalid_argument("InteractionGraph: node weights must be >= 1");
    }
    node_weights_.at(static_cast<std::size_t>(node)) = weight;
}

int InteractionGraph::total_node_weight() const {
    return std::accumulate(node_weights_.begin(), node_weights_.end(), 0);
}

std::vector<std::vector<std::pair<int, int>>> InteractionGraph::adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(num_nodes()));
    for (const auto& [pair, w] : edges_) {
        adj[static_cast<std::size_t>(pair.first)].emplace_back(pair.second, w);
        adj[static_cast<std::size_t>(pair.second)].emplace_back(pair.first, w);
    }
    for (auto& nbrs : adj) {
        std::sort(nbrs.begin(), nbrs.end());
    }
    return adj;
}

BalanceWindow part_size_window(int total_weight, int k, double balance_tol) {
    if (k < 1) {
        throw std::invalid_argument("part_size_window: k must be >= 1");
    }
    if (balance_tol < 0.0) {
        throw std::invalid_argument("part_size_window: tolerance must be >= 0");
    }
    const int slack = static_cast<int>(std::floor(balance_tol * static_cast<double>(total_weight) /
                                                  static_cast<double>(k)));
    return {total_weight / k - slack, (total_weight + k - 1) / k + slack};
}

InteractionGraph build_interaction_graph(const Circuit& c) {
    InteractionGraph g(c.num_qubits());
    for (const Gate& gate : c.gates()) {
        if (!is_two_qubit(gate.kind)) continue;
        const int w = gate.kind == GateKind::Swap ? 3 : 1;
        g.add_edge_weight(gate.qubits[0], gate.qubits[1], w);
    }
    return g;
}

int edge_cut(const InteractionGraph& g, const Partition& p) {
    if (static_cast<int>(p.assignment.size()) != g.num_nodes()) {
        throw std::invalid_argument("edge_cut: assignment length does not match node count");
    }
    for (int part : p.assignment) {
        if (part < 0 || part >= p.k) {
            throw std::invalid_argument("edge_cut: part label out of range");
        }
    }
    int cut = 0;
    for (const auto& [pair, w] : g.edges()) {
        if (p.assignment[static_cast<std::size_t>(pair.first)] !=
            p.assignment[static_cast<std::size_t>(pair.second)]) {
            cut += w;
        }
    }
    return cut;
}

namespace detail {

bool WorkGraph::has_edges() const {
    return std::any_of(adj.begin(), adj.end(), [](const auto& nbrs) { return !nbrs.empty(); });
}

int WorkGraph::total_weight() const {
    return std::accumulate(node_weight.begin(), node_weight.end(), 0);
}

WorkGraph work_graph_from(const InteractionGraph& g) {
    WorkGraph wg;
    wg.node_weight = g.node_weights();
    wg.adj = g.adjacency();
    return wg;
}

int cut_of(const WorkGraph& g, const std::vector<int>& side) {
    int cut = 0;
    for (int v = 0; v < g.size(); ++v) {
        for (const auto& [u, w] : g.adj[static_cast<std::size_t>(v)]) {
            if (u > v && side[static_cast<std::size_t>(u)] != side[static_cast<std::size_t>(v)]) {
                cut += w;
            }
        }
    }
    return cut;
}

WorkGraph coarsen_once(const WorkGraph& g, std::vector<int>& node_map) {
    const int n = g.size();
    std::vector<int> match(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < n; ++v) {
        if (match[static_cast<std::size_t>(v)] != -1) continue;
        int best = -1;
        int best_weight = 0;
        for (const auto& [u, w] : g.adj[static_cast<std::size_t>(v)]) {
            if (u == v || match[static_cast<std::size_t>(u)] != -1) continue;
            if (w > best_weight || (w == best_weight && (best == -1 || u < best))) {
                best = u;
                best_weight = w;
            }
        }
        if (best != -1) {
            match[static_cast<std::size_t>(v)] = best;
            match[static_cast<std::size_t>(best)] = v;
        } else {
            match[static_cast<std::size_t>(v)] = v;
        }
    }

    node_map.assign(static_cast<std::size_t>(n), -1);
    int next_id = 0;
    for (int v = 0; v < n; ++v) {
        if (v <= match[static_cast<std::size_t>(v)]) {
            node_map[static_cast<std::size_t>(v)] = next_id;
            node_map[static_cast<std::size_t>(match[static_cast<std::size_t>(v)])] = next_id;
            ++next_id;
        }
    }

    WorkGraph coarse;
    coarse.node_weight.assign(static_cast<std::size_t>(next_id), 0);
    for (int v = 0; v < n; ++v) {
        coarse.node_weight[static_cast<std::size_t>(node_map[static_cast<std::size_t>(v)])] +=
            g.node_weight[static_cast<std::size_t>(v)];
    }
    std::map<std::pair<int, int>, int> coarse_edges;
    for (int v = 0; v < n; ++v) {
        for (const auto& [u, w] : g.adj[static_cast<std::size_t>(v)]) {
            if (u <= v) continue;
            const int cv = node_map[static_cast<std::size_t>(v)];
            const int cu = node_map[static_cast<std::size_t>(u)];
            if (cv == cu) continue;
            coarse_edges[std::minmax(cv, cu)] += w;
        }
    }
    coarse.adj.assign(static_cast<std::size_t>(next_id), {});
    for (const auto& [pair, w] : coarse_edges) {
        coarse.adj[static_cast<std::size_t>(pair.first)].emplace_back(pair.second, w);
        coarse.adj[static_cast<std::size_t>(pair.second)].emplace_back(pair.first, w);
    }
    for (auto& nbrs : coarse.adj) {
        std::sort(nbrs.begin(), nbrs.end());
    }
    return coarse;
}

std::vector<int> exhaustive_bisection(const WorkGraph& g, int w0_lo, int w0_hi) {
    const int n = g.size();
    if (n > 20) return {};
    std::vector<int> best;
    int best_cut = std::numeric_limits<int>::max();
    std::vector<int> side(static_cast<std::size_t>(n), 0);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        int w0 = 0;
        for (int v = 0; v < n; ++v) {
            side[static_cast<std::size_t>(v)] = (mask >> v) & 1u;
            if (side[static_cast<std::size_t>(v)] == 0) w0 += g.node_weight[static_cast<std::size_t>(v)];
        }
        if (w0 < w0_lo || w0 > w0_hi) continue;
        const int cut = cut_of(g, side);
        if (cut < best_cut ||
            (cut == best_cut && std::lexicographical_compare(side.begin(), side.end(), best.begin(), best.end()))) {
            best_cut = cut;
            best = side;
        }
    }
    return best;
}

bool fm_pass(const WorkGraph& g, std::vector<int>& side, int w0_lo, int w0_hi) {
    const int n = g.size();
    int w0 = 0;
    for (int v = 0; v < n; ++v) {
        if (side[static_cast<std::size_t>(v)] == 0) w0 += g.node_weight[static_cast<std::size_t>(v)];
    }
    const auto balanced = [&](int w) { return w >= w0_lo && w <= w0_hi; };

    std::vector<int> gain(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        for (const auto& [u, w] : g.adj[static_cast<std::size_t>(v)]) {
            gain[static_cast<std::size_t>(v)] +=
                side[static_cast<std::size_t>(u)] != side[static_cast<std::size_t>(v)] ? w : -w;
        }
    }

    const int initial_cut = cut_of(g, side);
    const bool initially_balanced = balanced(w0);
    int current_cut = initial_cut;
    std::vector<bool> locked(static_cast<std::size_t>(n), false);
    std::vector<int> moves;
    int best_cut = initially_balanced ? initial_cut : std::numeric_limits<int>::max();
    std::size_t best_prefix = 0;

    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (locked[static_cast<std::size_t>(v)]) continue;
            const int wv = g.node_weight[static_cast<std::size_t>(v)];
            const int new_w0 = side[static_cast<std::size_t>(v)] == 0 ? w0 - wv : w0 + wv;
            if (balanced(w0)) {
                if (!balanced(new_w0)) continue;  // keep balance once established
            } else {
                // Rebalance: only moves off the violating side are allowed.
                if (w0 > w0_hi && side[static_cast<std::size_t>(v)] != 0) continue;
                if (w0 < w0_lo && side[static_cast<std::size_t>(v)] != 1) continue;
            }
            if (pick == -1 || gain[static_cast<std::size_t>(v)] > gain[static_cast<std::size_t>(pick)]) {
                pick = v;
            }
        }
        if (pick == -1) break;

        const int old_side = side[static_cast<std::size_t>(pick)];
        side[static_cast<std::size_t>(pick)] = 1 - old_side;
        w0 += old_side == 0 ? -g.node_weight[static_cast<std::size_t>(pick)]
                            : g.node_weight[static_cast<std::size_t>(pick)];
        current_cut -= gain[static_cast<std::size_t>(pick)];
        gain[static_cast<std::size_t>(pick)] = -gain[static_cast<std::size_t>(pick)];
        for (const auto& [u, w] : g.adj[static_cast<std::size_t>(pick)]) {
            // Edge (u, pick) toggled between cut and internal.
            const bool now_cut = side[static_cast<std::size_t>(u)] != side[static_cast<std::size_t>(pick)];
            gain[static_cast<std::size_t>(u)] += now_cut ? 2 * w : -2 * w;
        }
        locked[static_cast<std::size_t>(pick)] = true;
        moves.push_back(pick);
        if (balanced(w0) && current_cut < best_cut) {
            best_cut = current_cut;
            best_prefix = moves.size();
        }
    }

    // Roll back past the best balanced prefix.
    for (std::size_t i = moves.size(); i > best_prefix; --i) {
        const int v = moves[i - 1];
        side[static_cast<std::size_t>(v)] = 1 - side[static_cast<std::size_t>(v)];
    }

    if (!initially_balanced) {
        return best_cut != std::numeric_limits<int>::max();
    }
    return best_cut < initial_cut;
}

namespace {

WorkGraph induced_subgraph(const InteractionGraph& g, const std::vector<int>& nodes) {
    std::vector<int> local(static_cast<std::size_t>(g.num_nodes()), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        local[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
    }
    WorkGraph sub;
    sub.node_weight.resize(nodes.size());
    sub.adj.assign(nodes.size(), {});
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        sub.node_weight[i] = g.node_weights()[static_cast<std::size_t>(nodes[i])];
    }
    for (const auto& [pair, w] : g.edges()) {
        const int a = local[static_cast<std::size_t>(pair.first)];
        const int b = local[static_cast<std::size_t>(pair.second)];
        if (a == -1 || b == -1) continue;
        sub.adj[static_cast<std::size_t>(a)].emplace_back(b, w);
        sub.adj[static_cast<std::size_t>(b)].emplace_back(a, w);
    }
    for (auto& nbrs : sub.adj) {
        std::sort(nbrs.begin(), nbrs.end());
    }
    return sub;
}

std::vector<int> greedy_fill(const WorkGraph& g, int w0_lo, int w0_hi) {
    std::vector<int> side(static_cast<std::size_t>(g.size()), 1);
    int w0 = 0;
    for (int v = 0; v < g.size(); ++v) {
        if (w0 < w0_lo) {
            side[static_cast<std::size_t>(v)] = 0;
            w0 += g.node_weight[static_cast<std::size_t>(v)];
        }
    }
    if (w0 < w0_lo || w0 > w0_hi) {
        throw std::invalid_argument("partition_graph: balance tolerance admits no valid bisection");
    }
    return side;
}

std::vector<int> multilevel_bisect(const WorkGraph& g0, int w0_lo, int w0_hi) {
    constexpr int kCoarsestTarget = 8;
    std::vector<WorkGraph> levels{g0};
    std::vector<std::vector<int>> maps;
    while (levels.back().size() > kCoarsestTarget && levels.back().has_edges()) {
        std::vector<int> node_map;
        WorkGraph coarse = coarsen_once(levels.back(), node_map);
        if (coarse.size() == levels.back().size()) break;
        maps.push_back(std::move(node_map));
        levels.push_back(std::move(coarse));
    }

    std::vector<int> side = exhaustive_bisection(levels.back(), w0_lo, w0_hi);
    if (side.empty()) {
        side = greedy_fill(levels.back(), w0_lo, w0_hi);
    }

    for (std::size_t lvl = levels.size(); lvl-- > 0;) {
        while (fm_pass(levels[lvl], side, w0_lo, w0_hi)) {
        }
        if (lvl == 0) break;
        const std::vector<int>& node_map = maps[lvl - 1];
        std::vector<int> fine(node_map.size());
        for (std::size_t v = 0; v < node_map.size(); ++v) {
            fine[v] = side[static_cast<std::size_t>(node_map[v])];
        }
        side = std::move(fine);
    }
    return side;
}

void bisect_recursive(const InteractionGraph& g, const std::vector<int>& nodes, int k,
                      int label_base, int lo_eff, int hi, std::vector<int>& assignment) {
    if (k == 1) {
        for (int v : nodes) assignment[static_cast<std::size_t>(v)] = label_base;
        return;
    }
    const int k0 = k / 2;
    const int k1 = k - k0;
    const WorkGraph sub = induced_subgraph(g, nodes);
    const int total = sub.total_weight();
    const int w0_lo = std::max(k0 * lo_eff, total - k1 * hi);
    const int w0_hi = std::min(k0 * hi, total - k1 * lo_eff);
    if (w0_lo > w0_hi) {
        throw std::invalid_argument("partition_graph: balance tolerance admits no valid part sizes");
    }
    const std::vector<int> side = multilevel_bisect(sub, w0_lo, w0_hi);
    std::vector<int> nodes0;
    std::vector<int> nodes1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        (side[i] == 0 ? nodes0 : nodes1).push_back(nodes[i]);
    }
    bisect_recursive(g, nodes0, k0, label_base, lo_eff, hi, assignment);
    bisect_recursive(g, nodes1, k1, label_base + k0, lo_eff, hi, assignment);
}

}  // namespace

}  // namespace detail

Partition partition_graph(const InteractionGraph& g, int k, double balance_tol, unsigned seed) {
    (void)seed;  // reserved; the pinned procedure has no randomized choice point
    const int n = g.num_nodes();
    if (k < 2) {
        throw std::invalid_argument("partition_graph: k must be >= 2");
    }
    if (k > n) {
        throw std::invalid_argument("partition_graph: fewer nodes (" + std::to_string(n) +
                                    ") than parts (" + std::to_string(k) + ")");
    }
    const int total = g.total_node_weight();
    const BalanceWindow window = part_size_window(total, k, balance_tol);
    const int lo_eff = std::max(window.lo, 1);
    if (k * lo_eff > total || k * window.hi < total) {
        throw std::invalid_argument("partition_graph: balance tolerance admits no valid part sizes");
    }

    Partition p;
    p.k = k;
    p.balance_tol = balance_tol;
    p.assignment.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> all_nodes(static_cast<std::size_t>(n));
    std::iota(all_nodes.begin(), all_nodes.end(), 0);
    detail::bisect_recursive(g, all_nodes, k, 0, lo_eff, window.hi, p.assignment);

    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (std::size_t v = 0; v < p.assignment.size(); ++v) {
        sizes[static_cast<std::size_t>(p.assignment[v])] += g.node_weights()[v];
    }
    for (int size : sizes) {
        if (size < lo_eff || size > window.hi) {
            throw std::logic_error("partition_graph: produced an unbalanced partition");
        }
    }
    return p;
}

Partition brute_force_partition(const InteractionGraph& g, int k, double balance_tol) {
    const int n = g.num_nodes();
    if (n > 16) {
        throw std::invalid_argument("brute_force_partition: instance too large (n > 16)");
    }
    if (k < 2 || k > n) {
        throw std::invalid_argument("brute_force_partition: k out of range");
    }
    const int total = g.total_node_weight();
    const BalanceWindow window = part_size_window(total, k, balance_tol);
    const int lo_eff = std::max(window.lo, 1);
    if (k * lo_eff > total || k * window.hi < total) {
        throw std::invalid_argument("brute_force_partition: balance tolerance admits no valid part sizes");
    }

    const auto adj = g.adjacency();
    std::vector<int> assignment(static_cast<std::size_t>(n), -1);
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    std::vector<int> best;
    int best_cut = std::numeric_limits<int>::max();

    // Canonical labelings: part labels appear in order of first use, so every
    // labeling class is visited once via its lexicographically smallest member.
    const auto recurse = [&](const auto& self, int node, int used, int cut) -> void {
        if (cut > best_cut) return;
        if (node == n) {
            if (used == k && cut < best_cut) {
                bool ok = true;
                for (int p = 0; p < k; ++p) {
                    if (sizes[static_cast<std::size_t>(p)] < lo_eff) ok = false;
                }
                if (ok) {
                    best_cut = cut;
                    best = assignment;
                }
            }
            return;
        }
        const int wv = g.node_weights()[static_cast<std::size_t>(node)];
        const int remaining = n - node;  // for the unopened-parts pruning below
        const int limit = std::min(used + 1, k);
        for (int part = 0; part < limit; ++part) {
            if (sizes[static_cast<std::size_t>(part)] + wv > window.hi) continue;
            const int new_used = part == used ? used + 1 : used;
            if (k - new_used > remaining - 1) continue;  // not enough nodes left to open all parts
            int added = 0;
            for (const auto& [u, w] : adj[static_cast<std::size_t>(node)]) {
                if (u < node && assignment[static_cast<std::size_t>(u)] != part) added += w;
            }
            assignment[static_cast<std::size_t>(node)] = part;
            sizes[static_cast<std::size_t>(part)] += wv;
            self(self, node + 1, new_used, cut + added);
            sizes[static_cast<std::size_t>(part)] -= wv;
            assignment[static_cast<std::size_t>(node)] = -1;
        }
    };
    recurse(recurse, 0, 0, 0);

    if (best.empty()) {
        throw std::invalid_argument("brute_force_partition: balance tolerance admits no valid part sizes");
    }
    Partition p;
    p.k = k;
    p.assignment = std::move(best);
    p.balance_tol = balance_tol;
    return p;
}

}  // namespace qnos
