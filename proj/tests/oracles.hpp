#pragma once

// Independent reference implementations and fixture graphs shared by the unit
// tests and the acceptance runner. Nothing here calls into the code under test
// except to build graphs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chesty/community.hpp"
#include "chesty/graph.hpp"

namespace oracle {

using chesty::NodeIndex;
using chesty::WeightedEdge;
using chesty::WeightedGraph;

struct EdgeList {
    NodeIndex n = 0;
    std::vector<WeightedEdge> edges;

    WeightedGraph graph() const { return WeightedGraph::from_edges(n, edges); }
};

inline EdgeList unit_edges(NodeIndex n, std::initializer_list<std::pair<NodeIndex, NodeIndex>> pairs) {
    EdgeList g{n, {}};
    for (auto [u, v] : pairs) g.edges.push_back({u, v, 1.0});
    return g;
}

inline EdgeList two_triangles() { return unit_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }
inline EdgeList triangles_bridge() {
    return unit_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}
inline EdgeList k4() { return unit_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }
// Two K4s (0-3 and 4-7) joined by the path 3-8-9-4.
inline EdgeList barbell() {
    return unit_edges(10, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {4, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7},
                           {6, 7}, {3, 8}, {8, 9}, {9, 4}});
}
// Two K4s (0-3 and 5-8) both attached to the single bridge node 4.
inline EdgeList bridged_k4s() {
    return unit_edges(9, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {5, 6}, {5, 7}, {5, 8}, {6, 7}, {6, 8},
                          {7, 8}, {3, 4}, {4, 5}});
}
inline EdgeList five_cycle() { return unit_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}); }

inline std::vector<std::pair<std::string, EdgeList>> louvain_fixtures() {
    return {{"two triangles", two_triangles()},
            {"triangles + bridge", triangles_bridge()},
            {"K4", k4()},
            {"barbell 2xK4", barbell()},
            {"5-cycle", five_cycle()}};
}

/// Q = sum_c [ L_c / m - gamma * (d_c / 2m)^2 ], with L_c the weight of edges
/// (self-loops included once) inside c and d_c the degree sum of c, a loop
/// adding twice its weight to its node's degree.
inline double modularity(const EdgeList& g, const std::vector<int>& community, double gamma = 1.0) {
    double m = 0;
    std::vector<double> degree(static_cast<std::size_t>(g.n), 0.0);
    for (const auto& e : g.edges) {
        m += e.weight;
        degree[static_cast<std::size_t>(e.u)] += e.weight;
        degree[static_cast<std::size_t>(e.v)] += e.weight;
    }
    std::map<int, double> inside, degree_sum;
    for (const auto& e : g.edges) {
        if (community[static_cast<std::size_t>(e.u)] == community[static_cast<std::size_t>(e.v)])
            inside[community[static_cast<std::size_t>(e.u)]] += e.weight;
    }
    for (std::size_t v = 0; v < degree.size(); ++v) degree_sum[community[v]] += degree[v];
    double q = 0;
    for (const auto& [c, d] : degree_sum) q += inside[c] / m - gamma * (d / (2 * m)) * (d / (2 * m));
    return q;
}

/// Calls f with every set partition of {0..n-1} as a restricted growth string.
inline void for_each_set_partition(int n, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> a(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int i, int max_label) {
        if (i == n) {
            f(a);
            return;
        }
        for (int c = 0; c <= max_label + 1; ++c) {
            a[static_cast<std::size_t>(i)] = c;
            rec(i + 1, std::max(max_label, c));
        }
    };
    if (n == 0) {
        f(a);
        return;
    }
    a[0] = 0;
    rec(1, 0);
}

inline double max_modularity(const EdgeList& g) {
    double best = -1.0;
    for_each_set_partition(static_cast<int>(g.n), [&](const std::vector<int>& p) { best = std::max(best, modularity(g, p)); });
    return best;
}

/// Betweenness over unordered pairs by enumerating every shortest path.
inline std::vector<double> brute_betweenness(const EdgeList& g) {
    const auto n = static_cast<std::size_t>(g.n);
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : g.edges) {
        if (e.u == e.v) continue;
        adj[static_cast<std::size_t>(e.u)].push_back(static_cast<std::size_t>(e.v));
        adj[static_cast<std::size_t>(e.v)].push_back(static_cast<std::size_t>(e.u));
    }
    // All-pairs hop distances (Floyd-Warshall).
    const int inf = 1 << 20;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (std::size_t v = 0; v < n; ++v) {
        d[v][v] = 0;
        for (auto u : adj[v]) d[v][u] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);

    std::vector<double> score(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) {
            if (d[s][t] >= inf) continue;
            std::vector<std::vector<std::size_t>> paths;
            std::vector<std::size_t> path{s};
            std::function<void(std::size_t)> walk = [&](std::size_t v) {
                if (v == t) {
                    paths.push_back(path);
                    return;
                }
                for (auto u : adj[v]) {
                    if (d[s][u] == d[s][v] + 1 && d[u][t] == d[v][t] - 1) {
                        path.push_back(u);
                        walk(u);
                        path.pop_back();
                    }
                }
            };
            walk(s);
            std::vector<double> through(n, 0.0);
            for (const auto& p : paths)
                for (std::size_t i = 1; i + 1 < p.size(); ++i) through[p[i]] += 1.0;
            for (std::size_t v = 0; v < n; ++v) score[v] += through[v] / static_cast<double>(paths.size());
        }
    }
    return score;
}

/// Random weighted graph on n nodes; about `density` of the pairs get an
/// edge, with occasional self-loops. Always has at least one edge.
template <typename Rng>
EdgeList random_graph(Rng& rng, NodeIndex n, double density, bool loops = true) {
    EdgeList g{n, {}};
    for (NodeIndex u = 0; u < n; ++u) {
        for (NodeIndex v = u + 1; v < n; ++v) {
            if (rng.bernoulli(density)) g.edges.push_back({u, v, 0.5 + 4.5 * rng.uniform_real()});
        }
        if (loops && rng.bernoulli(0.1)) g.edges.push_back({u, u, 0.5 + 2.0 * rng.uniform_real()});
    }
    if (g.edges.empty()) g.edges.push_back({0, n - 1, 1.0});
    return g;
}

/// Random connected simple graph: a random spanning tree plus extra edges.
template <typename Rng>
EdgeList random_connected_graph(Rng& rng, NodeIndex n, double extra_density) {
    EdgeList g{n, {}};
    std::vector<std::vector<bool>> has(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
    auto add = [&](NodeIndex u, NodeIndex v) {
        if (u == v || has[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) return;
        has[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = has[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = true;
        g.edges.push_back({std::min(u, v), std::max(u, v), 1.0});
    };
    for (NodeIndex v = 1; v < n; ++v) add(v, static_cast<NodeIndex>(rng.uniform_index(static_cast<std::uint64_t>(v))));
    for (NodeIndex u = 0; u < n; ++u)
        for (NodeIndex v = u + 1; v < n; ++v)
            if (rng.bernoulli(extra_density)) add(u, v);
    return g;
}

}  // namespace oracle
