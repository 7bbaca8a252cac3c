#pragma once

#include <filesystem>
#include <vector>

#include "chesty/community.hpp"

namespace chesty {

struct CentralityScores {
    std::vector<double> score;
    bool normalized = false;

    double max() const;
};

/// Exact betweenness over unordered pairs on the unweighted skeleton of
/// `graph` (edge weights and self-loops do not affect path length).
/// With `normalize`, scores are scaled by 2 / ((n-1)(n-2)).
CentralityScores betweenness(const WeightedGraph& graph, bool normalize = false);

struct LiminalNode {
    NodeIndex node = 0;
    double betweenness = 0.0;
    std::vector<CommunityId> communities;  // own community plus neighbors', ascending
};

struct LiminalReport {
    std::vector<LiminalNode> ranked;
    double cutoff = 0.05;

    bool contains(NodeIndex v) const;
};

/// Nodes touching >= 2 communities, keeping the ceil(top_fraction * |candidates|)
/// highest-betweenness ones (ties by ascending node index).
LiminalReport liminal_nodes(const WeightedGraph& graph, const Partition& p, const CentralityScores& scores,
                            double top_fraction = 0.05);

// "node score" per line.
void save_centrality(const CentralityScores& scores, const std::filesystem::path& path);
CentralityScores load_centrality(const std::filesystem::path& path);

// Table: "rank node label betweenness communities(comma separated)".
void save_liminal_report(const LiminalReport& report, const WeightedGraph& graph,
                         const std::filesystem::path& path);
LiminalReport load_liminal_report(const std::filesystem::path& path);

}  // namespace chesty
