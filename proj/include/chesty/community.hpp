#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "chesty/graph.hpp"

namespace chesty {

using CommunityId = int;

/// Node -> community assignment with ids contiguous from 0, numbered in order
/// of first appearance so equal groupings compare equal.
class Partition {
  public:
    Partition() = default;
    static Partition from_assignment(std::span<const CommunityId> labels);
    static Partition singletons(NodeIndex n);
    static Partition single_community(NodeIndex n);

    NodeIndex node_count() const { return static_cast<NodeIndex>(assignment_.size()); }
    std::size_t community_count() const { return communities_.size(); }
    CommunityId community_of(NodeIndex v) const { return assignment_.at(static_cast<std::size_t>(v)); }
    const std::vector<CommunityId>& assignment() const { return assignment_; }
    const std::vector<std::vector<NodeIndex>>& communities() const { return communities_; }

    /// n x c membership matrix S with S(v, community_of(v)) = 1.
    Eigen::SparseMatrix<double> indicator() const;

    friend bool operator==(const Partition& a, const Partition& b) { return a.assignment_ == b.assignment_; }

  private:
    std::vector<CommunityId> assignment_;
    std::vector<std::vector<NodeIndex>> communities_;
};

inline constexpr double kMinModularityGain = 1e-12;

/// Q = (1/2m) sum_ij [A_ij - resolution * k_i k_j / 2m] delta(c_i, c_j),
/// evaluated as (tr(S'AS) - resolution * |S'k|^2 / 2m) / 2m.
double modularity(const WeightedGraph& graph, const Partition& p, double resolution = 1.0);

struct LocalMoveResult {
    Partition partition;
    bool gained = false;
    double gain = 0.0;  // total modularity change of the pass
};

/// One sweep over `node_order`: each node moves to the neighboring community
/// with the largest strictly positive gain; ties go to the lowest id.
LocalMoveResult local_move_pass(const WeightedGraph& graph, const Partition& p,
                                std::span<const NodeIndex> node_order, double resolution = 1.0);

/// One node per community; intra-community weight becomes a self-loop and
/// inter-community weight is summed onto single edges. Computed as S'AS.
WeightedGraph aggregate(const WeightedGraph& graph, const Partition& p);

struct LouvainOptions {
    double resolution = 1.0;
    std::uint64_t seed = 0;
    // Sweep nodes in a seeded random order instead of ascending index.
    bool shuffle = false;
};

struct LouvainResult {
    Partition partition;
    // Modularity of the singleton start followed by one value per level.
    std::vector<double> q_history;
    // Sum of the local-move gains, tracked independently of q_history.
    double tracked_q = 0.0;
};

LouvainResult louvain(const WeightedGraph& graph, const LouvainOptions& options = {});

// "node_id community_id" per line, node ids ascending.
void save_partition(const Partition& p, const std::filesystem::path& path);
Partition load_partition(const std::filesystem::path& path);

}  // namespace chesty
