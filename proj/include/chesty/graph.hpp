#pragma once

#include <Eigen/SparseCore>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chesty/corpus.hpp"

namespace chesty {

using NodeIndex = Eigen::Index;

struct WeightedEdge {
    NodeIndex u = 0;
    NodeIndex v = 0;
    double weight = 0.0;  // self-loop weight when u == v

    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Undirected weighted graph stored as a symmetric sparse adjacency matrix.
/// The diagonal holds twice the self-loop weight, so row sums are degrees and
/// the total weight is half the matrix sum.
class WeightedGraph {
  public:
    using Matrix = Eigen::SparseMatrix<double>;

    WeightedGraph() = default;
    /// `adjacency` must be square, symmetric and non-negative.
    WeightedGraph(std::vector<std::string> labels, Matrix adjacency);

    /// Parallel edges are summed. Labels default to "0".."n-1".
    static WeightedGraph from_edges(NodeIndex node_count, std::span<const WeightedEdge> edges,
                                    std::vector<std::string> labels = {});

    NodeIndex node_count() const { return adjacency_.rows(); }
    double total_weight() const { return total_weight_; }
    const Matrix& adjacency() const { return adjacency_; }
    const Eigen::VectorXd& degrees() const { return degrees_; }
    double degree(NodeIndex v) const;
    double loop_weight(NodeIndex v) const;
    double edge_weight(NodeIndex u, NodeIndex v) const;

    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(NodeIndex v) const { return labels_.at(static_cast<std::size_t>(v)); }
    std::optional<NodeIndex> index_of(const std::string& label) const;

    /// Each undirected edge once (u <= v), ordered by (u, v).
    std::vector<WeightedEdge> edges() const;
    /// Neighbors of v excluding v itself, ascending.
    std::vector<NodeIndex> neighbors(NodeIndex v) const;

    template <typename F>
    void for_each_neighbor(NodeIndex v, F&& f) const {
        for (Matrix::InnerIterator it(adjacency_, v); it; ++it) {
            if (it.row() != v) f(it.row(), it.value());
        }
    }

  private:
    void check_node(NodeIndex v) const;

    std::vector<std::string> labels_;
    Matrix adjacency_;
    Eigen::VectorXd degrees_;
    double total_weight_ = 0.0;
};

struct EdgeWeights {
    double like = 1.0;
    double retweet = 10.0;
    double follow = 10.0;

    double of(InteractionKind kind) const;
};

struct GraphBuildResult {
    WeightedGraph graph;
    std::size_t skipped_self_interactions = 0;
};

/// Nodes are every account that appears in an event, indexed in ascending
/// AccountId order; each event adds its kind's weight to the undirected edge
/// {actor, target}.
GraphBuildResult build_graph(std::span<const InteractionEvent> events, const EdgeWeights& weights = {});

double degree(const WeightedGraph& graph, NodeIndex v);

// Edge list: "u v w" per line (node indices, u <= v, loop weight when u == v).
// Node map: "index label" per line.
std::filesystem::path nodes_path_for(const std::filesystem::path& edges_path);
void save_graph(const WeightedGraph& graph, const std::filesystem::path& edges_path);
/// Reads the node map next to `edges_path` when it exists; otherwise the
/// node count is one past the largest index and labels are the indices.
WeightedGraph load_graph(const std::filesystem::path& edges_path);

}  // namespace chesty
