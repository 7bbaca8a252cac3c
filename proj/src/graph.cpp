#include "chesty/graph.hpp"

#include <map>
#include <sstream>

namespace chesty {

namespace {

std::vector<std::string> index_labels(NodeIndex n) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (NodeIndex i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
}

}  // namespace

WeightedGraph::WeightedGraph(std::vector<std::string> labels, Matrix adjacency)
    : labels_(std::move(labels)), adjacency_(std::move(adjacency)) {
    if (adjacency_.rows() != adjacency_.cols()) throw InvalidInput("adjacency must be square");
    if (static_cast<NodeIndex>(labels_.size()) != adjacency_.rows()) throw InvalidInput("label count mismatch");
    adjacency_.prune(0.0);
    adjacency_.makeCompressed();
    Matrix transposed = adjacency_.transpose();
    if ((adjacency_ - transposed).norm() != 0.0) throw InvalidInput("adjacency must be symmetric");
    for (int k = 0; k < adjacency_.outerSize(); ++k) {
        for (Matrix::InnerIterator it(adjacency_, k); it; ++it) {
            if (!(it.value() > 0.0)) throw InvalidInput("edge weights must be positive");
        }
    }
    degrees_ = adjacency_ * Eigen::VectorXd::Ones(adjacency_.cols());
    total_weight_ = degrees_.sum() / 2.0;
}

WeightedGraph WeightedGraph::from_edges(NodeIndex node_count, std::span<const WeightedEdge> edges,
                                        std::vector<std::string> labels) {
    if (labels.empty()) labels = index_labels(node_count);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * edges.size());
    for (const auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count)
            throw InvalidInput("edge endpoint out of range");
        if (!(e.weight > 0.0)) throw InvalidInput("edge weights must be positive");
        if (e.u == e.v) {
            triplets.emplace_back(e.u, e.u, 2.0 * e.weight);
        } else {
            triplets.emplace_back(e.u, e.v, e.weight);
            triplets.emplace_back(e.v, e.u, e.weight);
        }
    }
    Matrix adjacency(node_count, node_count);
    adjacency.setFromTriplets(triplets.begin(), triplets.end());
    return WeightedGraph(std::move(labels), std::move(adjacency));
}

void WeightedGraph::check_node(NodeIndex v) const {
    if (v < 0 || v >= node_count()) throw NotFound("unknown node " + std::to_string(v));
}

double WeightedGraph::degree(NodeIndex v) const {
    check_node(v);
    return degrees_[v];
}

double WeightedGraph::loop_weight(NodeIndex v) const {
    check_node(v);
    return adjacency_.coeff(v, v) / 2.0;
}

double WeightedGraph::edge_weight(NodeIndex u, NodeIndex v) const {
    check_node(u);
    check_node(v);
    return u == v ? loop_weight(u) : adjacency_.coeff(u, v);
}

std::optional<NodeIndex> WeightedGraph::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) return static_cast<NodeIndex>(i);
    }
    return std::nullopt;
}

std::vector<WeightedEdge> WeightedGraph::edges() const {
    std::vector<WeightedEdge> out;
    // Column-major inner iteration yields rows ascending; u = column keeps (u, v) sorted.
    for (NodeIndex u = 0; u < adjacency_.outerSize(); ++u) {
        for (Matrix::InnerIterator it(adjacency_, u); it; ++it) {
            NodeIndex v = it.row();
            if (v < u) continue;
            out.push_back({u, v, v == u ? it.value() / 2.0 : it.value()});
        }
    }
    return out;
}

std::vector<NodeIndex> WeightedGraph::neighbors(NodeIndex v) const {
    check_node(v);
    std::vector<NodeIndex> out;
    for_each_neighbor(v, [&](NodeIndex u, double) { out.push_back(u); });
    return out;
}

double EdgeWeights::of(InteractionKind kind) const {
    switch (kind) {
        case InteractionKind::Like: return like;
        case InteractionKind::Retweet: return retweet;
        case InteractionKind::FollowOrFriend: return follow;
    }
    return 0.0;
}

GraphBuildResult build_graph(std::span<const InteractionEvent> events, const EdgeWeights& weights) {
    GraphBuildResult result;
    std::map<AccountId, NodeIndex> index;
    for (const auto& e : events) {
        if (e.actor == e.target) continue;
        index.emplace(e.actor, 0);
        index.emplace(e.target, 0);
    }
    std::vector<std::string> labels;
    for (auto& [id, i] : index) {
        i = static_cast<NodeIndex>(labels.size());
        labels.push_back(id.str());
    }
    std::vector<WeightedEdge> edges;
    edges.reserve(events.size());
    for (const auto& e : events) {
        if (e.actor == e.target) {
            ++result.skipped_self_interactions;
            continue;
        }
        edges.push_back({index.at(e.actor), index.at(e.target), weights.of(e.kind)});
    }
    auto n = static_cast<NodeIndex>(labels.size());
    result.graph = WeightedGraph::from_edges(n, edges, std::move(labels));
    return result;
}

double degree(const WeightedGraph& graph, NodeIndex v) { return graph.degree(v); }

std::filesystem::path nodes_path_for(const std::filesystem::path& edges_path) {
    auto name = edges_path.stem().string() + ".nodes" + edges_path.extension().string();
    return edges_path.parent_path() / name;
}

void save_graph(const WeightedGraph& graph, const std::filesystem::path& edges_path) {
    std::string out;
    for (const auto& e : graph.edges()) {
        out += std::to_string(e.u) + ' ' + std::to_string(e.v) + ' ' + format_double(e.weight) + '\n';
    }
    write_file(edges_path, out);
    std::string nodes;
    for (NodeIndex v = 0; v < graph.node_count(); ++v) {
        nodes += std::to_string(v) + ' ' + graph.label(v) + '\n';
    }
    write_file(nodes_path_for(edges_path), nodes);
}

WeightedGraph load_graph(const std::filesystem::path& edges_path) {
    std::vector<WeightedEdge> edges;
    NodeIndex max_index = -1;
    std::size_t line_no = 0;
    for (const auto& line : read_lines(edges_path)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream in(line);
        WeightedEdge e;
        if (!(in >> e.u >> e.v >> e.weight) || e.u < 0 || e.v < 0)
            throw FormatError(edges_path.string() + ":" + std::to_string(line_no) + ": expected 'u v w'");
        if (e.u > e.v) std::swap(e.u, e.v);
        max_index = std::max(max_index, e.v);
        edges.push_back(e);
    }
    std::vector<std::string> labels;
    auto npath = nodes_path_for(edges_path);
    if (std::filesystem::exists(npath)) {
        for (const auto& line : read_lines(npath)) {
            if (line.empty()) continue;
            std::istringstream in(line);
            std::size_t idx;
            std::string label;
            if (!(in >> idx >> label) || idx != labels.size())
                throw FormatError(npath.string() + ": node map must list indices 0..n-1 in order");
            labels.push_back(label);
        }
        if (static_cast<NodeIndex>(labels.size()) <= max_index)
            throw FormatError("edge list references a node missing from the node map");
    }
    NodeIndex n = labels.empty() ? max_index + 1 : static_cast<NodeIndex>(labels.size());
    return WeightedGraph::from_edges(n, edges, std::move(labels));
}

}  // namespace chesty
