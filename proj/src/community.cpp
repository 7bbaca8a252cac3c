#include "chesty/community.hpp"

#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace chesty {

Partition Partition::from_assignment(std::span<const CommunityId> labels) {
    Partition p;
    std::unordered_map<CommunityId, CommunityId> relabel;
    p.assignment_.reserve(labels.size());
    for (std::size_t v = 0; v < labels.size(); ++v) {
        auto [it, inserted] = relabel.emplace(labels[v], static_cast<CommunityId>(relabel.size()));
        if (inserted) p.communities_.emplace_back();
        p.assignment_.push_back(it->second);
        p.communities_[static_cast<std::size_t>(it->second)].push_back(static_cast<NodeIndex>(v));
    }
    return p;
}

Partition Partition::singletons(NodeIndex n) {
    std::vector<CommunityId> labels(static_cast<std::size_t>(n));
    std::iota(labels.begin(), labels.end(), 0);
    return from_assignment(labels);
}

Partition Partition::single_community(NodeIndex n) {
    std::vector<CommunityId> labels(static_cast<std::size_t>(n), 0);
    return from_assignment(labels);
}

Eigen::SparseMatrix<double> Partition::indicator() const {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(assignment_.size());
    for (std::size_t v = 0; v < assignment_.size(); ++v) {
        triplets.emplace_back(static_cast<NodeIndex>(v), assignment_[v], 1.0);
    }
    Eigen::SparseMatrix<double> s(node_count(), static_cast<NodeIndex>(community_count()));
    s.setFromTriplets(triplets.begin(), triplets.end());
    return s;
}

namespace {

void check_partition(const WeightedGraph& graph, const Partition& p) {
    if (p.node_count() != graph.node_count()) throw InvalidInput("partition does not cover the graph's nodes");
}

}  // namespace

double modularity(const WeightedGraph& graph, const Partition& p, double resolution) {
    check_partition(graph, p);
    const double m = graph.total_weight();
    if (!(m > 0.0)) throw InvalidInput("modularity is undefined for an edgeless graph");
    const auto s = p.indicator();
    Eigen::SparseMatrix<double> st = s.transpose();
    Eigen::SparseMatrix<double> inner = st * graph.adjacency() * s;
    Eigen::VectorXd totals = st * graph.degrees();
    const double two_m = 2.0 * m;
    double internal = 0.0;
    for (NodeIndex c = 0; c < inner.rows(); ++c) internal += inner.coeff(c, c);
    return internal / two_m - resolution * (totals / two_m).squaredNorm();
}

LocalMoveResult local_move_pass(const WeightedGraph& graph, const Partition& p,
                                std::span<const NodeIndex> node_order, double resolution) {
    check_partition(graph, p);
    const double m = graph.total_weight();
    if (!(m > 0.0)) throw InvalidInput("local moves need a graph with edges");
    const auto& k = graph.degrees();

    std::vector<CommunityId> labels = p.assignment();
    std::vector<double> totals(p.community_count(), 0.0);
    for (NodeIndex v = 0; v < graph.node_count(); ++v) totals[static_cast<std::size_t>(labels[v])] += k[v];

    LocalMoveResult result;
    std::map<CommunityId, double> links;  // ordered: ascending community id
    for (NodeIndex v : node_order) {
        if (v < 0 || v >= graph.node_count()) throw InvalidInput("node order references unknown node");
        const CommunityId home = labels[static_cast<std::size_t>(v)];
        links.clear();
        links[home] = 0.0;
        graph.for_each_neighbor(v, [&](NodeIndex u, double w) { links[labels[static_cast<std::size_t>(u)]] += w; });

        totals[static_cast<std::size_t>(home)] -= k[v];
        auto gain_of = [&](CommunityId c, double link) {
            return link / m - resolution * totals[static_cast<std::size_t>(c)] * k[v] / (2.0 * m * m);
        };
        const double stay = gain_of(home, links[home]);
        CommunityId best = home;
        double best_gain = stay;
        bool have_best = false;
        for (const auto& [c, link] : links) {
            double g = gain_of(c, link);
            if (!have_best || g > best_gain + kMinModularityGain) {
                best = c;
                best_gain = g;
                have_best = true;
            }
        }
        if (best != home && best_gain - stay > kMinModularityGain) {
            labels[static_cast<std::size_t>(v)] = best;
            result.gain += best_gain - stay;
            result.gained = true;
        } else {
            best = home;
        }
        totals[static_cast<std::size_t>(best)] += k[v];
    }
    result.partition = Partition::from_assignment(labels);
    return result;
}

WeightedGraph aggregate(const WeightedGraph& graph, const Partition& p) {
    check_partition(graph, p);
    const auto s = p.indicator();
    Eigen::SparseMatrix<double> st = s.transpose();
    WeightedGraph::Matrix product = st * graph.adjacency() * s;
    // Rounding can leave the product a few ulps off symmetric.
    WeightedGraph::Matrix product_t = product.transpose();
    WeightedGraph::Matrix reduced = 0.5 * (product + product_t);
    std::vector<std::string> labels;
    for (std::size_t c = 0; c < p.community_count(); ++c) labels.push_back(std::to_string(c));
    return WeightedGraph(std::move(labels), std::move(reduced));
}

LouvainResult louvain(const WeightedGraph& graph, const LouvainOptions& options) {
    if (!(graph.total_weight() > 0.0)) throw InvalidInput("louvain needs a graph with edges");
    Rng rng(options.seed);

    LouvainResult result;
    std::vector<CommunityId> flat(static_cast<std::size_t>(graph.node_count()));
    std::iota(flat.begin(), flat.end(), 0);
    const double q0 = modularity(graph, Partition::singletons(graph.node_count()), options.resolution);
    result.q_history.push_back(q0);
    result.tracked_q = q0;

    WeightedGraph level = graph;
    while (true) {
        Partition p = Partition::singletons(level.node_count());
        std::vector<NodeIndex> order(static_cast<std::size_t>(level.node_count()));
        std::iota(order.begin(), order.end(), NodeIndex{0});
        bool moved = false;
        while (true) {
            if (options.shuffle) rng.shuffle(order);
            auto pass = local_move_pass(level, p, order, options.resolution);
            if (!pass.gained) break;
            moved = true;
            result.tracked_q += pass.gain;
            p = std::move(pass.partition);
        }
        if (!moved) break;
        for (auto& c : flat) c = p.community_of(c);
        result.q_history.push_back(
            modularity(graph, Partition::from_assignment(flat), options.resolution));
        level = aggregate(level, p);
    }
    result.partition = Partition::from_assignment(flat);
    return result;
}

void save_partition(const Partition& p, const std::filesystem::path& path) {
    std::string out;
    for (NodeIndex v = 0; v < p.node_count(); ++v) {
        out += std::to_string(v) + ' ' + std::to_string(p.community_of(v)) + '\n';
    }
    write_file(path, out);
}

Partition load_partition(const std::filesystem::path& path) {
    std::vector<CommunityId> labels;
    for (const auto& line : read_lines(path)) {
        if (line.empty()) continue;
        std::istringstream in(line);
        std::size_t node;
        CommunityId c;
        if (!(in >> node >> c) || node != labels.size())
            throw FormatError(path.string() + ": expected 'node community' lines with nodes 0..n-1 in order");
        labels.push_back(c);
    }
    return Partition::from_assignment(labels);
}

}  // namespace chesty
