#include "chesty/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace chesty {

double CentralityScores::max() const {
    return score.empty() ? 0.0 : *std::max_element(score.begin(), score.end());
}

CentralityScores betweenness(const WeightedGraph& graph, bool normalize) {
    const auto n = static_cast<std::size_t>(graph.node_count());
    std::vector<std::vector<NodeIndex>> adj(n);
    for (std::size_t v = 0; v < n; ++v) adj[v] = graph.neighbors(static_cast<NodeIndex>(v));

    CentralityScores out;
    out.score.assign(n, 0.0);

    // Brandes accumulation, one BFS per source; sources in ascending order so
    // the floating-point reduction order is fixed.
    std::vector<NodeIndex> stack;
    std::vector<NodeIndex> queue;
    std::vector<std::vector<NodeIndex>> preds(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<long> dist(n);
    for (std::size_t s = 0; s < n; ++s) {
        stack.clear();
        queue.clear();
        for (std::size_t v = 0; v < n; ++v) {
            preds[v].clear();
            sigma[v] = 0.0;
            delta[v] = 0.0;
            dist[v] = -1;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(static_cast<NodeIndex>(s));
        for (std::size_t head = 0; head < queue.size(); ++head) {
            auto v = static_cast<std::size_t>(queue[head]);
            stack.push_back(static_cast<NodeIndex>(v));
            for (NodeIndex wi : adj[v]) {
                auto w = static_cast<std::size_t>(wi);
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(wi);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(static_cast<NodeIndex>(v));
                }
            }
        }
        while (!stack.empty()) {
            auto w = static_cast<std::size_t>(stack.back());
            stack.pop_back();
            for (NodeIndex vi : preds[w]) {
                auto v = static_cast<std::size_t>(vi);
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) out.score[w] += delta[w];
        }
    }
    // Every unordered pair was counted from both ends.
    for (auto& x : out.score) x /= 2.0;
    if (normalize) {
        out.normalized = true;
        if (n > 2) {
            const double scale = 2.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
            for (auto& x : out.score) x *= scale;
        }
    }
    return out;
}

bool LiminalReport::contains(NodeIndex v) const {
    return std::any_of(ranked.begin(), ranked.end(), [&](const LiminalNode& l) { return l.node == v; });
}

LiminalReport liminal_nodes(const WeightedGraph& graph, const Partition& p, const CentralityScores& scores,
                            double top_fraction) {
    if (!(top_fraction > 0.0 && top_fraction <= 1.0)) throw InvalidInput("top_fraction must be in (0, 1]");
    if (p.node_count() != graph.node_count() || scores.score.size() != static_cast<std::size_t>(graph.node_count()))
        throw InvalidInput("graph, partition and scores disagree on node count");

    LiminalReport report;
    report.cutoff = top_fraction;
    std::vector<LiminalNode> candidates;
    for (NodeIndex v = 0; v < graph.node_count(); ++v) {
        std::set<CommunityId> touched{p.community_of(v)};
        graph.for_each_neighbor(v, [&](NodeIndex u, double) { touched.insert(p.community_of(u)); });
        if (touched.size() < 2) continue;
        candidates.push_back({v, scores.score[static_cast<std::size_t>(v)], {touched.begin(), touched.end()}});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const LiminalNode& a, const LiminalNode& b) { return a.betweenness > b.betweenness; });
    auto keep = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(candidates.size())));
    candidates.resize(std::min(keep, candidates.size()));
    report.ranked = std::move(candidates);
    return report;
}

void save_centrality(const CentralityScores& scores, const std::filesystem::path& path) {
    std::string out;
    for (std::size_t v = 0; v < scores.score.size(); ++v) {
        out += std::to_string(v) + ' ' + format_double(scores.score[v]) + '\n';
    }
    write_file(path, out);
}

CentralityScores load_centrality(const std::filesystem::path& path) {
    CentralityScores scores;
    for (const auto& line : read_lines(path)) {
        if (line.empty()) continue;
        std::istringstream in(line);
        std::size_t v;
        double s;
        if (!(in >> v >> s) || v != scores.score.size() || s < 0.0)
            throw FormatError(path.string() + ": expected 'node score' lines in node order");
        scores.score.push_back(s);
    }
    return scores;
}

void save_liminal_report(const LiminalReport& report, const WeightedGraph& graph,
                         const std::filesystem::path& path) {
    std::string out = "# cutoff " + format_double(report.cutoff) + "\n# rank node label betweenness communities\n";
    for (std::size_t i = 0; i < report.ranked.size(); ++i) {
        const auto& l = report.ranked[i];
        std::string comms;
        for (auto c : l.communities) {
            if (!comms.empty()) comms += ',';
            comms += std::to_string(c);
        }
        out += std::to_string(i + 1) + ' ' + std::to_string(l.node) + ' ' + graph.label(l.node) + ' ' +
               format_double(l.betweenness) + ' ' + comms + '\n';
    }
    write_file(path, out);
}

LiminalReport load_liminal_report(const std::filesystem::path& path) {
    LiminalReport report;
    for (const auto& line : read_lines(path)) {
        if (line.empty()) continue;
        std::istringstream in(line);
        if (line[0] == '#') {
            std::string hash, key;
            double value;
            if (in >> hash >> key >> value && key == "cutoff") report.cutoff = value;
            continue;
        }
        std::size_t rank;
        LiminalNode l;
        std::string label, comms;
        if (!(in >> rank >> l.node >> label >> l.betweenness >> comms))
            throw FormatError(path.string() + ": malformed liminal row");
        std::istringstream cs(comms);
        std::string item;
        while (std::getline(cs, item, ',')) l.communities.push_back(std::stoi(item));
        report.ranked.push_back(std::move(l));
    }
    return report;
}

}  // namespace chesty
