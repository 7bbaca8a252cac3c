#include "chesty/detection.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <json.hpp>

namespace chesty {

using nlohmann::ordered_json;

const char* follow_on_name(FollowOn f) {
    switch (f) {
        case FollowOn::None: return "none";
        case FollowOn::Block: return "block";
        case FollowOn::Canalize: return "canalize";
        case FollowOn::Contain: return "contain";
    }
    return "?";
}

namespace {

FollowOn parse_follow_on(std::string_view name) {
    for (auto f : {FollowOn::None, FollowOn::Block, FollowOn::Canalize, FollowOn::Contain}) {
        if (name == follow_on_name(f)) return f;
    }
    throw FormatError("unknown follow_on: " + std::string(name));
}

bool by_score(const ScoredTweet& a, const ScoredTweet& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.tweet_id < b.tweet_id;
}

}  // namespace

CampaignReport campaign_report(std::span<const Classification> classifications, const Corpus& corpus,
                               const WeightedGraph& graph, const Partition& partition,
                               const CentralityScores& scores, const LiminalReport& liminal,
                               const ReportOptions& options) {
    const NodeIndex n = graph.node_count();
    if (partition.node_count() != n) throw InvalidInput("partition and graph disagree on node count");
    if (scores.score.size() != static_cast<std::size_t>(n)) throw InvalidInput("scores and graph disagree on node count");
    for (const auto& l : liminal.ranked) {
        if (l.node < 0 || l.node >= n) throw InvalidInput("liminal node outside the graph");
    }

    std::map<std::string, NodeIndex> node_of;
    for (NodeIndex v = 0; v < n; ++v) node_of[graph.label(v)] = v;
    auto lookup = [&](const AccountId& a) -> std::optional<NodeIndex> {
        auto it = node_of.find(a.str());
        if (it == node_of.end()) return std::nullopt;
        return it->second;
    };

    std::map<std::string, std::set<NodeIndex>> engaged;
    std::map<std::string, std::optional<NodeIndex>> author_of;
    for (const auto& t : corpus.tweets) {
        auto v = lookup(t.author);
        author_of[t.tweet_id] = v;
        if (v) engaged[t.tweet_id].insert(*v);
    }
    for (const auto& e : corpus.interactions) {
        if (e.kind == InteractionKind::FollowOrFriend || !e.tweet_id) continue;
        if (auto v = lookup(e.actor)) engaged[*e.tweet_id].insert(*v);
    }

    CampaignReport report;
    report.communities.resize(partition.community_count());
    for (std::size_t c = 0; c < partition.community_count(); ++c) {
        report.communities[c].community = static_cast<CommunityId>(c);
        report.communities[c].members = partition.communities()[c].size();
    }
    for (const auto& [id, author] : author_of) {
        if (author) ++report.communities[static_cast<std::size_t>(partition.community_of(*author))].tweets;
    }

    std::map<NodeIndex, double> liminal_score;
    for (const auto& l : liminal.ranked) liminal_score[l.node] = scores.score[static_cast<std::size_t>(l.node)];
    const double max_b = scores.max();

    std::vector<std::vector<ScoredTweet>> per_community(report.communities.size());
    for (const auto& c : classifications) {
        if (!c.flagged) continue;
        ++report.flagged_total;
        auto a = author_of.find(c.tweet_id);
        if (a == author_of.end() || !a->second) {
            ++report.flagged_unplaced;
        } else {
            auto comm = static_cast<std::size_t>(partition.community_of(*a->second));
            ++report.communities[comm].flagged;
            per_community[comm].push_back({c.tweet_id, c.score});
        }

        DisruptionCandidate cand;
        cand.tweet_id = c.tweet_id;
        cand.score = c.score;
        double best = 0.0;
        if (auto it = engaged.find(c.tweet_id); it != engaged.end()) {
            for (NodeIndex v : it->second) {
                auto l = liminal_score.find(v);
                if (l == liminal_score.end()) continue;
                cand.engaging_liminal_nodes.push_back({v, graph.label(v), l->second});
                best = std::max(best, l->second);
            }
        }
        if (cand.engaging_liminal_nodes.empty()) continue;
        cand.breakout_risk = max_b > 0.0 ? c.score * (best / max_b) : 0.0;
        report.candidates.push_back(std::move(cand));
    }

    for (std::size_t c = 0; c < report.communities.size(); ++c) {
        auto& row = report.communities[c];
        row.flagged_rate = row.tweets == 0 ? 0.0 : static_cast<double>(row.flagged) / static_cast<double>(row.tweets);
        auto& top = per_community[c];
        std::sort(top.begin(), top.end(), by_score);
        if (top.size() > options.top_per_community) top.resize(options.top_per_community);
        row.top_flagged = std::move(top);
    }
    std::sort(report.candidates.begin(), report.candidates.end(),
              [](const DisruptionCandidate& a, const DisruptionCandidate& b) {
                  if (a.breakout_risk != b.breakout_risk) return a.breakout_risk > b.breakout_risk;
                  return a.tweet_id < b.tweet_id;
              });
    return report;
}

std::vector<DisruptionCandidate> disruption_candidates(const CampaignReport& report, std::size_t k) {
    if (k == 0) throw InvalidInput("k must be >= 1");
    auto n = std::min(k, report.candidates.size());
    return {report.candidates.begin(), report.candidates.begin() + static_cast<std::ptrdiff_t>(n)};
}

namespace {

ordered_json candidate_json(const DisruptionCandidate& c) {
    ordered_json j;
    j["type"] = "candidate";
    j["tweet_id"] = c.tweet_id;
    j["score"] = c.score;
    j["breakout_risk"] = c.breakout_risk;
    j["follow_on"] = follow_on_name(c.follow_on);
    auto nodes = ordered_json::array();
    for (const auto& e : c.engaging_liminal_nodes) {
        ordered_json node;
        node["node"] = e.node;
        node["account"] = e.account;
        node["betweenness"] = e.betweenness;
        nodes.push_back(std::move(node));
    }
    j["engaging_liminal_nodes"] = std::move(nodes);
    return j;
}

}  // namespace

std::string candidate_to_line(const DisruptionCandidate& c) { return candidate_json(c).dump(); }

DisruptionCandidate candidate_from_line(std::string_view line) {
    try {
        auto j = nlohmann::json::parse(line);
        DisruptionCandidate c;
        c.tweet_id = j.at("tweet_id").get<std::string>();
        c.score = j.at("score").get<double>();
        c.breakout_risk = j.at("breakout_risk").get<double>();
        c.follow_on = parse_follow_on(j.value("follow_on", "none"));
        for (const auto& node : j.at("engaging_liminal_nodes")) {
            c.engaging_liminal_nodes.push_back({node.at("node").get<NodeIndex>(), node.at("account").get<std::string>(),
                                                node.at("betweenness").get<double>()});
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("candidate line: ") + e.what());
    }
}

std::string report_lines(const CampaignReport& report) {
    std::string out;
    ordered_json summary;
    summary["type"] = "summary";
    summary["flagged"] = report.flagged_total;
    summary["flagged_unplaced"] = report.flagged_unplaced;
    summary["communities"] = report.communities.size();
    summary["candidates"] = report.candidates.size();
    out += summary.dump() + '\n';
    for (const auto& row : report.communities) {
        ordered_json j;
        j["type"] = "community";
        j["community"] = row.community;
        j["members"] = row.members;
        j["tweets"] = row.tweets;
        j["flagged"] = row.flagged;
        j["flagged_rate"] = row.flagged_rate;
        auto top = ordered_json::array();
        for (const auto& t : row.top_flagged) {
            ordered_json item;
            item["tweet_id"] = t.tweet_id;
            item["score"] = t.score;
            top.push_back(std::move(item));
        }
        j["top_flagged"] = std::move(top);
        out += j.dump() + '\n';
    }
    for (const auto& c : report.candidates) out += candidate_to_line(c) + '\n';
    return out;
}

std::string report_table(const CampaignReport& report) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "flagged tweets: %zu (%zu outside the graph)\n\n", report.flagged_total,
                  report.flagged_unplaced);
    out += buf;
    out += "community  members  tweets  flagged  rate     top flagged\n";
    for (const auto& row : report.communities) {
        std::string top;
        for (const auto& t : row.top_flagged) {
            if (!top.empty()) top += ", ";
            std::snprintf(buf, sizeof buf, "%s (%.3f)", t.tweet_id.c_str(), t.score);
            top += buf;
        }
        std::snprintf(buf, sizeof buf, "%9d  %7zu  %6zu  %7zu  %.4f   ", row.community, row.members, row.tweets,
                      row.flagged, row.flagged_rate);
        out += buf + (top.empty() ? std::string("-") : top) + '\n';
    }
    out += "\nrank  tweet_id          score   breakout_risk  liminal engagers\n";
    for (std::size_t i = 0; i < report.candidates.size(); ++i) {
        const auto& c = report.candidates[i];
        std::string nodes;
        for (const auto& e : c.engaging_liminal_nodes) {
            if (!nodes.empty()) nodes += ", ";
            std::snprintf(buf, sizeof buf, "%s:%.2f", e.account.substr(0, 8).c_str(), e.betweenness);
            nodes += buf;
        }
        std::snprintf(buf, sizeof buf, "%4zu  %-16s  %.4f  %13.4f  ", i + 1, c.tweet_id.c_str(), c.score,
                      c.breakout_risk);
        out += buf + nodes + '\n';
    }
    if (report.candidates.empty()) out += "(none)\n";
    return out;
}

void save_candidates(std::span<const DisruptionCandidate> candidates, const std::filesystem::path& path) {
    std::string out;
    for (const auto& c : candidates) out += candidate_to_line(c) + '\n';
    write_file(path, out);
}

std::vector<DisruptionCandidate> load_candidates(const std::filesystem::path& path) {
    std::vector<DisruptionCandidate> out;
    for (const auto& line : read_lines(path)) {
        if (!line.empty()) out.push_back(candidate_from_line(line));
    }
    return out;
}

}  // namespace chesty
