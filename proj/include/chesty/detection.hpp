#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "chesty/centrality.hpp"
#include "chesty/chestybot.hpp"
#include "chesty/corpus.hpp"

namespace chesty {

// Analyst annotation only; nothing acts on it.
enum class FollowOn { None, Block, Canalize, Contain };

const char* follow_on_name(FollowOn f);

struct EngagingNode {
    NodeIndex node = 0;
    std::string account;
    double betweenness = 0.0;  // raw score

    friend bool operator==(const EngagingNode&, const EngagingNode&) = default;
};

struct DisruptionCandidate {
    std::string tweet_id;
    double score = 0.0;
    std::vector<EngagingNode> engaging_liminal_nodes;  // ascending node index
    double breakout_risk = 0.0;
    FollowOn follow_on = FollowOn::None;

    friend bool operator==(const DisruptionCandidate&, const DisruptionCandidate&) = default;
};

struct ScoredTweet {
    std::string tweet_id;
    double score = 0.0;

    friend bool operator==(const ScoredTweet&, const ScoredTweet&) = default;
};

struct CommunityRow {
    CommunityId community = 0;
    std::size_t members = 0;
    std::size_t tweets = 0;  // tweets authored by members
    std::size_t flagged = 0;
    double flagged_rate = 0.0;  // flagged / tweets, 0 when there are none
    std::vector<ScoredTweet> top_flagged;

    friend bool operator==(const CommunityRow&, const CommunityRow&) = default;
};

struct CampaignReport {
    std::vector<CommunityRow> communities;
    // Flagged tweets engaged by at least one liminal node, by breakout_risk
    // descending then tweet_id.
    std::vector<DisruptionCandidate> candidates;
    std::size_t flagged_total = 0;
    std::size_t flagged_unplaced = 0;  // author not a graph node

    friend bool operator==(const CampaignReport&, const CampaignReport&) = default;
};

struct ReportOptions {
    std::size_t top_per_community = 5;
};

/// Graph labels must be the AccountId strings of the corpus. Engagement means
/// authoring, liking or retweeting the tweet. breakout_risk is the score times
/// the largest engaging liminal betweenness divided by the graph maximum.
CampaignReport campaign_report(std::span<const Classification> classifications, const Corpus& corpus,
                               const WeightedGraph& graph, const Partition& partition,
                               const CentralityScores& scores, const LiminalReport& liminal,
                               const ReportOptions& options = {});

/// First min(k, n) candidates; throws InvalidInput for k == 0.
std::vector<DisruptionCandidate> disruption_candidates(const CampaignReport& report, std::size_t k);

// Line format: {"type":"community",...}, {"type":"candidate",...}, one per line.
std::string candidate_to_line(const DisruptionCandidate& c);
DisruptionCandidate candidate_from_line(std::string_view line);
std::string report_lines(const CampaignReport& report);
std::string report_table(const CampaignReport& report);

void save_candidates(std::span<const DisruptionCandidate> candidates, const std::filesystem::path& path);
std::vector<DisruptionCandidate> load_candidates(const std::filesystem::path& path);

}  // namespace chesty
