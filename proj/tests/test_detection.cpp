#include <doctest.h>

#include "chesty/detection.hpp"
#include "oracles.hpp"

using namespace chesty;

namespace {

AccountId account_for(int i) { return anonymize_account("node" + std::to_string(i), "detect"); }

// Graph over the bridged K4 fixture whose node labels are account ids, plus a
// corpus where each node authors one tweet "t<i>".
struct Scene {
    WeightedGraph graph;
    Corpus corpus;
    Partition partition;
    CentralityScores scores;
    LiminalReport liminal;
};

Scene scene() {
    auto el = oracle::bridged_k4s();
    std::vector<std::string> labels;
    for (NodeIndex v = 0; v < el.n; ++v) labels.push_back(account_for(static_cast<int>(v)).str());
    Scene s;
    s.graph = WeightedGraph::from_edges(el.n, el.edges, labels);
    for (NodeIndex v = 0; v < el.n; ++v)
        s.corpus.tweets.push_back({"t" + std::to_string(v), account_for(static_cast<int>(v)),
                                   make_timestamp(2022, 10, 2), "text"});
    s.partition = louvain(s.graph).partition;
    s.scores = betweenness(s.graph);
    s.liminal = liminal_nodes(s.graph, s.partition, s.scores, 0.05);
    return s;
}

}  // namespace

TEST_CASE("bridge node drives breakout risk") {
    auto s = scene();
    REQUIRE(s.partition.community_count() == 2);
    REQUIRE(s.liminal.ranked.size() == 1);
    REQUIRE(s.liminal.ranked[0].node == 4);

    // Node 0 likes the bridge's tweet; t0 is engaged by no liminal node.
    s.corpus.interactions.push_back(
        {InteractionKind::Like, account_for(0), account_for(4), "t4", make_timestamp(2022, 10, 3)});
    std::vector<Classification> cls{{"t4", 0.8, true}, {"t0", 0.8, true}, {"t1", 0.2, false}};
    auto r = campaign_report(cls, s.corpus, s.graph, s.partition, s.scores, s.liminal);
    CHECK(r.flagged_total == 2);
    CHECK(r.flagged_unplaced == 0);
    REQUIRE(r.candidates.size() == 1);
    CHECK(r.candidates[0].tweet_id == "t4");
    CHECK(r.candidates[0].breakout_risk == doctest::Approx(0.8 * 1.0));
    REQUIRE(r.candidates[0].engaging_liminal_nodes.size() == 1);
    CHECK(r.candidates[0].engaging_liminal_nodes[0].betweenness == 16.0);
}

TEST_CASE("liminal engagement through a retweet counts") {
    auto s = scene();
    s.corpus.interactions.push_back(
        {InteractionKind::Retweet, account_for(4), account_for(0), "t0", make_timestamp(2022, 10, 3)});
    std::vector<Classification> cls{{"t0", 0.6, true}, {"t4", 0.9, true}};
    auto r = campaign_report(cls, s.corpus, s.graph, s.partition, s.scores, s.liminal);
    REQUIRE(r.candidates.size() == 2);
    CHECK(r.candidates[0].tweet_id == "t4");
    CHECK(r.candidates[1].tweet_id == "t0");
    CHECK(r.candidates[1].breakout_risk == doctest::Approx(0.6));
}

TEST_CASE("equal risk breaks ties by tweet id and k truncates") {
    auto s = scene();
    for (int v : {0, 8, 5})
        s.corpus.interactions.push_back({InteractionKind::Retweet, account_for(4), account_for(v), "t" + std::to_string(v),
                                         make_timestamp(2022, 10, 3)});
    std::vector<Classification> cls{{"t8", 0.7, true}, {"t0", 0.7, true}, {"t5", 0.7, true}};
    auto r = campaign_report(cls, s.corpus, s.graph, s.partition, s.scores, s.liminal);
    REQUIRE(r.candidates.size() == 3);
    CHECK(r.candidates[0].tweet_id == "t0");
    CHECK(r.candidates[1].tweet_id == "t5");
    CHECK(r.candidates[2].tweet_id == "t8");
    CHECK(disruption_candidates(r, 2).size() == 2);
    CHECK(disruption_candidates(r, 10).size() == 3);
    CHECK_THROWS_AS(disruption_candidates(r, 0), InvalidInput);
}

TEST_CASE("community rows and empty flag sets") {
    auto s = scene();
    std::vector<Classification> none{{"t0", 0.1, false}, {"t5", 0.3, false}};
    auto r = campaign_report(none, s.corpus, s.graph, s.partition, s.scores, s.liminal);
    CHECK(r.flagged_total == 0);
    CHECK(r.candidates.empty());
    std::size_t members = 0, tweets = 0;
    for (const auto& row : r.communities) {
        CHECK(row.flagged == 0);
        CHECK(row.flagged_rate == 0.0);
        members += row.members;
        tweets += row.tweets;
    }
    CHECK(members == 9);
    CHECK(tweets == 9);

    std::vector<Classification> one{{"t1", 0.9, true}, {"t2", 0.95, true}};
    auto r1 = campaign_report(one, s.corpus, s.graph, s.partition, s.scores, s.liminal, {1});
    auto c = s.partition.community_of(1);
    for (const auto& row : r1.communities) {
        if (row.community != c) continue;
        CHECK(row.flagged == 2);
        REQUIRE(row.top_flagged.size() == 1);
        CHECK(row.top_flagged[0].tweet_id == "t2");
    }
}

TEST_CASE("tweets by unknown authors are counted as unplaced") {
    auto s = scene();
    s.corpus.tweets.push_back({"x", anonymize_account("stranger", "detect"), make_timestamp(2022, 10, 2), "t"});
    std::vector<Classification> cls{{"x", 0.9, true}};
    auto r = campaign_report(cls, s.corpus, s.graph, s.partition, s.scores, s.liminal);
    CHECK(r.flagged_total == 1);
    CHECK(r.flagged_unplaced == 1);
}

TEST_CASE("mismatched inputs are rejected") {
    auto s = scene();
    auto bad = Partition::single_community(3);
    std::vector<Classification> cls{{"t0", 0.9, true}};
    CHECK_THROWS_AS(campaign_report(cls, s.corpus, s.graph, bad, s.scores, s.liminal), InvalidInput);
}

TEST_CASE("report serialization is stable") {
    auto s = scene();
    s.corpus.interactions.push_back(
        {InteractionKind::Retweet, account_for(4), account_for(0), "t0", make_timestamp(2022, 10, 3)});
    std::vector<Classification> cls{{"t0", 0.6, true}, {"t4", 0.9, true}};
    auto a = campaign_report(cls, s.corpus, s.graph, s.partition, s.scores, s.liminal);
    auto b = campaign_report(cls, s.corpus, s.graph, s.partition, s.scores, s.liminal);
    CHECK(report_lines(a) == report_lines(b));
    CHECK(report_table(a) == report_table(b));
    CHECK(candidate_from_line(candidate_to_line(a.candidates[0])) == a.candidates[0]);
    auto path = std::filesystem::temp_directory_path() / "chesty_candidates.jsonl";
    save_candidates(a.candidates, path);
    CHECK(load_candidates(path) == a.candidates);
}
