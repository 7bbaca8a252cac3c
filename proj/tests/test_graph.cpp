#include <doctest.h>

#include <filesystem>

#include "chesty/graph.hpp"

using namespace chesty;

namespace {

AccountId account_for(const std::string& raw) { return anonymize_account(raw, "test"); }

InteractionEvent event(InteractionKind kind, const AccountId& a, const AccountId& b) {
    InteractionEvent e;
    e.kind = kind;
    e.actor = a;
    e.target = b;
    if (kind != InteractionKind::FollowOrFriend) e.tweet_id = "t1";
    e.observed_at = make_timestamp(2022, 10, 2);
    return e;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("chesty_graph_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("interaction kinds carry their weights") {
    auto a = account_for("a"), b = account_for("b"), c = account_for("c");
    std::vector<InteractionEvent> events{event(InteractionKind::Like, a, b), event(InteractionKind::Retweet, a, c),
                                         event(InteractionKind::FollowOrFriend, b, c)};
    auto g = build_graph(events).graph;
    REQUIRE(g.node_count() == 3);
    auto ia = *g.index_of(a.str()), ib = *g.index_of(b.str()), ic = *g.index_of(c.str());
    CHECK(g.edge_weight(ia, ib) == 1.0);
    CHECK(g.edge_weight(ia, ic) == 10.0);
    CHECK(g.edge_weight(ib, ic) == 10.0);
    CHECK(g.total_weight() == 21.0);
}

TEST_CASE("a like and a retweet between the same pair sum to 11") {
    auto a = account_for("a"), b = account_for("b");
    std::vector<InteractionEvent> events{event(InteractionKind::Like, a, b), event(InteractionKind::Retweet, b, a)};
    auto g = build_graph(events).graph;
    CHECK(g.edge_weight(0, 1) == 11.0);
    CHECK(g.edge_weight(1, 0) == 11.0);
    CHECK(g.edges().size() == 1);
}

TEST_CASE("nodes are ordered by account id") {
    std::vector<AccountId> ids{account_for("x"), account_for("y"), account_for("z")};
    std::vector<InteractionEvent> events{event(InteractionKind::Like, ids[0], ids[1]),
                                         event(InteractionKind::Like, ids[1], ids[2])};
    auto g = build_graph(events).graph;
    std::sort(ids.begin(), ids.end());
    for (NodeIndex v = 0; v < 3; ++v) CHECK(g.label(v) == ids[static_cast<std::size_t>(v)].str());
}

TEST_CASE("self-interactions are skipped and counted") {
    auto a = account_for("a"), b = account_for("b");
    auto self = event(InteractionKind::Like, a, b);
    self.target = a;
    std::vector<InteractionEvent> events{self, event(InteractionKind::Like, a, b)};
    auto r = build_graph(events);
    CHECK(r.skipped_self_interactions == 1);
    CHECK(r.graph.total_weight() == 1.0);
}

TEST_CASE("empty event list gives an empty graph") {
    auto r = build_graph({});
    CHECK(r.graph.node_count() == 0);
    CHECK(r.graph.total_weight() == 0.0);
}

TEST_CASE("degree is the weighted row sum and loops count twice") {
    std::vector<WeightedEdge> edges{{0, 1, 2.0}, {1, 2, 3.0}, {2, 2, 1.5}};
    auto g = WeightedGraph::from_edges(3, edges);
    CHECK(degree(g, 0) == 2.0);
    CHECK(degree(g, 1) == 5.0);
    CHECK(degree(g, 2) == 6.0);
    CHECK(g.loop_weight(2) == 1.5);
    CHECK(g.total_weight() == 6.5);
    CHECK_THROWS_AS(degree(g, 3), NotFound);
    CHECK(g.neighbors(2) == std::vector<NodeIndex>{1});
}

TEST_CASE("parallel edges are merged") {
    std::vector<WeightedEdge> edges{{0, 1, 1.0}, {1, 0, 2.0}};
    auto g = WeightedGraph::from_edges(2, edges);
    CHECK(g.edge_weight(0, 1) == 3.0);
    CHECK(g.edges() == std::vector<WeightedEdge>{{0, 1, 3.0}});
}

TEST_CASE("negative weights and out-of-range nodes are rejected") {
    std::vector<WeightedEdge> neg{{0, 1, -1.0}};
    CHECK_THROWS_AS(WeightedGraph::from_edges(2, neg), InvalidInput);
    std::vector<WeightedEdge> out{{0, 5, 1.0}};
    CHECK_THROWS_AS(WeightedGraph::from_edges(2, out), InvalidInput);
}

TEST_CASE("graph file round trip") {
    auto dir = temp_dir("roundtrip");
    std::vector<WeightedEdge> edges{{0, 1, 2.5}, {1, 2, 10.0}, {2, 2, 1.0}};
    auto g = WeightedGraph::from_edges(3, edges, {"aa", "bb", "cc"});
    save_graph(g, dir / "graph.txt");
    CHECK(std::filesystem::exists(dir / "graph.nodes.txt"));
    auto back = load_graph(dir / "graph.txt");
    CHECK(back.labels() == g.labels());
    CHECK(back.edges() == g.edges());
}

TEST_CASE("edge list without a node map") {
    auto dir = temp_dir("bare");
    write_file(dir / "g.txt", "0 1 1\n1 3 2\n");
    auto g = load_graph(dir / "g.txt");
    CHECK(g.node_count() == 4);
    CHECK(g.label(3) == "3");
    CHECK(degree(g, 2) == 0.0);
    write_file(dir / "bad.txt", "0 x 1\n");
    CHECK_THROWS_AS(load_graph(dir / "bad.txt"), FormatError);
}
