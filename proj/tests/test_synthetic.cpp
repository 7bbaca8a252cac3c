#include <doctest.h>

#include <set>

#include "chesty/synthetic.hpp"
#include "chesty/textenc.hpp"

using namespace chesty;

namespace {

SyntheticSpec spec(std::size_t n, std::size_t positive, std::uint64_t seed = 1) {
    SyntheticSpec s;
    s.n_tweets = n;
    s.n_positive = positive;
    s.themes = load_lexicons();
    s.seed = seed;
    return s;
}

std::size_t positives(const SyntheticCorpus& c) {
    std::size_t n = 0;
    for (const auto& [id, label] : c.truth) n += is_propaganda(label);
    return n;
}

}  // namespace

TEST_CASE("desk-scale corpus has 882 tweets and 62 positives") {
    auto c = generate_synthetic(spec(882, 62));
    CHECK(c.corpus.tweets.size() == 882);
    CHECK(c.truth.size() == 882);
    CHECK(positives(c) == 62);
    std::set<std::string> ids;
    for (const auto& t : c.corpus.tweets) {
        ids.insert(t.tweet_id);
        CHECK(c.truth.count(t.tweet_id) == 1);
        CHECK(t.created_at >= make_timestamp(2022, 10, 1));
        CHECK(t.created_at <= make_timestamp(2022, 11, 8, 23, 59, 59));
    }
    CHECK(ids.size() == 882);
    CHECK(c.corpus.external_interaction_count() == 0);
    CHECK_FALSE(c.corpus.interactions.empty());
}

TEST_CASE("positives embed theme tokens of their stratagems") {
    auto s = spec(200, 30, 4);
    auto c = generate_synthetic(s);
    for (const auto& t : c.corpus.tweets) {
        const auto& label = c.truth.at(t.tweet_id);
        if (!is_propaganda(label)) continue;
        std::set<std::string> theme;
        for (auto st : kAllStratagems)
            if (label.flag(st))
                for (const auto& w : s.themes.theme(st)) theme.insert(w);
        std::size_t hits = 0;
        for (const auto& tok : tokenize(t.text)) hits += theme.count(tok);
        CHECK(hits >= 4);
    }
}

TEST_CASE("generation is deterministic per seed") {
    auto a = generate_synthetic(spec(120, 10, 9));
    auto b = generate_synthetic(spec(120, 10, 9));
    auto c = generate_synthetic(spec(120, 10, 10));
    CHECK(a.corpus.tweets == b.corpus.tweets);
    CHECK(a.corpus.interactions == b.corpus.interactions);
    CHECK(a.truth == b.truth);
    CHECK(a.corpus.tweets != c.corpus.tweets);
}

TEST_CASE("positive count edge cases") {
    auto none = generate_synthetic(spec(10, 0));
    CHECK(none.corpus.tweets.size() == 10);
    CHECK(positives(none) == 0);
    auto all = generate_synthetic(spec(10, 10));
    CHECK(positives(all) == 10);
    CHECK_THROWS_AS(generate_synthetic(spec(10, 11)), InvalidInput);
}
