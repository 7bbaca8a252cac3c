#include <doctest.h>

#include "chesty/source.hpp"

using namespace chesty;

namespace {

const std::filesystem::path kFixtures = CHESTY_FIXTURE_DIR;

AccountId account_for(const std::string& raw) { return anonymize_account(raw, "chesty-test-salt"); }

InteractionEvent engagement(InteractionKind kind, const AccountId& actor, const AccountId& target,
                            const std::string& tweet, Timestamp at) {
    return {kind, actor, target, tweet, at};
}

Corpus one_tweet_corpus(const AccountId& author) {
    Corpus c;
    c.tweets.push_back({"t", author, make_timestamp(2022, 10, 2), "text"});
    return c;
}

}  // namespace

TEST_CASE("tweets_by honours the inclusive date window") {
    auto source = FixtureSource::from_file(kFixtures / "janedoe.jsonl");
    auto jane = account_for("janedoe");
    auto got = source.tweets_by(jane, {make_timestamp(2022, 10, 1), make_timestamp(2022, 11, 8, 23, 59, 59)});
    REQUIRE(got.size() == 2);
    CHECK(got[0].tweet_id == "jd-2");
    CHECK(got[1].tweet_id == "jd-3");

    auto at = make_timestamp(2022, 10, 5, 8, 30, 0);
    auto exact = source.tweets_by(jane, {at, at});
    REQUIRE(exact.size() == 1);
    CHECK(exact[0].tweet_id == "jd-2");

    CHECK(source.tweets_by(account_for("nobody"), {at, at}).empty());
    CHECK_THROWS_AS(source.tweets_by(jane, {make_timestamp(2022, 11, 1), make_timestamp(2022, 10, 1)}), InvalidInput);
}

TEST_CASE("follow edges read as actor follows target") {
    auto source = FixtureSource::from_file(kFixtures / "janedoe.jsonl");
    auto jane = account_for("janedoe"), john = account_for("johnroe");
    CHECK(source.followers_of(jane) == std::vector<AccountId>{john});
    CHECK(source.friends_of(john) == std::vector<AccountId>{jane});
    CHECK(source.followers_of(john).empty());
    CHECK(source.retweeters_of("jd-2") == std::vector<AccountId>{john});
    CHECK(source.retweeters_of("jd-3").empty());
}

TEST_CASE("retweeters are de-duplicated and sorted") {
    auto author = account_for("author");
    auto c = one_tweet_corpus(author);
    std::vector<AccountId> expected;
    for (int i = 0; i < 25; ++i) {
        auto a = account_for("rt" + std::to_string(i));
        expected.push_back(a);
        c.interactions.push_back(
            engagement(InteractionKind::Retweet, a, author, "t", make_timestamp(2022, 10, 3, 0, i)));
    }
    c.interactions.push_back(engagement(InteractionKind::Retweet, expected[0], author, "t", make_timestamp(2022, 10, 4)));
    std::sort(expected.begin(), expected.end());
    FixtureSource source(c);
    CHECK(source.retweeters_of("t") == expected);
}

TEST_CASE("likers are capped at the 100 most recent") {
    auto author = account_for("author");
    auto c = one_tweet_corpus(author);
    std::vector<AccountId> likers;
    for (int i = 0; i < 150; ++i) {
        likers.push_back(account_for("like" + std::to_string(i)));
        c.interactions.push_back(
            engagement(InteractionKind::Like, likers.back(), author, "t", make_timestamp(2022, 10, 3) + std::chrono::minutes(i)));
    }
    FixtureSource source(c);
    auto got = source.likers_of("t");
    REQUIRE(got.size() == kLikersCap);
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == likers[149 - k]);
}

TEST_CASE("equal like timestamps fall back to ascending account") {
    auto author = account_for("author");
    auto c = one_tweet_corpus(author);
    std::vector<AccountId> likers;
    for (int i = 0; i < 5; ++i) {
        likers.push_back(account_for("tie" + std::to_string(i)));
        c.interactions.push_back(engagement(InteractionKind::Like, likers.back(), author, "t", make_timestamp(2022, 10, 3)));
    }
    std::sort(likers.begin(), likers.end());
    FixtureSource source(c);
    CHECK(source.likers_of("t") == likers);
}
