#include <doctest.h>

#include <filesystem>

#include "chesty/corpus.hpp"

using namespace chesty;

namespace {

const std::filesystem::path kFixtures = CHESTY_FIXTURE_DIR;

std::string trimmed(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

}  // namespace

TEST_CASE("anonymization is salted and frozen") {
    auto id = anonymize_account("janedoe", "chesty-test-salt");
    CHECK(id.str() == trimmed(read_file(kFixtures / "janedoe.digest")));
    CHECK(id.str().size() == AccountId::kLength);
    CHECK(anonymize_account("janedoe", "chesty-test-salt") == id);
    CHECK(anonymize_account("johnroe", "chesty-test-salt") != id);
    CHECK(anonymize_account("janedoe", "other-salt") != id);
    CHECK_THROWS_AS(anonymize_account("", "chesty-test-salt"), InvalidInput);
}

TEST_CASE("AccountId validates hex") {
    CHECK(AccountId::is_valid("9fc4ecac4f0211df74fe0630180930ca"));
    CHECK_FALSE(AccountId::is_valid("9FC4ECAC4F0211DF74FE0630180930CA"));
    CHECK_FALSE(AccountId::is_valid("9fc4ecac"));
    CHECK_FALSE(AccountId::is_valid("zzc4ecac4f0211df74fe0630180930ca"));
    CHECK_THROWS_AS(AccountId::from_hex("janedoe"), FormatError);
}

TEST_CASE("tweet and interaction lines round trip") {
    TweetRecord t{"1", anonymize_account("a", "s"), make_timestamp(2022, 10, 3, 4, 5, 6), "hello \"world\""};
    CHECK(tweet_from_line(tweet_to_line(t)) == t);

    InteractionEvent like{InteractionKind::Like, anonymize_account("b", "s"), t.author, "1",
                          make_timestamp(2022, 10, 4)};
    CHECK(interaction_from_line(interaction_to_line(like)) == like);
    InteractionEvent follow{InteractionKind::FollowOrFriend, like.actor, t.author, std::nullopt,
                            make_timestamp(2022, 10, 4)};
    CHECK(interaction_from_line(interaction_to_line(follow)) == follow);
}

TEST_CASE("malformed lines are rejected") {
    const std::string author = anonymize_account("a", "s").str();
    CHECK_THROWS_AS(tweet_from_line("not json"), FormatError);
    CHECK_THROWS_AS(tweet_from_line(R"({"tweet_id":"1","author":"x","created_at":"2022-10-01T00:00:00Z","text":""})"),
                    FormatError);
    CHECK_THROWS_AS(tweet_from_line(R"({"tweet_id":"","author":")" + author +
                                    R"(","created_at":"2022-10-01T00:00:00Z","text":"t"})"),
                    FormatError);
    CHECK_THROWS_AS(tweet_from_line(R"({"tweet_id":"1","author":")" + author + R"(","created_at":"soon","text":"t"})"),
                    FormatError);
    std::string long_text(kMaxTweetLength + 1, 'a');
    CHECK_THROWS_AS(tweet_from_line(R"({"tweet_id":"1","author":")" + author +
                                    R"(","created_at":"2022-10-01T00:00:00Z","text":")" + long_text + "\"}"),
                    FormatError);

    const std::string other = anonymize_account("b", "s").str();
    CHECK_THROWS_AS(interaction_from_line(R"({"kind":"like","actor":")" + other + R"(","target":")" + author +
                                          R"(","tweet_id":null,"observed_at":"2022-10-01T00:00:00Z"})"),
                    FormatError);
    CHECK_THROWS_AS(interaction_from_line(R"({"kind":"follow","actor":")" + other + R"(","target":")" + author +
                                          R"(","tweet_id":"1","observed_at":"2022-10-01T00:00:00Z"})"),
                    FormatError);
    CHECK_THROWS_AS(interaction_from_line(R"({"kind":"like","actor":")" + author + R"(","target":")" + author +
                                          R"(","tweet_id":"1","observed_at":"2022-10-01T00:00:00Z"})"),
                    FormatError);
    CHECK_THROWS_AS(interaction_from_line(R"({"kind":"quote","actor":")" + other + R"(","target":")" + author +
                                          R"(","tweet_id":"1","observed_at":"2022-10-01T00:00:00Z"})"),
                    FormatError);
}

TEST_CASE("load_corpus tolerates up to ten percent malformed lines") {
    auto empty = std::filesystem::temp_directory_path() / "chesty_empty_corpus.jsonl";
    write_file(empty, "");
    auto r0 = load_corpus(empty);
    CHECK(r0.corpus.tweets.empty());
    CHECK(r0.skipped_tweets == 0);

    auto r5 = load_corpus(kFixtures / "five_valid.jsonl");
    CHECK(r5.corpus.tweets.size() == 5);
    CHECK(r5.skipped_tweets == 0);

    auto r10 = load_corpus(kFixtures / "one_malformed_in_ten.jsonl");
    CHECK(r10.corpus.tweets.size() == 9);
    CHECK(r10.skipped_tweets == 1);

    CHECK_THROWS_AS(load_corpus(kFixtures / "two_malformed_in_eleven.jsonl"), FormatError);
    CHECK_THROWS_AS(load_corpus(kFixtures / "absent.jsonl"), IoError);
}

TEST_CASE("corpus loads sibling interactions and saves both files") {
    auto r = load_corpus(kFixtures / "janedoe.jsonl");
    CHECK(r.corpus.tweets.size() == 5);
    REQUIRE(r.corpus.interactions.size() == 2);
    CHECK(r.corpus.interactions[0].kind == InteractionKind::Retweet);
    CHECK(r.corpus.find_tweet("jd-2") != nullptr);
    CHECK(r.corpus.find_tweet("nope") == nullptr);
    CHECK(r.corpus.external_interaction_count() == 0);

    auto out = std::filesystem::temp_directory_path() / "chesty_corpus_copy.jsonl";
    save_corpus(r.corpus, out);
    CHECK(interactions_path_for(out).filename() == "chesty_corpus_copy.interactions.jsonl");
    auto again = load_corpus(out);
    CHECK(again.corpus.tweets == r.corpus.tweets);
    CHECK(again.corpus.interactions == r.corpus.interactions);
}
