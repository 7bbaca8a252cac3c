#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chesty/util.hpp"

namespace chesty {

/// Anonymized account handle: 32 lowercase hex characters of a salted digest.
class AccountId {
  public:
    static constexpr std::size_t kLength = 32;

    AccountId() = default;
    /// Validates `hex` and wraps it; throws FormatError on anything else.
    static AccountId from_hex(std::string hex);
    static bool is_valid(std::string_view text);

    const std::string& str() const { return value_; }
    bool empty() const { return value_.empty(); }

    friend auto operator<=>(const AccountId&, const AccountId&) = default;
    friend bool operator==(const AccountId&, const AccountId&) = default;

  private:
    explicit AccountId(std::string v) : value_(std::move(v)) {}
    std::string value_;
};

/// Salted SHA-256 of salt‖raw_id, hex encoded and truncated to 32 chars.
AccountId anonymize_account(std::string_view raw_id, std::string_view salt);

inline constexpr std::size_t kMaxTweetLength = 4000;

struct TweetRecord {
    std::string tweet_id;
    AccountId author;
    Timestamp created_at{};
    std::string text;

    friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

enum class InteractionKind { Like, Retweet, FollowOrFriend };

const char* interaction_kind_name(InteractionKind kind);
InteractionKind parse_interaction_kind(std::string_view name);

struct InteractionEvent {
    InteractionKind kind = InteractionKind::Like;
    AccountId actor;
    AccountId target;
    std::optional<std::string> tweet_id;
    Timestamp observed_at{};

    friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

struct Corpus {
    std::vector<TweetRecord> tweets;
    std::vector<InteractionEvent> interactions;
    std::string provenance;

    const TweetRecord* find_tweet(std::string_view tweet_id) const;
    /// Interactions whose tweet_id points outside this corpus.
    std::size_t external_interaction_count() const;
};

struct CorpusLoadResult {
    Corpus corpus;
    std::size_t skipped_tweets = 0;
    std::size_t skipped_interactions = 0;
};

// Line formats. Keys are normative:
//   tweets:       tweet_id, author, created_at, text
//   interactions: kind, actor, target, tweet_id, observed_at
std::string tweet_to_line(const TweetRecord& tweet);
TweetRecord tweet_from_line(std::string_view line);
std::string interaction_to_line(const InteractionEvent& event);
InteractionEvent interaction_from_line(std::string_view line);

/// "dir/corpus.jsonl" -> "dir/corpus.interactions.jsonl"
std::filesystem::path interactions_path_for(const std::filesystem::path& corpus_path);

/// Loads tweets from `path` and, when present, interactions from the sibling
/// file. Malformed lines are skipped and counted; more than 10% malformed in
/// either file is a FormatError.
CorpusLoadResult load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

inline constexpr double kMaxMalformedFraction = 0.10;

}  // namespace chesty
