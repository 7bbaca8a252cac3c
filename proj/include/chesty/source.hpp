#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "chesty/corpus.hpp"

namespace chesty {

inline constexpr std::size_t kLikersCap = 100;

struct DateRange {
    Timestamp start{};
    Timestamp end{};
};

/// Read-only view of a social platform. A live client would implement the
/// same five queries; the sampler only ever talks to this interface.
class SocialGraphSource {
  public:
    virtual ~SocialGraphSource() = default;

    /// Tweets with start <= created_at <= end, ascending by created_at.
    virtual std::vector<TweetRecord> tweets_by(const AccountId& author, DateRange range) const = 0;
    /// De-duplicated retweeters, ascending AccountId.
    virtual std::vector<AccountId> retweeters_of(const std::string& tweet_id) const = 0;
    /// At most 100 likers, most recent first.
    virtual std::vector<AccountId> likers_of(const std::string& tweet_id) const = 0;
    virtual std::vector<AccountId> followers_of(const AccountId& author) const = 0;
    virtual std::vector<AccountId> friends_of(const AccountId& author) const = 0;
};

/// In-memory universe built from corpus files. FollowOrFriend(actor, target)
/// reads as "actor follows target": actor is a follower of target and target
/// is a friend of actor.
class FixtureSource final : public SocialGraphSource {
  public:
    explicit FixtureSource(Corpus universe);
    static FixtureSource from_file(const std::filesystem::path& corpus_path);

    std::vector<TweetRecord> tweets_by(const AccountId& author, DateRange range) const override;
    std::vector<AccountId> retweeters_of(const std::string& tweet_id) const override;
    std::vector<AccountId> likers_of(const std::string& tweet_id) const override;
    std::vector<AccountId> followers_of(const AccountId& author) const override;
    std::vector<AccountId> friends_of(const AccountId& author) const override;

    const Corpus& universe() const { return universe_; }

  private:
    Corpus universe_;
    std::map<AccountId, std::vector<std::size_t>> tweets_by_author_;
    std::map<std::string, std::vector<AccountId>> retweeters_;
    std::map<std::string, std::vector<AccountId>> likers_;
    std::map<AccountId, std::vector<AccountId>> followers_;
    std::map<AccountId, std::vector<AccountId>> friends_;
};

}  // namespace chesty
