#include "chesty/source.hpp"

#include <algorithm>
#include <set>

namespace chesty {

namespace {

std::vector<AccountId> sorted_unique(std::set<AccountId> ids) { return {ids.begin(), ids.end()}; }

template <typename Map, typename Key>
auto lookup(const Map& map, const Key& key) -> typename Map::mapped_type {
    auto it = map.find(key);
    return it == map.end() ? typename Map::mapped_type{} : it->second;
}

}  // namespace

FixtureSource::FixtureSource(Corpus universe) : universe_(std::move(universe)) {
    for (std::size_t i = 0; i < universe_.tweets.size(); ++i) {
        tweets_by_author_[universe_.tweets[i].author].push_back(i);
    }
    for (auto& [author, idx] : tweets_by_author_) {
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            const auto& ta = universe_.tweets[a];
            const auto& tb = universe_.tweets[b];
            return std::tie(ta.created_at, ta.tweet_id) < std::tie(tb.created_at, tb.tweet_id);
        });
    }

    std::map<std::string, std::set<AccountId>> retweeters;
    // Latest like per (tweet, account).
    std::map<std::string, std::map<AccountId, Timestamp>> likes;
    std::map<AccountId, std::set<AccountId>> followers, friends;
    for (const auto& e : universe_.interactions) {
        switch (e.kind) {
            case InteractionKind::Retweet:
                retweeters[*e.tweet_id].insert(e.actor);
                break;
            case InteractionKind::Like: {
                auto [it, inserted] = likes[*e.tweet_id].emplace(e.actor, e.observed_at);
                if (!inserted && it->second < e.observed_at) it->second = e.observed_at;
                break;
            }
            case InteractionKind::FollowOrFriend:
                followers[e.target].insert(e.actor);
                friends[e.actor].insert(e.target);
                break;
        }
    }
    for (auto& [id, set] : retweeters) retweeters_[id] = sorted_unique(std::move(set));
    for (auto& [id, set] : followers) followers_[id] = sorted_unique(std::move(set));
    for (auto& [id, set] : friends) friends_[id] = sorted_unique(std::move(set));
    for (auto& [id, by_account] : likes) {
        std::vector<std::pair<AccountId, Timestamp>> entries(by_account.begin(), by_account.end());
        // Most recent first; equal timestamps fall back to ascending AccountId.
        std::stable_sort(entries.begin(), entries.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        if (entries.size() > kLikersCap) entries.resize(kLikersCap);
        auto& out = likers_[id];
        for (auto& [account, at] : entries) out.push_back(account);
    }
}

FixtureSource FixtureSource::from_file(const std::filesystem::path& corpus_path) {
    return FixtureSource(load_corpus(corpus_path).corpus);
}

std::vector<TweetRecord> FixtureSource::tweets_by(const AccountId& author, DateRange range) const {
    if (range.end < range.start) throw InvalidInput("date range start after end");
    std::vector<TweetRecord> out;
    auto it = tweets_by_author_.find(author);
    if (it == tweets_by_author_.end()) return out;
    for (std::size_t i : it->second) {
        const auto& t = universe_.tweets[i];
        if (t.created_at >= range.start && t.created_at <= range.end) out.push_back(t);
    }
    return out;
}

std::vector<AccountId> FixtureSource::retweeters_of(const std::string& tweet_id) const {
    return lookup(retweeters_, tweet_id);
}

std::vector<AccountId> FixtureSource::likers_of(const std::string& tweet_id) const { return lookup(likers_, tweet_id); }

std::vector<AccountId> FixtureSource::followers_of(const AccountId& author) const { return lookup(followers_, author); }

std::vector<AccountId> FixtureSource::friends_of(const AccountId& author) const { return lookup(friends_, author); }

}  // namespace chesty
