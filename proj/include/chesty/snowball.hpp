#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <vector>

#include "chesty/source.hpp"

namespace chesty {

struct SnowballConfig {
    std::vector<AccountId> seeds;
    int layers = 2;
    std::size_t retweeters_per_tweet = 20;
    DateRange date_range{make_timestamp(2022, 10, 1), make_timestamp(2022, 11, 8, 23, 59, 59)};
    std::uint64_t rng_seed = 1;
};

struct DiscoveryEdge {
    AccountId discoverer;
    AccountId discovered;
    int layer = 0;  // layer of `discovered`

    friend bool operator==(const DiscoveryEdge&, const DiscoveryEdge&) = default;
};

struct SampleSet {
    std::vector<std::set<AccountId>> accounts_by_layer;
    std::vector<TweetRecord> tweets;
    std::vector<DiscoveryEdge> edges;

    friend bool operator==(const SampleSet&, const SampleSet&) = default;
};

/// min(k, |pool|) distinct elements drawn uniformly without replacement,
/// returned in pool order. `pool` must already be de-duplicated.
template <typename T>
std::vector<T> sample_without_replacement(std::span<const T> pool, std::size_t k, Rng& rng) {
    if (k >= pool.size()) return {pool.begin(), pool.end()};
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.uniform_index(idx.size() - i)]);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    std::vector<T> out;
    out.reserve(k);
    for (std::size_t i : idx) out.push_back(pool[i]);
    return out;
}

/// Retweeter-driven snowball expansion. Accounts in each layer are visited in
/// ascending AccountId order and their tweets in ascending created_at; an
/// account lands in the earliest layer that reaches it.
SampleSet snowball(const SocialGraphSource& source, const SnowballConfig& cfg);

// Sample file: one object per line, discriminated by "type":
//   {"type":"account","layer":k,"account":id}
//   {"type":"edge","layer":k,"from":id,"to":id}
//   {"type":"tweet", tweet_id, author, created_at, text}
void save_sample_set(const SampleSet& sample, const std::filesystem::path& path);
SampleSet load_sample_set(const std::filesystem::path& path);

}  // namespace chesty
