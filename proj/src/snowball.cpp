#include "chesty/snowball.hpp"

#include <json.hpp>

namespace chesty {

SampleSet snowball(const SocialGraphSource& source, const SnowballConfig& cfg) {
    if (cfg.seeds.empty()) throw ConfigError("snowball needs at least one seed account");
    if (cfg.layers < 1) throw ConfigError("snowball layers must be >= 1");
    if (cfg.retweeters_per_tweet < 1) throw ConfigError("retweeters_per_tweet must be >= 1");
    if (cfg.date_range.end < cfg.date_range.start) throw ConfigError("snowball date range is inverted");

    Rng rng(cfg.rng_seed);
    SampleSet out;
    out.accounts_by_layer.emplace_back(cfg.seeds.begin(), cfg.seeds.end());
    std::set<AccountId> seen = out.accounts_by_layer[0];
    std::set<std::string> collected;

    for (int layer = 0; layer < cfg.layers; ++layer) {
        std::set<AccountId> next;
        for (const AccountId& account : out.accounts_by_layer[static_cast<std::size_t>(layer)]) {
            for (auto& tweet : source.tweets_by(account, cfg.date_range)) {
                auto pool = source.retweeters_of(tweet.tweet_id);
                auto picked = sample_without_replacement<AccountId>(pool, cfg.retweeters_per_tweet, rng);
                for (auto& candidate : picked) {
                    if (!seen.insert(candidate).second) continue;
                    next.insert(candidate);
                    out.edges.push_back({account, candidate, layer + 1});
                }
                if (collected.insert(tweet.tweet_id).second) out.tweets.push_back(std::move(tweet));
            }
        }
        if (next.empty()) break;
        out.accounts_by_layer.push_back(std::move(next));
    }
    return out;
}

void save_sample_set(const SampleSet& sample, const std::filesystem::path& path) {
    std::string out;
    for (std::size_t layer = 0; layer < sample.accounts_by_layer.size(); ++layer) {
        for (const auto& account : sample.accounts_by_layer[layer]) {
            nlohmann::ordered_json j;
            j["type"] = "account";
            j["layer"] = layer;
            j["account"] = account.str();
            out += j.dump() + '\n';
        }
    }
    for (const auto& e : sample.edges) {
        nlohmann::ordered_json j;
        j["type"] = "edge";
        j["layer"] = e.layer;
        j["from"] = e.discoverer.str();
        j["to"] = e.discovered.str();
        out += j.dump() + '\n';
    }
    for (const auto& t : sample.tweets) {
        auto j = nlohmann::ordered_json::parse(tweet_to_line(t));
        nlohmann::ordered_json tagged;
        tagged["type"] = "tweet";
        for (auto& [k, v] : j.items()) tagged[k] = v;
        out += tagged.dump() + '\n';
    }
    write_file(path, out);
}

SampleSet load_sample_set(const std::filesystem::path& path) {
    SampleSet sample;
    for (const auto& line : read_lines(path)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError(std::string("sample line: ") + e.what());
        }
        auto type = j.value("type", std::string{});
        if (type == "account") {
            auto layer = j.at("layer").get<std::size_t>();
            if (sample.accounts_by_layer.size() <= layer) sample.accounts_by_layer.resize(layer + 1);
            sample.accounts_by_layer[layer].insert(AccountId::from_hex(j.at("account").get<std::string>()));
        } else if (type == "edge") {
            sample.edges.push_back({AccountId::from_hex(j.at("from").get<std::string>()),
                                    AccountId::from_hex(j.at("to").get<std::string>()), j.at("layer").get<int>()});
        } else if (type == "tweet") {
            j.erase("type");
            sample.tweets.push_back(tweet_from_line(j.dump()));
        } else {
            throw FormatError("unknown sample record type: " + type);
        }
    }
    return sample;
}

}  // namespace chesty
