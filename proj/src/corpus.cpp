#include "chesty/corpus.hpp"

#include <json.hpp>
#include <set>

namespace chesty {

namespace {

nlohmann::json parse_object(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(e.what());
    }
    if (!j.is_object()) throw FormatError("record is not an object");
    return j;
}

std::string required_string(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw FormatError(std::string("missing string field ") + key);
    return it->get<std::string>();
}

Timestamp checked_time(const std::string& text) {
    Timestamp t = parse_rfc3339(text);
    auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
    if (t < Timestamp{} || t > now) throw FormatError("timestamp outside [1970, now]: " + text);
    return t;
}

void check_malformed(std::size_t skipped, std::size_t total, const std::filesystem::path& path) {
    if (total > 0 && static_cast<double>(skipped) > kMaxMalformedFraction * static_cast<double>(total))
        throw FormatError(path.string() + ": " + std::to_string(skipped) + " of " + std::to_string(total) +
                          " lines malformed");
}

}  // namespace

bool AccountId::is_valid(std::string_view text) {
    if (text.size() != kLength) return false;
    for (char c : text) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    }
    return true;
}

AccountId AccountId::from_hex(std::string hex) {
    if (!is_valid(hex)) throw FormatError("not an account digest: " + hex);
    return AccountId(std::move(hex));
}

AccountId anonymize_account(std::string_view raw_id, std::string_view salt) {
    if (raw_id.empty()) throw InvalidInput("raw account id must be non-empty");
    std::string material;
    material.reserve(salt.size() + raw_id.size());
    material.append(salt);
    material.append(raw_id);
    return AccountId::from_hex(sha256_hex(material).substr(0, AccountId::kLength));
}

const char* interaction_kind_name(InteractionKind kind) {
    switch (kind) {
        case InteractionKind::Like: return "like";
        case InteractionKind::Retweet: return "retweet";
        case InteractionKind::FollowOrFriend: return "follow";
    }
    return "?";
}

InteractionKind parse_interaction_kind(std::string_view name) {
    if (name == "like") return InteractionKind::Like;
    if (name == "retweet") return InteractionKind::Retweet;
    if (name == "follow") return InteractionKind::FollowOrFriend;
    throw FormatError("unknown interaction kind: " + std::string(name));
}

const TweetRecord* Corpus::find_tweet(std::string_view tweet_id) const {
    for (const auto& t : tweets) {
        if (t.tweet_id == tweet_id) return &t;
    }
    return nullptr;
}

std::size_t Corpus::external_interaction_count() const {
    std::set<std::string_view> ids;
    for (const auto& t : tweets) ids.insert(t.tweet_id);
    std::size_t n = 0;
    for (const auto& e : interactions) {
        if (e.tweet_id && !ids.count(*e.tweet_id)) ++n;
    }
    return n;
}

std::string tweet_to_line(const TweetRecord& tweet) {
    nlohmann::ordered_json j;
    j["tweet_id"] = tweet.tweet_id;
    j["author"] = tweet.author.str();
    j["created_at"] = format_rfc3339(tweet.created_at);
    j["text"] = tweet.text;
    return j.dump();
}

TweetRecord tweet_from_line(std::string_view line) {
    auto j = parse_object(line);
    TweetRecord t;
    t.tweet_id = required_string(j, "tweet_id");
    if (t.tweet_id.empty()) throw FormatError("empty tweet_id");
    t.author = AccountId::from_hex(required_string(j, "author"));
    t.created_at = checked_time(required_string(j, "created_at"));
    t.text = required_string(j, "text");
    if (utf8_length(t.text) > kMaxTweetLength) throw FormatError("tweet text too long");
    return t;
}

std::string interaction_to_line(const InteractionEvent& event) {
    nlohmann::ordered_json j;
    j["kind"] = interaction_kind_name(event.kind);
    j["actor"] = event.actor.str();
    j["target"] = event.target.str();
    if (event.tweet_id)
        j["tweet_id"] = *event.tweet_id;
    else
        j["tweet_id"] = nullptr;
    j["observed_at"] = format_rfc3339(event.observed_at);
    return j.dump();
}

InteractionEvent interaction_from_line(std::string_view line) {
    auto j = parse_object(line);
    InteractionEvent e;
    e.kind = parse_interaction_kind(required_string(j, "kind"));
    e.actor = AccountId::from_hex(required_string(j, "actor"));
    e.target = AccountId::from_hex(required_string(j, "target"));
    if (e.actor == e.target) throw FormatError("interaction actor equals target");
    auto it = j.find("tweet_id");
    if (it != j.end() && it->is_string()) {
        e.tweet_id = it->get<std::string>();
        if (e.tweet_id->empty()) throw FormatError("empty tweet_id");
    } else if (it != j.end() && !it->is_null()) {
        throw FormatError("tweet_id must be a string or null");
    }
    bool needs_tweet = e.kind != InteractionKind::FollowOrFriend;
    if (needs_tweet != e.tweet_id.has_value())
        throw FormatError(needs_tweet ? "like/retweet requires tweet_id" : "follow must not carry tweet_id");
    e.observed_at = checked_time(required_string(j, "observed_at"));
    return e;
}

std::filesystem::path interactions_path_for(const std::filesystem::path& corpus_path) {
    auto name = corpus_path.stem().string() + ".interactions" + corpus_path.extension().string();
    return corpus_path.parent_path() / name;
}

CorpusLoadResult load_corpus(const std::filesystem::path& path) {
    CorpusLoadResult result;
    result.corpus.provenance = "file:" + path.string();

    std::set<std::string> seen;
    std::size_t total = 0;
    for (const auto& line : read_lines(path)) {
        if (line.empty()) continue;
        ++total;
        try {
            auto tweet = tweet_from_line(line);
            if (!seen.insert(tweet.tweet_id).second) throw FormatError("duplicate tweet_id");
            result.corpus.tweets.push_back(std::move(tweet));
        } catch (const FormatError&) {
            ++result.skipped_tweets;
        }
    }
    check_malformed(result.skipped_tweets, total, path);

    auto ipath = interactions_path_for(path);
    if (std::filesystem::exists(ipath)) {
        total = 0;
        for (const auto& line : read_lines(ipath)) {
            if (line.empty()) continue;
            ++total;
            try {
                result.corpus.interactions.push_back(interaction_from_line(line));
            } catch (const FormatError&) {
                ++result.skipped_interactions;
            }
        }
        check_malformed(result.skipped_interactions, total, ipath);
    }
    return result;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::string out;
    for (const auto& t : corpus.tweets) {
        out += tweet_to_line(t);
        out += '\n';
    }
    write_file(path, out);
    std::string iout;
    for (const auto& e : corpus.interactions) {
        iout += interaction_to_line(e);
        iout += '\n';
    }
    write_file(interactions_path_for(path), iout);
}

}  // namespace chesty
