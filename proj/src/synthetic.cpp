#include "chesty/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>

namespace chesty {

namespace {

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
    std::vector<std::string> words;
    for (auto& line : read_lines(path)) {
        if (line.empty() || line[0] == '#') continue;
        words.push_back(std::move(line));
    }
    if (words.empty()) throw FormatError("empty lexicon: " + path.string());
    return words;
}

struct Account {
    AccountId id;
    std::size_t home = 0;
    std::size_t second = 0;  // == home for ordinary members
};

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[rng.uniform_index(items.size())];
}

}  // namespace

std::filesystem::path default_lexicon_dir() { return std::filesystem::path(CHESTY_DATA_DIR) / "lexicons"; }

Lexicons load_lexicons(const std::filesystem::path& dir) {
    Lexicons lex;
    for (Stratagem s : kAllStratagems) {
        lex.themes[static_cast<int>(s)] = read_word_list(dir / (std::string(stratagem_name(s)) + ".txt"));
    }
    lex.neutral = read_word_list(dir / "neutral.txt");
    return lex;
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_positive > spec.n_tweets) throw InvalidInput("n_positive exceeds n_tweets");
    if (spec.communities == 0 || spec.accounts_per_community < 2) throw InvalidInput("need >= 1 community of >= 2 accounts");
    if (spec.themes.neutral.empty()) throw InvalidInput("neutral lexicon is empty");
    for (const auto& t : spec.themes.themes) {
        if (t.empty()) throw InvalidInput("stratagem lexicon is empty");
    }
    if (spec.end < spec.start) throw InvalidInput("synthetic date range is inverted");

    Rng rng(spec.seed);
    SyntheticCorpus out;
    out.corpus.provenance = "synthetic seed=" + std::to_string(spec.seed);

    std::vector<Account> accounts;
    std::vector<std::vector<std::size_t>> members(spec.communities);
    auto add_account = [&](const std::string& raw, std::size_t home, std::size_t second) {
        Account a{anonymize_account(raw, spec.salt), home, second};
        out.raw_handles[a.id] = raw;
        members[home].push_back(accounts.size());
        if (second != home) members[second].push_back(accounts.size());
        accounts.push_back(std::move(a));
    };
    char buf[64];
    for (std::size_t c = 0; c < spec.communities; ++c) {
        for (std::size_t i = 0; i < spec.accounts_per_community; ++i) {
            std::snprintf(buf, sizeof buf, "synth-c%zu-u%02zu", c, i);
            add_account(buf, c, c);
        }
    }
    std::vector<std::size_t> bridges;
    for (std::size_t b = 0; b < spec.bridge_accounts && spec.communities > 1; ++b) {
        std::snprintf(buf, sizeof buf, "synth-bridge-%zu", b);
        bridges.push_back(accounts.size());
        add_account(buf, b % spec.communities, (b + 1) % spec.communities);
    }

    // Which tweets are positive.
    std::vector<std::size_t> order(spec.n_tweets);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = 0; i < spec.n_positive; ++i) {
        std::swap(order[i], order[i + rng.uniform_index(order.size() - i)]);
    }
    std::vector<bool> positive(spec.n_tweets, false);
    for (std::size_t i = 0; i < spec.n_positive; ++i) positive[order[i]] = true;

    const auto span_seconds = static_cast<std::uint64_t>((spec.end - spec.start).count());
    const Timestamp labeled_at = spec.end + std::chrono::hours{24};

    for (std::size_t i = 0; i < spec.n_tweets; ++i) {
        TweetRecord tweet;
        std::snprintf(buf, sizeof buf, "t%05zu", i + 1);
        tweet.tweet_id = buf;

        std::size_t author;
        if (positive[i] && rng.bernoulli(0.7)) {
            author = pick(rng, members[0]);
        } else {
            author = rng.uniform_index(accounts.size());
        }
        tweet.author = accounts[author].id;
        tweet.created_at = spec.start + std::chrono::seconds{rng.uniform_index(span_seconds + 1)};

        std::vector<std::string> words;
        if (positive[i]) {
            std::vector<Stratagem> chosen{kAllStratagems[rng.uniform_index(4)]};
            if (rng.bernoulli(0.3)) {
                Stratagem extra = kAllStratagems[rng.uniform_index(4)];
                if (extra != chosen[0]) chosen.push_back(extra);
            }
            std::size_t n_theme = 4 + rng.uniform_index(5);
            for (std::size_t k = 0; k < n_theme; ++k) {
                words.push_back(pick(rng, spec.themes.theme(chosen[k % chosen.size()])));
            }
            std::size_t n_neutral = 6 + rng.uniform_index(11);
            for (std::size_t k = 0; k < n_neutral; ++k) words.push_back(pick(rng, spec.themes.neutral));
            rng.shuffle(words);

            StratagemLabel label;
            for (Stratagem s : chosen) label.set_flag(s, true);
            label.annotator = "synthetic";
            label.labeled_at = labeled_at;
            out.truth[tweet.tweet_id] = label;
        } else {
            StratagemLabel label;
            label.annotator = "synthetic";
            label.labeled_at = labeled_at;
            out.truth[tweet.tweet_id] = label;
            std::size_t n_neutral = 8 + rng.uniform_index(13);
            for (std::size_t k = 0; k < n_neutral; ++k) words.push_back(pick(rng, spec.themes.neutral));
            if (rng.bernoulli(spec.negative_theme_noise)) {
                const auto& lex = spec.themes.theme(kAllStratagems[rng.uniform_index(4)]);
                words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(words.size() + 1)),
                             pick(rng, lex));
            }
        }
        std::string text;
        for (const auto& w : words) {
            if (!text.empty()) text += ' ';
            text += w;
        }
        switch (rng.uniform_index(4)) {
            case 0: text += '!'; break;
            case 1: text += '?'; break;
            default: break;
        }
        out.corpus.tweets.push_back(std::move(tweet));
        out.corpus.tweets.back().text = std::move(text);
    }

    // Interactions: dense inside communities, sparse across, plus bridges.
    std::set<std::tuple<int, std::size_t, std::size_t, std::string>> seen;
    auto emit = [&](InteractionKind kind, std::size_t actor, std::size_t target,
                    const std::string* tweet_id, Timestamp at) {
        if (actor == target) return;
        std::string key = tweet_id ? *tweet_id : std::string{};
        if (!seen.insert({static_cast<int>(kind), actor, target, key}).second) return;
        InteractionEvent e;
        e.kind = kind;
        e.actor = accounts[actor].id;
        e.target = accounts[target].id;
        if (tweet_id) e.tweet_id = *tweet_id;
        e.observed_at = at;
        out.corpus.interactions.push_back(std::move(e));
    };

    for (std::size_t a = 0; a < accounts.size(); ++a) {
        std::vector<std::size_t> targets;
        std::size_t per_side = accounts[a].home == accounts[a].second ? 3 : 2;
        for (std::size_t side : {accounts[a].home, accounts[a].second}) {
            for (std::size_t k = 0; k < per_side; ++k) targets.push_back(pick(rng, members[side]));
            if (accounts[a].home == accounts[a].second) break;
        }
        for (std::size_t t : targets) emit(InteractionKind::FollowOrFriend, a, t, nullptr, spec.end);
    }

    std::map<AccountId, std::size_t> index_of;
    for (std::size_t a = 0; a < accounts.size(); ++a) index_of[accounts[a].id] = a;

    for (std::size_t i = 0; i < out.corpus.tweets.size(); ++i) {
        const auto& tweet = out.corpus.tweets[i];
        std::size_t author = index_of.at(tweet.author);
        std::size_t home = accounts[author].home;
        auto engager = [&]() {
            std::size_t c = home;
            if (spec.communities > 1 && rng.bernoulli(0.1)) {
                c = (home + 1 + rng.uniform_index(spec.communities - 1)) % spec.communities;
            }
            return pick(rng, members[c]);
        };
        auto when = [&]() { return tweet.created_at + std::chrono::seconds{1 + rng.uniform_index(86400)}; };
        std::size_t likes = rng.uniform_index(5);
        for (std::size_t k = 0; k < likes; ++k) emit(InteractionKind::Like, engager(), author, &tweet.tweet_id, when());
        std::size_t retweets = rng.uniform_index(3);
        for (std::size_t k = 0; k < retweets; ++k)
            emit(InteractionKind::Retweet, engager(), author, &tweet.tweet_id, when());
        for (std::size_t b : bridges) {
            if (accounts[b].home != home && accounts[b].second != home) continue;
            if (rng.bernoulli(positive[i] ? 0.3 : 0.08))
                emit(InteractionKind::Retweet, b, author, &tweet.tweet_id, when());
        }
    }
    return out;
}

}  // namespace chesty
