#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "chesty/corpus.hpp"
#include "chesty/stratagem.hpp"

namespace chesty {

/// Theme vocabularies for synthetic generation: one lexicon per stratagem
/// plus neutral filler.
struct Lexicons {
    std::array<std::vector<std::string>, 4> themes;
    std::vector<std::string> neutral;

    const std::vector<std::string>& theme(Stratagem s) const { return themes[static_cast<int>(s)]; }
};

std::filesystem::path default_lexicon_dir();
/// Reads inform.txt, invoke.txt, deflect.txt, recast.txt and neutral.txt
/// ('#' lines are comments).
Lexicons load_lexicons(const std::filesystem::path& dir = default_lexicon_dir());

struct SyntheticSpec {
    std::size_t n_tweets = 882;
    std::size_t n_positive = 62;
    Lexicons themes;
    std::uint64_t seed = 1;

    std::string salt = "chesty-synthetic";
    std::size_t communities = 4;
    std::size_t accounts_per_community = 24;
    std::size_t bridge_accounts = 3;
    // Probability that a negative tweet carries one stray theme word.
    double negative_theme_noise = 0.15;
    Timestamp start = make_timestamp(2022, 10, 1);
    Timestamp end = make_timestamp(2022, 11, 8, 23, 59, 59);
};

struct SyntheticCorpus {
    Corpus corpus;
    // Every tweet's label; exactly n_positive of them are propaganda.
    std::map<std::string, StratagemLabel> truth;
    // Raw (pre-anonymization) handle of each generated account, for fixtures.
    std::map<AccountId, std::string> raw_handles;
};

/// Deterministic per seed. Exactly n_positive tweets carry at least one
/// stratagem; each positive embeds 4-8 theme tokens from the lexicons of its
/// stratagems.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

}  // namespace chesty
