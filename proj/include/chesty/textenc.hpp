#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chesty/corpus.hpp"

namespace chesty {

using TokenIndex = std::int32_t;

inline constexpr std::string_view kUrlToken = "<url>";
inline constexpr std::string_view kMentionToken = "<mention>";

/// Lowercases, then splits on whitespace and punctuation. URLs become <url>,
/// @handles become <mention>, and #tags keep the bare word.
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
  public:
    static constexpr TokenIndex kPad = 0;
    static constexpr TokenIndex kOov = 1;
    static constexpr std::size_t kDefaultSize = 1536;
    static constexpr std::string_view kPadToken = "<pad>";
    static constexpr std::string_view kOovToken = "<oov>";

    /// Holds only PAD and OOV; the index space is still `size` wide.
    explicit Vocabulary(std::size_t size = kDefaultSize);

    /// Appends `token` at the next free index.
    TokenIndex add(const std::string& token);

    /// Capacity of the index space (the embedding's input_dim).
    std::size_t size() const { return size_; }
    /// Indices actually assigned, PAD and OOV included.
    std::size_t token_count() const { return tokens_.size(); }
    TokenIndex index_of(std::string_view token) const;
    bool contains(std::string_view token) const;
    const std::string& token_at(TokenIndex index) const { return tokens_.at(static_cast<std::size_t>(index)); }

    /// "index token" lines, indices ascending.
    std::string to_text() const;
    static Vocabulary from_text(std::string_view text, std::size_t size = kDefaultSize);
    std::string digest() const;

  private:
    std::size_t size_;
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenIndex> index_;
};

/// The (size - 2) most frequent tokens take indices 2.., ties broken
/// lexicographically. Throws InvalidInput when no token is found.
Vocabulary build_vocab(std::span<const std::string> texts, std::size_t size = Vocabulary::kDefaultSize);
Vocabulary build_vocab(const Corpus& corpus, std::size_t size = Vocabulary::kDefaultSize);

inline constexpr std::size_t kDefaultInputLength = 64;

/// Exactly `input_length` indices: right-truncated, right-padded with PAD.
std::vector<TokenIndex> encode(std::string_view text, const Vocabulary& vocab,
                               std::size_t input_length = kDefaultInputLength);

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path, std::size_t size = Vocabulary::kDefaultSize);

}  // namespace chesty
