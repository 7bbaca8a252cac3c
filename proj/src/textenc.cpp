#include "chesty/textenc.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace chesty {

namespace {

// Malformed bytes decode to U+FFFD so tokenization never throws.
std::vector<char32_t> decode_utf8(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        auto lead = static_cast<unsigned char>(text[i]);
        std::size_t width = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3 : (lead >> 3) == 0x1E ? 4 : 0;
        if (width == 0 || i + width > text.size()) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        char32_t cp = width == 1 ? lead : width == 2 ? (lead & 0x1F) : width == 3 ? (lead & 0x0F) : (lead & 0x07);
        bool ok = true;
        for (std::size_t k = 1; k < width; ++k) {
            auto b = static_cast<unsigned char>(text[i + k]);
            if ((b & 0xC0) != 0x80) ok = false;
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!ok) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += width;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

// Simple case mapping for Latin, Greek and Cyrillic.
char32_t to_lower(char32_t c) {
    if (c >= U'A' && c <= U'Z') return c + 32;
    if ((c >= 0xC0 && c <= 0xDE && c != 0xD7)) return c + 32;
    if (c >= 0x100 && c <= 0x17F && c != 0x130 && c != 0x138 && c != 0x149 && c != 0x178) {
        bool odd_upper = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
        if (odd_upper) return (c % 2 == 1) ? c + 1 : c;
        return (c % 2 == 0) ? c + 1 : c;
    }
    if (c == 0x178) return 0xFF;
    if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;
    if (c >= 0x410 && c <= 0x42F) return c + 32;
    if (c >= 0x400 && c <= 0x40F) return c + 80;
    return c;
}

bool is_space(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' || c == U'\f' || c == 0x85 ||
           c == 0xA0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 ||
           c == 0x202F || c == 0x205F || c == 0x3000;
}

bool is_word_char(char32_t c) {
    if (c < 0x80) return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
    if (c <= 0xBF || c == 0xD7 || c == 0xF7) return false;           // Latin-1 symbols
    if (c >= 0x2000 && c <= 0x2BFF) return false;                    // punctuation, arrows, symbols
    if (c >= 0x3000 && c <= 0x303F) return false;                    // CJK punctuation
    if (c >= 0xFE30 && c <= 0xFE4F) return false;
    if ((c >= 0xFF00 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20)) return false;
    if (c >= 0x1F000) return false;                                  // emoji and pictographs
    if (c == 0xFFFD || (c >= 0xFE00 && c <= 0xFE0F)) return false;
    return true;
}

bool starts_with(const std::vector<char32_t>& s, std::size_t from, std::u32string_view prefix) {
    if (s.size() - from < prefix.size()) return false;
    return std::equal(prefix.begin(), prefix.end(), s.begin() + static_cast<std::ptrdiff_t>(from));
}

void split_words(const std::vector<char32_t>& chunk, std::size_t from, std::vector<std::string>& out) {
    std::string current;
    for (std::size_t i = from; i < chunk.size(); ++i) {
        if (is_word_char(chunk[i])) {
            append_utf8(current, chunk[i]);
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
}

void tokenize_chunk(std::vector<char32_t>& chunk, std::vector<std::string>& out) {
    for (auto& c : chunk) c = to_lower(c);
    if (starts_with(chunk, 0, U"http://") || starts_with(chunk, 0, U"https://") || starts_with(chunk, 0, U"www.")) {
        out.emplace_back(kUrlToken);
        return;
    }
    std::size_t from = 0;
    if (chunk.size() > 1 && chunk[0] == U'@' && (is_word_char(chunk[1]) || chunk[1] == U'_')) {
        out.emplace_back(kMentionToken);
        from = 1;
        while (from < chunk.size() && chunk[from] < 0x80 && (is_word_char(chunk[from]) || chunk[from] == U'_')) ++from;
    }
    split_words(chunk, from, out);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::vector<char32_t> chunk;
    for (char32_t c : decode_utf8(text)) {
        if (is_space(c)) {
            if (!chunk.empty()) tokenize_chunk(chunk, out);
            chunk.clear();
        } else {
            chunk.push_back(c);
        }
    }
    if (!chunk.empty()) tokenize_chunk(chunk, out);
    return out;
}

Vocabulary::Vocabulary(std::size_t size) : size_(size) {
    if (size < 2) throw InvalidInput("vocabulary size must leave room for PAD and OOV");
    add(std::string(kPadToken));
    add(std::string(kOovToken));
}

TokenIndex Vocabulary::add(const std::string& token) {
    if (tokens_.size() >= size_) throw InvalidInput("vocabulary is full");
    if (token.empty() || token.find_first_of(" \t\r\n") != std::string::npos)
        throw InvalidInput("vocabulary tokens must be non-empty and whitespace free");
    auto [it, inserted] = index_.emplace(token, static_cast<TokenIndex>(tokens_.size()));
    if (!inserted) throw InvalidInput("duplicate vocabulary token: " + token);
    tokens_.push_back(token);
    return it->second;
}

TokenIndex Vocabulary::index_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    return it == index_.end() ? kOov : it->second;
}

bool Vocabulary::contains(std::string_view token) const { return index_.count(std::string(token)) != 0; }

std::string Vocabulary::to_text() const {
    std::string out;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        out += std::to_string(i);
        out += ' ';
        out += tokens_[i];
        out += '\n';
    }
    return out;
}

Vocabulary Vocabulary::from_text(std::string_view text, std::size_t size) {
    Vocabulary vocab(size);
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t expected = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto space = line.find(' ');
        if (space == std::string::npos) throw FormatError("vocabulary line lacks a token: " + line);
        std::size_t idx = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + space, idx);
        if (ec != std::errc{} || ptr != line.data() + space) throw FormatError("bad vocabulary index: " + line);
        std::string token = line.substr(space + 1);
        if (idx != expected) throw FormatError("vocabulary indices must be dense and ascending");
        if (idx == 0 && token != kPadToken) throw FormatError("index 0 must be PAD");
        if (idx == 1 && token != kOovToken) throw FormatError("index 1 must be OOV");
        if (idx >= 2) vocab.add(token);
        ++expected;
    }
    if (expected < 2) throw FormatError("vocabulary file lacks PAD/OOV entries");
    return vocab;
}

std::string Vocabulary::digest() const { return sha256_hex(to_text()); }

Vocabulary build_vocab(std::span<const std::string> texts, std::size_t size) {
    std::map<std::string, std::size_t> counts;
    for (const auto& text : texts) {
        for (auto& token : tokenize(text)) ++counts[std::move(token)];
    }
    if (counts.empty()) throw InvalidInput("cannot build a vocabulary from a corpus without tokens");
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    // `counts` is already lexicographic, so a stable sort on frequency keeps ties ordered.
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    Vocabulary vocab(size);
    for (const auto& [token, n] : ranked) {
        if (vocab.token_count() >= size) break;
        vocab.add(token);
    }
    return vocab;
}

Vocabulary build_vocab(const Corpus& corpus, std::size_t size) {
    std::vector<std::string> texts;
    texts.reserve(corpus.tweets.size());
    for (const auto& t : corpus.tweets) texts.push_back(t.text);
    return build_vocab(texts, size);
}

std::vector<TokenIndex> encode(std::string_view text, const Vocabulary& vocab, std::size_t input_length) {
    std::vector<TokenIndex> out(input_length, Vocabulary::kPad);
    auto tokens = tokenize(text);
    for (std::size_t i = 0; i < std::min(tokens.size(), input_length); ++i) out[i] = vocab.index_of(tokens[i]);
    return out;
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) { write_file(path, vocab.to_text()); }

Vocabulary load_vocabulary(const std::filesystem::path& path, std::size_t size) {
    return Vocabulary::from_text(read_file(path), size);
}

}  // namespace chesty
