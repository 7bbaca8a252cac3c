#include "chesty/util.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chesty {

namespace {

int parse_digits(std::string_view text, std::size_t pos, std::size_t count) {
    if (pos + count > text.size()) throw FormatError("truncated timestamp: " + std::string(text));
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') throw FormatError("bad timestamp digit: " + std::string(text));
        value = value * 10 + (c - '0');
    }
    return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
    if (pos >= text.size() || (text[pos] != c && !(c == 'T' && (text[pos] == 't' || text[pos] == ' '))))
        throw FormatError("malformed timestamp: " + std::string(text));
}

std::string hex_encode(const unsigned char* bytes, std::size_t n) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(2 * n, '0');
    for (std::size_t i = 0; i < n; ++i) {
        out[2 * i] = digits[bytes[i] >> 4];
        out[2 * i + 1] = digits[bytes[i] & 0xF];
    }
    return out;
}

}  // namespace

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour, int minute, int second) {
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok()) throw FormatError("invalid calendar date");
    return sys_days{ymd} + hours{hour} + minutes{minute} + seconds{second};
}

Timestamp parse_rfc3339(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)
    int year = parse_digits(text, 0, 4);
    expect_char(text, 4, '-');
    int month = parse_digits(text, 5, 2);
    expect_char(text, 7, '-');
    int day = parse_digits(text, 8, 2);
    expect_char(text, 10, 'T');
    int hour = parse_digits(text, 11, 2);
    expect_char(text, 13, ':');
    int minute = parse_digits(text, 14, 2);
    expect_char(text, 16, ':');
    int second = parse_digits(text, 17, 2);
    if (month < 1 || month > 12 || hour > 23 || minute > 59 || second > 60)
        throw FormatError("timestamp field out of range: " + std::string(text));
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) throw FormatError("empty fractional seconds: " + std::string(text));
    }
    if (pos >= text.size()) throw FormatError("timestamp missing offset: " + std::string(text));
    int offset_minutes = 0;
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        int sign = text[pos] == '-' ? -1 : 1;
        int oh = parse_digits(text, pos + 1, 2);
        expect_char(text, pos + 3, ':');
        int om = parse_digits(text, pos + 4, 2);
        if (oh > 23 || om > 59) throw FormatError("offset out of range: " + std::string(text));
        offset_minutes = sign * (oh * 60 + om);
        pos += 6;
    } else {
        throw FormatError("malformed timestamp offset: " + std::string(text));
    }
    if (pos != text.size()) throw FormatError("trailing characters in timestamp: " + std::string(text));
    if (second == 60) second = 59;
    Timestamp local = make_timestamp(year, static_cast<unsigned>(month), static_cast<unsigned>(day),
                                     hour, minute, second);
    return local - std::chrono::minutes{offset_minutes};
}

std::string format_rfc3339(Timestamp t) {
    using namespace std::chrono;
    auto day_point = floor<days>(t);
    year_month_day ymd{day_point};
    hh_mm_ss hms{t - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 digest failed");
    return hex_encode(digest.data(), len);
}

std::string sha256_file_hex(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw Error("number formatting failed");
    return std::string(buf, end);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < text.size();) {
        auto lead = static_cast<unsigned char>(text[i]);
        std::size_t width = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3 : (lead >> 3) == 0x1E ? 4 : 0;
        if (width == 0 || i + width > text.size()) throw FormatError("invalid UTF-8");
        for (std::size_t k = 1; k < width; ++k) {
            if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) throw FormatError("invalid UTF-8");
        }
        i += width;
        ++count;
    }
    return count;
}

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
    if (bound == 0) throw InvalidInput("uniform_index bound must be positive");
    // Rejection sampling keeps every residue equally likely.
    const std::uint64_t excess = (UINT64_MAX % bound + 1) % bound;
    std::uint64_t draw;
    do {
        draw = engine_();
    } while (draw > UINT64_MAX - excess);
    return draw % bound;
}

}  // namespace chesty
