#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chesty {

// Error hierarchy shared by every module. The CLI maps InvalidInput/ConfigError
// to usage failures and everything else to data failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidInput : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct FormatError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct NotFound : Error {
    using Error::Error;
};

using Timestamp = std::chrono::sys_seconds;

/// Parses an RFC 3339 date-time ("2022-10-01T08:30:00Z", optional fraction
/// and numeric offset). Fractional seconds are truncated.
Timestamp parse_rfc3339(std::string_view text);
std::string format_rfc3339(Timestamp t);
Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                         int second = 0);

std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::filesystem::path& path);

// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Counts Unicode scalar values in a UTF-8 string; throws FormatError on
/// malformed sequences.
std::size_t utf8_length(std::string_view text);

/// Seeded generator whose draws are identical on every platform (the
/// standard distributions are implementation-defined, mt19937_64 is not).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [0, bound).
    std::uint64_t uniform_index(std::uint64_t bound);
    /// Uniform real in [0, 1).
    double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }
    bool bernoulli(double p) { return uniform_real() < p; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[uniform_index(i)]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace chesty
