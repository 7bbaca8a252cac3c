#include <doctest.h>

#include <cmath>
#include <set>

#include "chesty/util.hpp"

using namespace chesty;

TEST_CASE("RFC 3339 round trip") {
    auto t = parse_rfc3339("2022-10-01T08:30:00Z");
    CHECK(t == make_timestamp(2022, 10, 1, 8, 30, 0));
    CHECK(format_rfc3339(t) == "2022-10-01T08:30:00Z");
    CHECK(parse_rfc3339("2022-10-01T10:30:00.75+02:00") == t);
    CHECK_THROWS_AS(parse_rfc3339("2022-13-01T00:00:00Z"), FormatError);
    CHECK_THROWS_AS(parse_rfc3339("yesterday"), FormatError);
}

TEST_CASE("sha256 known answers") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("format_double is shortest round trip") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("utf8_length counts scalar values") {
    CHECK(utf8_length("abc") == 3);
    CHECK(utf8_length("\xD0\x9D\xD0\x90\xD0\xA2\xD0\x9E") == 4);
    CHECK(utf8_length("\xF0\x9F\x98\x80") == 1);
    CHECK_THROWS_AS(utf8_length("\xC3"), FormatError);
    CHECK_THROWS_AS(utf8_length("\xFF\xFE"), FormatError);
}

TEST_CASE("Rng is reproducible and uniform_index stays in range") {
    Rng a(7), b(7), c(8);
    std::vector<std::uint64_t> xa, xb, xc;
    for (int i = 0; i < 16; ++i) {
        xa.push_back(a.next());
        xb.push_back(b.next());
        xc.push_back(c.next());
    }
    CHECK(xa == xb);
    CHECK(xa != xc);

    Rng r(1);
    std::vector<int> hist(6, 0);
    for (int i = 0; i < 60000; ++i) ++hist[static_cast<std::size_t>(r.uniform_index(6))];
    for (int h : hist) CHECK(std::abs(h - 10000) < 500);
    CHECK_THROWS_AS(r.uniform_index(0), InvalidInput);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform_real();
        CHECK((u >= 0.0 && u < 1.0));
    }
}

TEST_CASE("file helpers") {
    auto path = std::filesystem::temp_directory_path() / "chesty_util_lines.txt";
    write_file(path, "a\nb\r\n\nc");
    auto lines = read_lines(path);
    REQUIRE(lines.size() == 4);
    CHECK(lines[1] == "b");
    CHECK(lines[3] == "c");
    CHECK(sha256_file_hex(path) == sha256_hex("a\nb\r\n\nc"));
    CHECK_THROWS_AS(read_file(path.string() + ".missing"), IoError);
}
