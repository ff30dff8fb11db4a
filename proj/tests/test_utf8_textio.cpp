#include <doctest.h>

#include <limits>
#include <sstream>

#include "cflex/textio.hpp"
#include "cflex/utf8.hpp"

using namespace cflex;

TEST_CASE("utf8 decode and encode") {
    const std::string text = "子曰a𠀀";
    const auto cps = utf8_decode(text);
    REQUIRE(cps.size() == 4);
    CHECK(cps[0] == U'子');
    CHECK(cps[2] == U'a');
    CHECK(cps[3] == U'\U00020000');
    CHECK(utf8_encode(cps) == text);
}

TEST_CASE("utf8 rejects malformed input") {
    CHECK_THROWS_AS(utf8_decode("\xC0\xAF"), Utf8Error);          // overlong
    CHECK_THROWS_AS(utf8_decode("\xED\xA0\x80"), Utf8Error);      // surrogate
    CHECK_THROWS_AS(utf8_decode("\xE5\xAD"), Utf8Error);          // truncated
    CHECK_THROWS_AS(utf8_decode("\x80"), Utf8Error);              // stray continuation
    CHECK_FALSE(try_utf8_decode("\xFF").has_value());
    CHECK(is_valid_utf8("子"));
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::numeric_limits<double>::denorm_min()}) {
        CHECK(parse_double(format_double(v), "t") == v);
    }
    CHECK_THROWS(parse_double("1.0x", "t"));
    CHECK_THROWS(parse_double("", "t"));
}

TEST_CASE("csv splitting") {
    const auto f = split_csv_line("a,\"b,c\",\"say \"\"hi\"\"\",", ',');
    REQUIRE(f.size() == 4);
    CHECK(f[1] == "b,c");
    CHECK(f[2] == "say \"hi\"");
    CHECK(f[3].empty());
    CHECK(csv_escape("x,y") == "\"x,y\"");
    CHECK(split_csv_line(csv_escape("q\"uote"), ',')[0] == "q\"uote");
    CHECK_THROWS(split_csv_line("\"open", ','));
}
