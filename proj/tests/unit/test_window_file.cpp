#include <doctest.h>

#include "blockshift/arithmetic.hpp"
#include "blockshift/errors.hpp"
#include "blockshift/window_file.hpp"

using namespace blockshift;

namespace {

WindowFile depth1_file() {
    const Alphabet a("01");
    const auto s = build_schedule(a, SparseSetSpec::squares(), 1, {}, Profile::faithful);
    const auto u = mu_indicator_target(std::make_shared<const MobiusTable>(3), a);
    return make_window_file(s, 1, "mu-indicator", {}, realize(u, s, 1));
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("depth-1 round trip") {
    const WindowFile f = depth1_file();
    const std::string text = serialize_window(f);
    CHECK(text.starts_with("BLOCKSHIFT/1\nalphabet=01\nprofile=faithful\n"));
    CHECK(text.find("payload\n000000101100101\nchecksum=") != std::string::npos);
    const WindowFile back = parse_window(text);
    CHECK(back.window == f.window);
    CHECK(back.header == f.header);
    CHECK(serialize_window(back) == text);

    save_window("depth1.bsw", f);
    CHECK(serialize_window(load_window("depth1.bsw")) == text);
}

TEST_CASE("long payloads wrap every 65536 cells") {
    const Alphabet a("01");
    std::vector<Symbol> cells(65536 * 2 + 5, 0);
    cells[65536] = 1;
    cells.back() = kStar;
    WindowFile f;
    f.header = {{"alphabet", "01"}, {"offset", "-3"}, {"length", std::to_string(cells.size())}};
    f.window = PartialWindow(-3, cells);
    const std::string text = serialize_window(f);
    const WindowFile back = parse_window(text);
    CHECK(back.window == f.window);
    CHECK(serialize_window(back) == text);
    CHECK(text.find(std::string(65536, '0') + "\n1") != std::string::npos);
}

TEST_CASE("load errors are distinct") {
    const std::string text = serialize_window(depth1_file());
    CHECK_THROWS_AS(parse_window(replace_once(text, "BLOCKSHIFT/1", "BLOCKSHIFT/2")), VersionError);
    CHECK_THROWS_AS(parse_window(replace_once(text, "length=15", "length=16")), InconsistencyError);
    CHECK_THROWS_AS(parse_window(replace_once(text, "000000101100101", "000000101100111")), ChecksumError);
    CHECK_THROWS_AS(parse_window(replace_once(text, "alphabet=01", "alphabet=0+")), InconsistencyError);
    CHECK_THROWS_AS(parse_window("hello\n"), FormatError);
    CHECK_THROWS_AS(parse_window(text.substr(0, text.size() - 1)), FormatError);
    CHECK_THROWS_AS(parse_window(replace_once(text, "payload\n", "")), FormatError);

    // the checksum is checked before the alphabet, so an out-of-alphabet edit is still a checksum error
    CHECK_THROWS_AS(parse_window(replace_once(text, "000000101100101", "00000010110010x")), ChecksumError);
}

TEST_CASE("intervals") {
    CHECK(parse_interval("1:1000") == Interval{1, 1000});
    CHECK(parse_interval("-5:-2") == Interval{-5, -2});
    CHECK(parse_interval("none").empty());
    CHECK(format_interval({-5, 2}) == "-5:2");
    CHECK_THROWS_AS(parse_interval("5:1"), InvalidParameter);
    CHECK_THROWS_AS(parse_interval("5"), InvalidParameter);
    CHECK_THROWS_AS(parse_interval("1:2x"), InvalidParameter);
}
