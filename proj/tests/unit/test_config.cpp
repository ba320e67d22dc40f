#include <doctest.h>

#include <string>

#include "irds/config.hpp"
#include "irds/errors.hpp"
#include "support.hpp"

using namespace irds;

namespace {

std::string table1_text() { return format_savanna_params(test::table(1)); }

std::string without_key(const std::string& text, const std::string& key) {
    std::string out;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto nl = text.find('\n', start);
        const std::string line = text.substr(start, nl - start);
        if (line.rfind(key + " ", 0) != 0) out += line + "\n";
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    return out;
}

}  // namespace

TEST_CASE("shipped configs load and validate") {
    CHECK_NOTHROW(test::table(1).validate());
    CHECK_NOTHROW(test::table(2).validate());
    CHECK(test::table(1).W == 1200.0);
    CHECK(test::table(2).W == 450.0);
}

TEST_CASE("format then parse round-trips exactly") {
    for (int which : {1, 2}) {
        const auto p = test::table(which);
        const auto q = savanna_params_from(KeyValueFile::parse(format_savanna_params(p)));
        CHECK(format_savanna_params(q) == format_savanna_params(p));
        CHECK(q.alpha_G == p.alpha_G);
        CHECK(q.diff_T == p.diff_T);
    }
}

TEST_CASE("comments, blank lines and whitespace are ignored") {
    const auto f = KeyValueFile::parse("# header\n\n  a = 1.5  # trailing\nb=2\n");
    CHECK(f.number("a") == 1.5);
    CHECK(f.number("b") == 2.0);
    CHECK(f.entries().size() == 2);
}

TEST_CASE("missing key is named") {
    const auto text = without_key(table1_text(), "eta_TG");
    CHECK_THROWS_WITH_AS(savanna_params_from(KeyValueFile::parse(text)), doctest::Contains("eta_TG"), ConfigError);
}

TEST_CASE("unknown, duplicate and malformed entries are rejected") {
    CHECK_THROWS_WITH_AS(savanna_params_from(KeyValueFile::parse(table1_text() + "bogus = 1\n")),
                         doctest::Contains("bogus"), ConfigError);
    CHECK_THROWS_WITH_AS(KeyValueFile::parse("a = 1\na = 2\n"), doctest::Contains("duplicate"), ConfigError);
    CHECK_THROWS_AS(KeyValueFile::parse("just a line\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueFile::parse("a = \n"), ConfigError);
    CHECK_THROWS_WITH_AS(KeyValueFile::parse("a = abc\n").number("a"), doctest::Contains("non-numeric"), ConfigError);
    CHECK_THROWS_AS(KeyValueFile::parse("a = 1.5x\n").number("a"), ConfigError);
}

TEST_CASE("invalid values fail validation on load") {
    std::string text = without_key(table1_text(), "eta") + "eta = 1.2\n";
    CHECK_THROWS_AS(savanna_params_from(KeyValueFile::parse(text)), ConfigError);
}

TEST_CASE("missing file") { CHECK_THROWS_AS(load_savanna_params("/nonexistent/none.cfg"), ConfigError); }
