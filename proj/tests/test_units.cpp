#include "doctest.h"

#include "asgem/error.hpp"
#include "asgem/units.hpp"

#include <clocale>
#include <cmath>
#include <limits>

using namespace asgem;

TEST_CASE("frequencies are angular after ingest")
{
    CHECK(parse_quantity("50 MHz", Quantity::angular_frequency) == doctest::Approx(kTwoPi * 50e6));
    CHECK(parse_quantity("50MHz", Quantity::angular_frequency) == doctest::Approx(kTwoPi * 50e6));
    CHECK(parse_quantity("1 kHz", Quantity::angular_frequency) == doctest::Approx(kTwoPi * 1e3));
    CHECK(parse_quantity("377.107463380 THz", Quantity::angular_frequency) ==
          doctest::Approx(kTwoPi * 377.107463380e12));
    CHECK(parse_quantity("12 rad/s", Quantity::angular_frequency) == 12.0);
    CHECK(parse_quantity("12", Quantity::angular_frequency) == 12.0);
}

TEST_CASE("lengths, dipoles and intensities")
{
    CHECK(parse_quantity("1064nm", Quantity::length) == 1064e-9);
    CHECK(parse_quantity("800nm", Quantity::length) == 800e-9);
    CHECK(parse_quantity("1.064 um", Quantity::length) == doctest::Approx(1064e-9));
    CHECK(parse_quantity("2.5377e-29 C·m", Quantity::dipole) == 2.5377e-29);
    CHECK(parse_quantity("5e13", Quantity::intensity) == 5e13);
    CHECK(parse_quantity("5e9 W/cm^2", Quantity::intensity) == doctest::Approx(5e13));
}

TEST_CASE("wrong or unknown units are rejected")
{
    CHECK_THROWS_AS(parse_quantity("5 MHz", Quantity::length), ParseError);
    CHECK_THROWS_AS(parse_quantity("5 furlongs", Quantity::length), ParseError);
    CHECK_THROWS_AS(parse_quantity("abc", Quantity::length), ParseError);
    CHECK_THROWS_AS(parse_number("1,5"), ParseError);
    CHECK_THROWS_AS(parse_number(""), ParseError);
}

TEST_CASE("key value text")
{
    const auto kv = parse_key_value_text("# header\n\na = 1 MHz  # trailing\n  b=2\n");
    REQUIRE(kv.size() == 2);
    CHECK(kv.at("a").value == "1 MHz");
    CHECK(kv.at("a").line == 3);
    CHECK(kv.at("b").line == 4);

    try {
        parse_key_value_text("a = 1\n\nno equals sign\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    try {
        parse_key_value_text("a = 1\na = 2\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("formatting is locale independent and round trips")
{
    std::setlocale(LC_ALL, "de_DE.UTF-8");
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5377e-29, 1e-300}) {
        const auto s = format_double(v);
        CHECK(s.find(',') == std::string::npos);
        CHECK(parse_number(s) == v);
    }
    std::setlocale(LC_ALL, "C");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}
