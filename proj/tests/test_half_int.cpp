#include "doctest.h"

#include "asgem/error.hpp"
#include "asgem/half_int.hpp"

#include <unordered_set>

using namespace asgem;
using namespace asgem::literals;

TEST_CASE("parse accepts integers and halves")
{
    CHECK(HalfInt::parse("3/2").twice() == 3);
    CHECK(HalfInt::parse("-1/2").twice() == -1);
    CHECK(HalfInt::parse("2").twice() == 4);
    CHECK(HalfInt::parse("+1").twice() == 2);
    CHECK(HalfInt::parse(" 0 ").twice() == 0);
}

TEST_CASE("parse rejects junk")
{
    for (const char* bad : {"", "x", "1/3", "4/2", "3/", "/2", "1.5", "1/2/2", "--1"})
        CHECK_THROWS_AS(HalfInt::parse(bad), ParseError);
}

TEST_CASE("str round trips")
{
    for (int t = -9; t <= 9; ++t) {
        const auto h = HalfInt::from_twice(t);
        CHECK(HalfInt::parse(h.str()) == h);
    }
    CHECK(HalfInt::from_twice(3).str() == "3/2");
    CHECK(HalfInt::from_twice(-4).str() == "-2");
}

TEST_CASE("arithmetic and literals")
{
    CHECK(3_half + 1_half == 2_j);
    CHECK(1_j - 3_half == -1_half);
    CHECK((3_half).value() == 1.5);
    CHECK((3_half).multiplicity() == 4);
    CHECK(1_half < 1_j);
    CHECK_FALSE((1_half).is_integer());
}

TEST_CASE("projection and triangle rules")
{
    CHECK(is_valid_projection(3_half, -1_half));
    CHECK_FALSE(is_valid_projection(3_half, 0_j));
    CHECK_FALSE(is_valid_projection(1_j, 2_j));
    CHECK(satisfies_triangle(1_j, 1_j, 2_j));
    CHECK(satisfies_triangle(1_half, 1_half, 0_j));
    CHECK_FALSE(satisfies_triangle(1_j, 1_j, 3_j));
    CHECK_FALSE(satisfies_triangle(1_half, 1_j, 1_j));
}

TEST_CASE("hash distinguishes values")
{
    std::unordered_set<HalfInt> s;
    for (int t = -6; t <= 6; ++t)
        s.insert(HalfInt::from_twice(t));
    CHECK(s.size() == 13);
}
