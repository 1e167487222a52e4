#include "ffnet/errors.hpp"
#include "ffnet/rational.hpp"

#include <doctest.h>

using namespace ffnet;

TEST_SUITE("rational") {

TEST_CASE("parse and print") {
    CHECK(to_string(parse_rational("3/2")) == "3/2");
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK(to_string(parse_rational("-2/6")) == "-1/3");
    CHECK(to_string(parse_rational("+7")) == "7");
    CHECK(to_string(parse_rational("10/5")) == "2");
    CHECK_THROWS_AS(parse_rational(" 1/3"), ParseError);
}

TEST_CASE("malformed input is rejected") {
    for (const char* bad : {"", "1/", "/2", "1/0", "a", "1.5", "1//2", "1/2/3", "--1"})
        CHECK_THROWS_AS(parse_rational(bad), ParseError);
}

TEST_CASE("helpers") {
    const RationalVector v{Rational(1, 2), Rational(1, 3), Rational(1, 6)};
    CHECK(sum(v) == 1);
    CHECK(dot(v, v) == Rational(7, 18));
    CHECK_THROWS_AS(dot(v, RationalVector{1}), ContractViolation);
    CHECK(to_strings(v) == std::vector<std::string>{"1/2", "1/3", "1/6"});
    CHECK(to_doubles(v)[0] == 0.5);
    CHECK(is_zero(RationalVector(3, Rational(0))));
    CHECK_FALSE(is_zero(v));
}

}
