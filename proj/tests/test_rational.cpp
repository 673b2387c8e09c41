#include "doctest.h"

#include "dmlab/errors.hpp"
#include "dmlab/rational.hpp"

using namespace dmlab;

TEST_CASE("factorial and binomial") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(10) == 3628800);
    CHECK(factorial(25) == BigInt("15511210043330985984000000"));
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(4, 0) == 1);
    CHECK(binomial(3, 5) == 0);
}

TEST_CASE("rational power") {
    CHECK(pow(make_rational(2, 3), 3) == make_rational(8, 27));
    CHECK(pow(make_rational(-1, 2), 0) == 1);
}

TEST_CASE("parse and print") {
    CHECK(parse_rational("3/2") == make_rational(3, 2));
    CHECK(parse_rational("2") == 2);
    CHECK(parse_rational("0.9") == make_rational(9, 10));
    CHECK(parse_rational("-0.25") == make_rational(-1, 4));
    CHECK(rational_text(make_rational(281, 4536)) == "281/4536");
    CHECK(rational_text(make_rational(4, 2)) == "2");
    CHECK(format_rational(make_rational(2, 3)).starts_with("2/3 (0.6666666667"));
    CHECK_THROWS(parse_rational("abc"));
    CHECK_THROWS(parse_rational("1/0"));
}
