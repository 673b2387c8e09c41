#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace dmlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    return Rational(BigInt(num), BigInt(den));
}

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);
Rational pow(const Rational& base, unsigned exponent);

// "p/q", or "p" for integers
std::string rational_text(const Rational& q);

// "p/q (decimal)" with the decimal rounded to `digits` significant places.
std::string format_rational(const Rational& q, int digits = 10);

// Parses "p/q", an integer, or a terminating decimal such as "1.5".
Rational parse_rational(const std::string& text);

}  // namespace dmlab
