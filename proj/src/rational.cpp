#include "dmlab/rational.hpp"

#include "dmlab/errors.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace dmlab {

BigInt factorial(unsigned n) {
    BigInt f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

Rational pow(const Rational& base, unsigned exponent) {
    Rational r = 1;
    for (unsigned i = 0; i < exponent; ++i) r *= base;
    return r;
}

std::string rational_text(const Rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << '/' << denominator(q);
    return os.str();
}

std::string format_rational(const Rational& q, int digits) {
    std::ostringstream os;
    os << rational_text(q);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, to_double(q));
    os << " (" << buf << ')';
    return os.str();
}

Rational parse_rational(const std::string& text) {
    auto bad = [&] { return ValidationError("cannot parse rational '" + text + "'"); };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    auto parse_int = [&](const std::string& s) {
        if (s.empty()) throw bad();
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw bad();
        for (std::size_t j = i; j < s.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw bad();
        return BigInt(s[0] == '+' ? s.substr(1) : s);
    };
    if (slash != std::string::npos) {
        const BigInt den = parse_int(text.substr(slash + 1));
        if (den == 0) throw bad();
        return Rational(parse_int(text.substr(0, slash)), den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(parse_int(text));
    const std::string frac = text.substr(dot + 1);
    std::string whole = text.substr(0, dot);
    const bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const BigInt w = parse_int(whole);
    const BigInt f = frac.empty() ? BigInt(0) : parse_int(frac);
    if (!frac.empty() && (frac[0] == '-' || frac[0] == '+')) throw bad();
    BigInt num = (negative ? -w : w) * scale + f;
    if (negative) num = -num;
    return Rational(num, scale);
}

}  // namespace dmlab
