#include "dmlab/closed_forms.hpp"

#include "dmlab/errors.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace dmlab {

namespace {

void require_alpha(const Rational& alpha) {
    if (alpha < 1) throw ValidationError("alpha must be at least 1");
}

}  // namespace

Rational exact_pseudo_moment(unsigned k, const Rational& alpha) {
    if (k > 64) throw ValidationError("exact_pseudo_moment supports k <= 64");
    require_alpha(alpha);
    Rational sum = 0;
    const Rational step = Rational(-1) / alpha;
    Rational power = 1;
    for (unsigned i = 0; i <= k; ++i) {
        sum += Rational(binomial(k, i)) * power / Rational(factorial(k + i + 1));
        power *= step;
    }
    return pow(Rational(2) / alpha, k) * sum;
}

Rational lambda2_even_moment(unsigned k, const Rational& alpha) {
    if (k == 0) throw ValidationError("lambda2_even_moment needs k >= 1");
    const Rational m = exact_pseudo_moment(2 * k, alpha);
    return (k % 2 == 0) ? m : Rational(-m);
}

Rational mean_square_polynomial(const Rational& alpha) {
    require_alpha(alpha);
    const Rational a2 = alpha * alpha;
    return Rational(4, 3) / a2 - Rational(1) / (a2 * alpha) + Rational(7, 30) / (a2 * a2);
}

double landau_gonek_profile(double d) {
    const double w = 2.0 * std::numbers::pi * d;
    if (std::abs(w) < 0.5) {
        // sum_j (-1)^j w^(2j+1) 2 / ((2j+1)! (2j+3)(2j+4))
        double term = w, sum = 0.0;
        for (int j = 0; j < 12; ++j) {
            sum += term * 2.0 / ((2.0 * j + 3.0) * (2.0 * j + 4.0));
            term *= -w * w / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
        }
        return sum;
    }
    const double w2 = w * w;
    return -2.0 * std::sin(w) / w2 + 4.0 * (1.0 - std::cos(w)) / (w2 * w);
}

ProfileMax landau_gonek_max(double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1.0;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = landau_gonek_profile(c), fd = landau_gonek_profile(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = landau_gonek_profile(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = landau_gonek_profile(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, landau_gonek_profile(x)};
}

RealPartExpansion real_part_expansion(unsigned k, const Rational& alpha) {
    if (k == 0) throw ValidationError("real_part_expansion needs k >= 1");
    RealPartExpansion out;
    out.moment = exact_pseudo_moment(k, alpha);
    for (unsigned n = 0; 2 * n <= k; ++n) {
        BigInt c = binomial(k, 2 * n);
        if (n % 2 == 1) c = -c;
        out.terms.emplace_back(2 * n, c);
    }
    const std::array<std::complex<double>, 5> samples{
        {{0.3, 0.7}, {-1.1, 0.4}, {0.9, -0.9}, {2.0, 0.5}, {-0.25, -1.5}}};
    for (const auto& z : samples) {
        const double direct = std::pow(z, static_cast<int>(k)).real();
        double expanded = 0.0;
        for (const auto& [p, c] : out.terms)
            expanded += c.convert_to<double>() * std::pow(z.real(), k - p) * std::pow(z.imag(), p);
        const double scale = std::max(1.0, std::pow(std::abs(z), k));
        out.max_residual = std::max(out.max_residual, std::abs(direct - expanded) / scale);
    }
    return out;
}

}  // namespace dmlab
