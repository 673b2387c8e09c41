#include "dmlab/closed_forms.hpp"

#include "dmlab/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace dmlab {

namespace {

// Polynomials in the coordinates of a standard simplex plus the slack
// variable w = 1 - sum(x); the last exponent slot belongs to w.
using Monomial = std::vector<unsigned>;
using Poly = std::map<Monomial, Rational>;

Poly constant(std::size_t nvars, const Rational& c) {
    return Poly{{Monomial(nvars, 0), c}};
}

Poly linear(std::size_t nvars, std::size_t var, const Rational& c0, const Rational& c1) {
    Poly p;
    if (c0 != 0) p[Monomial(nvars, 0)] = c0;
    Monomial m(nvars, 0);
    m[var] = 1;
    if (c1 != 0) p[m] = c1;
    return p;
}

Poly multiply(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Monomial m(ma.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            out[m] += ca * cb;
        }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

Poly power(const Poly& p, unsigned e) {
    Poly out = constant(p.begin()->first.size(), 1);
    for (unsigned i = 0; i < e; ++i) out = multiply(out, p);
    return out;
}

Poly monomial(std::size_t nvars, std::size_t var, unsigned e) {
    Monomial m(nvars, 0);
    m[var] = e;
    return Poly{{m, Rational(1)}};
}

// integral over {x >= 0, sum x <= rho} of prod x_i^a_i * w^b
//   = rho^(sum a + b + dim) prod a_i! b! / (sum a + b + dim)!
Rational integrate(const Poly& p, const Rational& rho = 1) {
    Rational total = 0;
    for (const auto& [m, c] : p) {
        const unsigned dim = static_cast<unsigned>(m.size()) - 1;
        BigInt num = 1;
        unsigned deg = 0;
        for (unsigned e : m) {
            num *= factorial(e);
            deg += e;
        }
        total += c * pow(rho, deg + dim) * Rational(num, factorial(deg + dim));
    }
    return total;
}

// integral_0^1 v^(r^2-1) (1-v)^(2 eta) dv
Rational beta_denominator(unsigned r, unsigned eta) {
    const unsigned r2 = r * r;
    return Rational(factorial(r2 - 1) * factorial(2 * eta), factorial(r2 + 2 * eta));
}

enum class Window { empty, full, partial };

Window classify(double beta1, double beta2) {
    if (beta2 <= std::max(beta1, 0.0) || beta1 >= 1.0) return Window::empty;
    if (beta1 <= 0.0 && beta2 >= 1.0) return Window::full;
    return Window::partial;
}

void validate(const SimplexIntegrand& si) {
    if (si.k > kSimplexMaxOrder)
        throw ValidationError("simplex_moment supports k <= " + std::to_string(kSimplexMaxOrder));
    if (si.r == 0) throw ValidationError("r must be positive");
    if (si.alpha <= 0) throw ValidationError("alpha must be positive");
    if (!(0.0 <= si.beta1 && si.beta1 <= si.beta2 && si.beta2 <= 1.0))
        throw ValidationError("flip window needs 0 <= beta1 <= beta2 <= 1");
}

// Doubles are binary fractions, so window edges convert to rationals without rounding.
Rational exact_rational(double x) {
    int e = 0;
    const double m = std::frexp(x, &e);
    const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    e -= 53;
    return e >= 0 ? Rational(BigInt(mant) << e) : Rational(BigInt(mant), BigInt(1) << -e);
}

// sign(v) = 1 - 2[v > beta1] + 2[v > beta2]; each product term is the integral over a
// shifted simplex {v_j > c_j}, which becomes a standard simplex of size 1 - sum c_j.
Rational simplex_exact(const SimplexIntegrand& si) {
    // variables x_1..x_k (v_j = c_j + x_j), u, then slack w
    const std::size_t nv = si.k + 2;
    const std::size_t u = si.k, w = si.k + 1;
    const Rational inv_alpha = Rational(1) / si.alpha;
    std::vector<std::pair<Rational, Rational>> steps{{Rational(0), Rational(1)}};
    if (classify(si.beta1, si.beta2) != Window::empty) {
        steps.push_back({exact_rational(si.beta1), Rational(-2)});
        steps.push_back({exact_rational(si.beta2), Rational(2)});
    }
    Rational total = 0;
    std::vector<std::size_t> choice(si.k, 0);
    while (true) {
        Rational shift = 0, coef = 1;
        for (std::size_t j = 0; j < si.k; ++j) {
            shift += steps[choice[j]].first;
            coef *= steps[choice[j]].second;
        }
        const Rational rho = 1 - shift;
        if (rho > 0) {
            Poly integrand = monomial(nv, u, si.r * si.r - 1);
            Poly one_minus_u = monomial(nv, w, 1);  // 1 - u = w + sum x + shift
            if (shift != 0) one_minus_u[Monomial(nv, 0)] = shift;
            for (std::size_t j = 0; j < si.k; ++j) {
                const Rational c = steps[choice[j]].first;
                integrand = multiply(integrand, linear(nv, j, 1 - c * inv_alpha, -inv_alpha));
                one_minus_u[monomial(nv, j, 1).begin()->first] = 1;
            }
            integrand = multiply(integrand, power(one_minus_u, si.eta));
            integrand = multiply(integrand, monomial(nv, w, si.eta));
            total += coef * integrate(integrand, rho);
        }
        std::size_t j = 0;
        while (j < si.k && ++choice[j] == steps.size()) choice[j++] = 0;
        if (j == si.k) break;
    }
    const Rational prefactor = pow(Rational(-2 * static_cast<int>(si.r)) * inv_alpha, si.k);
    return prefactor * total / beta_denominator(si.r, si.eta);
}

// I(s) = integral_0^(1-s) u^(r^2-1) (1-u)^eta (1-s-u)^eta du, expanded in (1-u) = (1-s-u) + s.
double inner_u_integral(double s, unsigned r, unsigned eta) {
    const unsigned a = r * r - 1;
    const double c = 1.0 - s;
    if (c <= 0.0) return 0.0;
    // (1-u)^eta = sum_i C(eta,i) s^i (c-u)^(eta-i); integral_0^c u^a (c-u)^b du = c^(a+b+1) a! b!/(a+b+1)!
    double total = 0.0;
    for (unsigned i = 0; i <= eta; ++i) {
        const unsigned b = 2 * eta - i;
        const double beta = std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
        total += binomial(eta, i).convert_to<double>() * std::pow(s, i) * std::pow(c, a + b + 1) * beta;
    }
    return total;
}

template <unsigned Points>
class NestedRule {
public:
    NestedRule(const SimplexIntegrand& si, double inv_alpha)
        : si_(si), inv_alpha_(inv_alpha) {}

    double run() const { return level(0, 0.0); }

private:
    // n1 beta1 + n2 beta2 for 1 <= n1 + n2 <= count
    std::vector<double> edge_sums(unsigned count) const {
        std::vector<double> out;
        for (unsigned n1 = 0; n1 <= count; ++n1)
            for (unsigned n2 = 0; n1 + n2 <= count; ++n2)
                if (n1 + n2 > 0) out.push_back(n1 * si_.beta1 + n2 * si_.beta2);
        return out;
    }

    double level(unsigned depth, double used) const {
        if (depth == si_.k) return inner_u_integral(used, si_.r, si_.eta);
        const double upper = 1.0 - used;
        std::vector<double> cuts{0.0, upper};
        auto cut = [&](double v) {
            if (v > 0.0 && v < upper) cuts.push_back(v);
        };
        cut(si_.beta1);
        cut(si_.beta2);
        // the inner levels change shape where the mass left for them crosses a sum of edges
        for (double s : edge_sums(si_.k - depth - 1)) cut(upper - s);
        std::sort(cuts.begin(), cuts.end());
        double total = 0.0;
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            const double lo = cuts[p], hi = cuts[p + 1];
            if (hi <= lo) continue;
            const double mid = 0.5 * (lo + hi);
            const double sign = (si_.beta1 < mid && mid <= si_.beta2) ? -1.0 : 1.0;
            total += sign * boost::math::quadrature::gauss<double, Points>::integrate(
                                [&](double v) {
                                    return (1.0 - v * inv_alpha_) * level(depth + 1, used + v);
                                },
                                lo, hi);
        }
        return total;
    }

    const SimplexIntegrand& si_;
    double inv_alpha_;
};

}  // namespace

double simplex_moment_numeric(const SimplexIntegrand& si) {
    validate(si);
    if (si.k == 0) return 1.0;
    const double alpha = to_double(si.alpha);
    // the integrand is a polynomial of this degree on every piece
    const unsigned degree = si.k + si.r * si.r + 2 * si.eta;
    double integral = 0.0;
    if (degree <= 39)
        integral = NestedRule<20>(si, 1.0 / alpha).run();
    else if (degree <= 59)
        integral = NestedRule<30>(si, 1.0 / alpha).run();
    else
        throw ValidationError("simplex_moment_numeric: polynomial degree too high");
    const double prefactor = std::pow(-2.0 * si.r / alpha, static_cast<int>(si.k));
    return prefactor * integral / to_double(beta_denominator(si.r, si.eta));
}

SimplexValue simplex_moment(const SimplexIntegrand& si) {
    validate(si);
    if (si.k == 0) return {1.0, Rational(1)};
    const Rational exact = simplex_exact(si);
    return {to_double(exact), exact};
}

std::optional<SimplexValue> closed_form_moment(const MollifierSpec& spec, unsigned k,
                                               const Rational& alpha) {
    if (spec.kind == MollifierKind::liouville_k && spec.k >= 2) {
        if (spec.k != 2 || k % 2 == 1) return std::nullopt;
        if (k == 0) return SimplexValue{1.0, Rational(1)};
        const Rational q = lambda2_even_moment(k / 2, alpha);
        return SimplexValue{to_double(q), q};
    }
    const auto [b1, b2] = spec.flip_window();
    const Window window = classify(b1, b2);
    if (spec.r == 1 && spec.eta == 0 && window != Window::partial) {
        Rational q = exact_pseudo_moment(k, alpha);
        if (window == Window::empty && k % 2 == 1) q = -q;
        return SimplexValue{to_double(q), q};
    }
    if (k > kSimplexMaxOrder) return std::nullopt;
    SimplexIntegrand si;
    si.k = k;
    si.r = spec.r;
    si.eta = spec.eta;
    si.alpha = alpha;
    si.beta1 = std::clamp(b1, 0.0, 1.0);
    si.beta2 = std::clamp(b2, si.beta1, 1.0);
    return simplex_moment(si);
}

Rational mean_square_closed(const Rational& alpha, unsigned r, unsigned eta) {
    if (alpha <= 0) throw ValidationError("alpha must be positive");
    if (r == 0) throw ValidationError("r must be positive");
    const Rational inv_alpha = Rational(1) / alpha;
    const unsigned r2 = r * r;

    // I_a: variables (u, v), slack w = 1 - u - v
    Poly ia = monomial(3, 0, r2 - 1);
    ia = multiply(ia, monomial(3, 1, 1));
    ia = multiply(ia, power(linear(3, 1, 1, -inv_alpha), 2));
    ia = multiply(ia, monomial(3, 2, 2 * eta));

    // I_b: variables (u, v1, v2), slack w; 1-u-v1 = w+v2 and 1-u-v2 = w+v1
    Poly ib = monomial(4, 0, r2 - 1);
    ib = multiply(ib, linear(4, 1, 1, -inv_alpha));
    ib = multiply(ib, linear(4, 2, 1, -inv_alpha));
    Poly w_v2 = monomial(4, 3, 1), w_v1 = monomial(4, 3, 1);
    w_v2[monomial(4, 2, 1).begin()->first] = 1;
    w_v1[monomial(4, 1, 1).begin()->first] = 1;
    ib = multiply(ib, power(w_v2, eta));
    ib = multiply(ib, power(w_v1, eta));

    const Rational a2 = alpha * alpha;
    const Rational numer = Rational(4 * r2) / a2 * integrate(ia) +
                           Rational(4 * r2 * r2) / a2 * integrate(ib);
    return numer / (Rational(r2) * beta_denominator(r, eta));
}

}  // namespace dmlab
