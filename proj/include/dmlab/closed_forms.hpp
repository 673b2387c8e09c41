#pragma once

#include "dmlab/arith_tables.hpp"
#include "dmlab/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace dmlab {

// (2/alpha)^k sum_i C(k,i) (-1/alpha)^i / (k+i+1)!
Rational exact_pseudo_moment(unsigned k, const Rational& alpha);

// Even moments under lambda_2 equal (-1)^k times the lambda moments of order 2k.
Rational lambda2_even_moment(unsigned k, const Rational& alpha);

// Pseudo-moment of order k for a(n) = s(n) d_r(n) (1 - log n / log T)^eta, with
// s flipping the sign of primes whose log-scale v = log p / log T lies in (beta1, beta2].
struct SimplexIntegrand {
    unsigned k = 1;
    unsigned r = 1;
    unsigned eta = 0;
    Rational alpha = 1;
    double beta1 = 0.0;
    double beta2 = 1.0;
};

struct SimplexValue {
    double value = 0.0;
    std::optional<Rational> exact;  // window edges enter as their exact binary values
};

inline constexpr unsigned kSimplexMaxOrder = 4;

SimplexValue simplex_moment(const SimplexIntegrand& si);

// Piecewise Gauss-Legendre evaluation, exact on every polynomial piece; a cross-check.
double simplex_moment_numeric(const SimplexIntegrand& si);

// Closed-form pseudo-moment of order k for a mollifier family, when one exists:
// the factorial sum for the r = 1 flip families (any k <= 64), the lambda_2 sign rule
// for even orders, and simplex_moment otherwise (k <= 4).
std::optional<SimplexValue> closed_form_moment(const MollifierSpec& spec, unsigned k,
                                               const Rational& alpha);

// Asymptotic integral of |Z_alpha|^2 against mu_A for the unit flip family.
Rational mean_square_closed(const Rational& alpha, unsigned r, unsigned eta);

// 4/(3 alpha^2) - 1/alpha^3 + 7/(30 alpha^4)
Rational mean_square_polynomial(const Rational& alpha);

// f(d) = integral_0^1 2u(1-u) sin(2 pi u d) du
double landau_gonek_profile(double d);

struct ProfileMax {
    double d = 0.0;
    double f = 0.0;
};

// Golden-section search on [0,1].
ProfileMax landau_gonek_max(double tol = 1e-10);

// Re(Z^k) = sum_n C(k,2n) (-1)^n C^(k-2n) Im^(2n).
struct RealPartExpansion {
    Rational moment;  // exact_pseudo_moment(k, alpha)
    std::vector<std::pair<unsigned, BigInt>> terms;  // (power of Im, coefficient)
    double max_residual = 0.0;  // pointwise check on sample points
};

RealPartExpansion real_part_expansion(unsigned k, const Rational& alpha);

}  // namespace dmlab
