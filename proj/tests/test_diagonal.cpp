#include "doctest.h"

#include "dmlab/closed_forms.hpp"
#include "dmlab/diagonal.hpp"
#include "dmlab/errors.hpp"
#include "dmlab/rational.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace dmlab;

namespace {

const FactorTables& tables() {
    static const FactorTables t = build_factor_tables(2'000'000);
    return t;
}

std::vector<std::uint64_t> prime_powers_below(double x) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; static_cast<double>(n) < x; ++n)
        if (tables().mangoldt[n] != 0.0) out.push_back(n);
    return out;
}

// k = 1 diagonal sum by a plain double loop over (prime power q, n)
double brute_k1(const MollifierSpec& spec, double alpha, double T) {
    const double L = std::log(T), T0 = mollifier_bound(T);
    const auto a = mollifier_coeffs(spec, T, tables());
    long double total = 0;
    for (std::uint64_t q : prime_powers_below(std::pow(T, alpha))) {
        const double lq = std::log(static_cast<double>(q));
        const double w = tables().mangoldt[q] * (1 - lq / (alpha * L));
        for (std::uint64_t n = 1; static_cast<double>(n * q) < T0; ++n)
            total += w * a[n] * a[n * q] / static_cast<double>(n * q);
    }
    return static_cast<double>(-2.0 / (alpha * L) * total);
}

}  // namespace

TEST_CASE("tuple enumeration against an ordered double loop") {
    for (double T : {1e3, 1e4}) {
        const double T0 = mollifier_bound(T);
        const auto pp = prime_powers_below(T0);
        Rational ordered = 0;
        std::uint64_t ordered_count = 0, equal_pairs = 0;
        for (auto p : pp)
            for (auto q : pp)
                if (static_cast<double>(p * q) < T0) {
                    ordered += Rational(BigInt(1), BigInt(p * q));
                    ++ordered_count;
                    equal_pairs += p == q;
                }
        Rational enumerated = 0;
        std::uint64_t mult_total = 0, distinct = 0, equal = 0;
        const auto visited = enumerate_tuples(2, 1.0, T, tables(), [&](const PrimePowerTuple& t) {
            REQUIRE(t.parts.size() == 2);
            REQUIRE(t.parts[0] <= t.parts[1]);
            REQUIRE(t.product == t.parts[0] * t.parts[1]);
            enumerated += Rational(BigInt(t.multiplicity), BigInt(t.product));
            mult_total += t.multiplicity;
            if (t.parts[0] == t.parts[1]) {
                REQUIRE(t.multiplicity == 1);
                ++equal;
            } else {
                REQUIRE(t.multiplicity == 2);
                ++distinct;
            }
        });
        CHECK(enumerated == ordered);
        CHECK(mult_total == ordered_count);
        CHECK(ordered_count == 2 * distinct + equal);
        CHECK(equal == equal_pairs);
        CHECK(visited == distinct + equal);
    }
}

TEST_CASE("tuple budget") {
    TupleOptions opt;
    opt.budget = 10;
    CHECK_THROWS_AS(enumerate_tuples(2, 1.0, 1e5, tables(), [](const PrimePowerTuple&) {}, opt),
                    CapacityError);
}

TEST_CASE("first-order diagonal sums against a direct loop") {
    for (auto spec : {MollifierSpec::unit(), MollifierSpec::liouville(),
                      MollifierSpec::liouville_divisor(2)}) {
        for (double T : {1e3, 1e4, 1e5}) {
            const auto d = diagonal_sum(spec, 1, 1.0, T, tables());
            CHECK(d.terms_enumerated > 0);
            CHECK(d.value == doctest::Approx(brute_k1(spec, 1.0, T)).epsilon(1e-12));
        }
    }
    // unit and liouville differ by the sign (-1)^j on p^j: prime terms flip sign
    const auto u = diagonal_moment(MollifierSpec::unit(), 1, 1.0, 1e5, tables());
    const auto l = diagonal_moment(MollifierSpec::liouville(), 1, 1.0, 1e5, tables());
    CHECK(u.value < 0.0);
    CHECK(l.value > 0.0);
}

TEST_CASE("diagonal oracle matches quadrature") {
    const double T = 1e4;
    for (auto spec : {MollifierSpec::unit(), MollifierSpec::liouville()}) {
        const auto ctx = build_measure(spec, T, tables());
        for (unsigned k : {1u, 2u}) {
            const double quad = pseudo_moment_numeric(ctx, k, 1.0, tables()).value;
            const double diag = diagonal_moment(spec, k, 1.0, T, tables()).value;
            CHECK(std::abs(quad - diag) <= 1e-6);
        }
    }
}

TEST_CASE("diagonal moments approach the closed forms") {
    const auto spec = MollifierSpec::liouville();
    for (unsigned k : {1u, 2u}) {
        const double exact = to_double(exact_pseudo_moment(k, 1));
        double prev = INFINITY;
        for (double T : {1e3, 1e4, 1e5}) {
            const double gap = std::abs(diagonal_moment(spec, k, 1.0, T, tables()).value - exact);
            CHECK(std::isfinite(gap));
            CHECK(gap < prev);
            prev = gap;
        }
    }
}

TEST_CASE("head sums of b(m)^2/m") {
    const double T = 1e4;
    for (auto spec : {MollifierSpec::liouville(), MollifierSpec::liouville_divisor(2)}) {
        const auto h = head_sum_bsq(spec, 1.0, T, tables());
        const auto b = convolve_b(spec, 1.0, T, tables(), mollifier_length(T));
        long double direct = 0;
        for (std::size_t m = 1; static_cast<double>(m) < mollifier_bound(T); ++m)
            direct += b[m] * b[m] / static_cast<double>(m);
        CHECK(h.raw == doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
        CHECK(h.normalized == doctest::Approx(h.raw / h.diag_mass));
    }
    CHECK(head_sum_bsq(MollifierSpec::liouville(), 1.0, 1e3, tables()).raw > 0.0);

    for (auto [spec, target] : {std::pair{MollifierSpec::liouville(), 17.0 / 30},
                                std::pair{MollifierSpec::liouville_divisor(2), 97.0 / 210}}) {
        double prev = INFINITY;
        for (double T : {1e3, 1e4, 1e5, 1e6}) {
            const double gap = std::abs(head_sum_bsq(spec, 1.0, T, tables()).normalized - target);
            CHECK(gap < prev);
            prev = gap;
        }
    }
}

TEST_CASE("lambda_2 shift sign") {
    for (unsigned om = 0; om < 20; ++om) {
        CHECK(lambda2_shift_sign(om, 2) == -1);
        for (unsigned k : {1u, 3u, 5u, 7u}) {
            const int direct = ((om / 2) % 2 ? -1 : 1) * (((om + k) / 2) % 2 ? -1 : 1);
            CHECK(lambda2_shift_sign(om, k) == direct);
        }
    }
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> pick(1, 400);
    const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17};
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t n = pick(rng);
        for (unsigned k : {1u, 2u, 3u, 5u}) {
            std::uint64_t m = n;
            for (unsigned j = 0; j < k; ++j) m *= primes[(i + j) % (k < 5 ? 7 : 3)];
            REQUIRE(lambda2_shift_sign(tables().big_omega[n], k) ==
                    lambda_k_value(n, 2, tables()) * lambda_k_value(m, 2, tables()));
        }
    }
}

TEST_CASE("lambda_2 restricted sums flip sign") {
    const auto r = lambda2_sign_check(1, 1.0, 1e4, tables());
    CHECK(r.tuples > 0);
    CHECK(r.term_mismatches == 0);
    CHECK(r.relative_mismatch <= 1e-12);
    CHECK(r.restricted_lambda2 == doctest::Approx(-r.restricted_lambda).epsilon(1e-12));
}
