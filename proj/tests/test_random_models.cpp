#include "doctest.h"

#include "dmlab/errors.hpp"
#include "dmlab/kernels.hpp"
#include "dmlab/random_models.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

using namespace dmlab;

TEST_CASE("counter generator") {
    const CounterRng a(42), b(42), c(43);
    CHECK(a.bits(3, 1000) == b.bits(3, 1000));
    CHECK(a.bits(3, 1000) != c.bits(3, 1000));
    CHECK(a.bits(3, 1000) != a.bits(4, 1000));
    double sum = 0.0;
    for (std::uint64_t i = 0; i < 100000; ++i) {
        const double u = a.uniform(0, i);
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / 100000 - 0.5) < 0.005);
}

TEST_CASE("circle model") {
    CHECK(circle_rv_moment(0) == 1);
    CHECK(circle_rv_moment(3) == make_rational(1, 8));
    for (unsigned k = 1; k <= 6; ++k) CHECK(circle_rv_moment(k) == make_rational(1, 1 << k));
    const auto m = circle_rv_monte_carlo(3, 1'000'000, 12345);
    CHECK(m.analytic == 0.125);
    CHECK(m.z_score() <= 3.0);
    CHECK(std::abs(m.empirical.real() - 0.125) < 0.002);
    CHECK_THROWS_AS(circle_rv_monte_carlo(3, 1, 1), ValidationError);
}

TEST_CASE("truncated lognormal law") {
    const LognormalLaw law;
    boost::math::quadrature::tanh_sinh<double> ts;
    for (unsigned k = 0; k <= 6; ++k) {
        const double oracle = ts.integrate([&](double u) { return std::pow(law.sample(u), k); }, 0.0, 1.0);
        CHECK(law.moment(k) == doctest::Approx(oracle).epsilon(1e-8));
    }
    CHECK(law.moment(1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(law.sample(0.5) == doctest::Approx(std::exp(law.mu())).epsilon(1e-9));
}

TEST_CASE("angle law Fourier coefficients") {
    const std::vector<double> a{0.0, 0.2, -0.1, 0.05};
    CHECK(std::abs(angle_law_fourier(a, 0) - 1.0) < 1e-14);
    for (unsigned k = 1; k <= 5; ++k) {
        const double expected = k < a.size() ? a[k] : 0.0;
        CHECK(std::abs(angle_law_fourier(a, k) - expected) < 1e-14);
    }
    WasilewskiConfig cfg;
    const auto coeffs = wasilewski_coefficients(cfg);
    double s = 0.0;
    for (std::size_t n = 1; n < coeffs.size(); ++n) s += std::abs(coeffs[n]);
    CHECK(2 * s < 1.0);
    cfg.coefficients = {0.0, 0.4, 0.2};
    CHECK_THROWS_AS(wasilewski_coefficients(cfg), ValidationError);
}

TEST_CASE("lognormal-angle Monte Carlo") {
    WasilewskiConfig cfg;
    const auto rows = wasilewski_moments(cfg);
    REQUIRE(rows.size() == cfg.k_max + 1);
    CHECK(std::abs(rows[0].empirical - 1.0) < 1e-12);
    const auto a = wasilewski_coefficients(cfg);
    for (unsigned k = 1; k <= 6; ++k) {
        CHECK(rows[k].a_k == doctest::Approx(a[k]));
        CHECK(rows[k].x_moment == doctest::Approx(cfg.x_law.moment(k)));
        CHECK(rows[k].analytic == doctest::Approx(a[k] * cfg.x_law.moment(k)));
        CHECK(rows[k].z_score() <= 3.0);
    }
}

TEST_CASE("Monte Carlo output does not depend on the thread count") {
    WasilewskiConfig cfg;
    cfg.samples = 200'000;
    const int saved = thread_budget();
    set_thread_budget(1);
    const auto one = wasilewski_moments(cfg);
    const auto c1 = circle_rv_monte_carlo(2, 100'000, 9);
    set_thread_budget(4);
    const auto four = wasilewski_moments(cfg);
    const auto c4 = circle_rv_monte_carlo(2, 100'000, 9);
    set_thread_budget(saved);
    for (std::size_t k = 0; k < one.size(); ++k) {
        CHECK(one[k].empirical == four[k].empirical);
        CHECK(one[k].se_re == four[k].se_re);
    }
    CHECK(c1.empirical == c4.empirical);
}
