#include "doctest.h"

#include "dmlab/errors.hpp"
#include "dmlab/measure.hpp"

#include <cmath>

using namespace dmlab;

namespace {

const FactorTables& tables() {
    static const FactorTables t = build_factor_tables(2'000'000);
    return t;
}

double harmonic_below(double x) {
    double h = 0.0;
    for (std::uint64_t n = 1; static_cast<double>(n) < x; ++n) h += 1.0 / static_cast<double>(n);
    return h;
}

}  // namespace

TEST_CASE("measure is a probability measure") {
    for (double T : {1e3, 1e4}) {
        const auto ctx = build_measure(MollifierSpec::liouville(), T, tables());
        const auto m0 = pseudo_moment_numeric(ctx, 0, 1.0, tables());
        CHECK(std::abs(m0.value - 1.0) <= 1e-9);
        CHECK(ctx.diag_mass == doctest::Approx(harmonic_below(mollifier_bound(T))).epsilon(1e-13));
        CHECK(std::abs(ctx.mass - ctx.diag_mass) <= 1e-6 * ctx.diag_mass);
    }
    const auto unit = build_measure(MollifierSpec::unit(), 1e4, tables());
    const auto liou = build_measure(MollifierSpec::liouville(), 1e4, tables());
    CHECK(unit.diag_mass == liou.diag_mass);
}

TEST_CASE("quadrature identities") {
    for (auto spec : {MollifierSpec::liouville(), MollifierSpec::unit(),
                      MollifierSpec::liouville_divisor(2)}) {
        const auto ctx = build_measure(spec, 1e4, tables());
        const auto z = measure_Z(ctx, 1.0, tables());
        const double m1 = mixed_moment_numeric(ctx, z, 1, 0).value;
        const double c2 = mixed_moment_numeric(ctx, z, 2, 0).value;
        const double im2 = mixed_moment_numeric(ctx, z, 0, 2).value;
        const double re_z2 = pseudo_moment_numeric(ctx, z, 2, 1.0).value;
        const double abs2 = mean_square_numeric(ctx, z, 1.0).value;
        CHECK(c2 >= m1 * m1 - 1e-9);
        CHECK(std::abs(re_z2 - (c2 - im2)) <= 1e-9);
        CHECK(std::abs(abs2 - (c2 + im2)) <= 1e-9);
        CHECK(std::abs(pseudo_moment_numeric(ctx, z, 1, 1.0).value - m1) <= 1e-12);
    }
}

TEST_CASE("odd moments have negligible imaginary part") {
    const auto ctx = build_measure(MollifierSpec::liouville(), 1e4, tables());
    const auto z = measure_Z(ctx, 1.0, tables());
    for (unsigned k : {1u, 2u}) CHECK(std::abs(pseudo_moment_numeric(ctx, z, k, 1.0).imag) <= 1e-8);
}

TEST_CASE("refinement stability") {
    const double T = 1e4;
    const auto spec = MollifierSpec::liouville();
    const auto coarse = build_measure(spec, T, tables());
    const auto fine = build_measure(spec, T, tables(), refine_grid(coarse.grid));
    for (unsigned k : {1u, 2u}) {
        const double a = pseudo_moment_numeric(coarse, k, 1.0, tables()).value;
        const double b = pseudo_moment_numeric(fine, k, 1.0, tables()).value;
        CHECK(std::abs(a - b) < 1e-9);
    }
    const double a = mean_square_numeric(coarse, 1.0, tables()).value;
    const double b = mean_square_numeric(fine, 1.0, tables()).value;
    CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("Nyquist guard") {
    GridRequest req;
    req.k_max = 1;
    const auto ctx = build_measure(MollifierSpec::liouville(), 1e3, tables(), req);
    CHECK_NOTHROW(check_nyquist(ctx.grid, 1, 1.0));
    CHECK_THROWS_AS(check_nyquist(ctx.grid, 4, 1.0), NyquistError);
    CHECK_THROWS_AS(pseudo_moment_numeric(ctx, 4, 1.0, tables()), NyquistError);
    CHECK_THROWS_AS(check_nyquist(ctx.grid, 1, 2.0), NyquistError);
}

TEST_CASE("tail mean square decomposition") {
    const double T = 2000;
    for (auto spec : {MollifierSpec::liouville_divisor(2), MollifierSpec::liouville()}) {
        const auto grid = make_grid(T, 2, 1.0);
        const auto d = tail_mean_square(spec, 1.0, T, tables(), grid);
        CHECK(std::isfinite(d.tail.value));
        CHECK(d.tail.value > 0.0);
        CHECK(d.tail_terms > 0);
        CHECK(std::abs(d.cross) <= 1e-6);
        CHECK(d.cross_bound <= 1e-6);
        CHECK(std::abs(d.full - d.head - d.tail.value) <= 1e-6);
        CHECK(std::abs(d.identity_residual) <= 1e-9);
    }
}
