#include "dmlab/kernels.hpp"

#include "dmlab/summation.hpp"

#include <cmath>
#include <numbers>

namespace dmlab {

DirichletTerms make_terms(const CoeffSeries& coeffs, std::size_t first, std::size_t last) {
    DirichletTerms terms;
    const std::size_t end = last == 0 ? coeffs.length() : std::min(last, coeffs.length());
    for (std::size_t n = std::max<std::size_t>(first, 1); n <= end; ++n) {
        const double c = coeffs.values[n];
        if (c == 0.0) continue;
        const double amp = coeffs.scale * c / std::sqrt(static_cast<double>(n));
        terms.log_n.push_back(std::log(static_cast<double>(n)));
        terms.amplitude.push_back(amp);
    }
    KahanSum s;
    for (double a : terms.amplitude) s.add(std::abs(a));
    terms.abs_sum = s.value();
    return terms;
}

namespace kernels {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

std::complex<double> direct_point(const DirichletTerms& terms, long double t) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const long double theta = std::fmod(t * static_cast<long double>(terms.log_n[i]), kTwoPi);
        re += terms.amplitude[i] * std::cos(theta);
        im -= terms.amplitude[i] * std::sin(theta);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace

std::vector<std::complex<double>> eval_direct_serial(const DirichletTerms& terms,
                                                     const UniformGrid& grid) {
    std::vector<std::complex<double>> out(grid.count);
    for (std::size_t j = 0; j < grid.count; ++j) {
        const long double t =
            static_cast<long double>(grid.center) +
            static_cast<long double>(static_cast<std::ptrdiff_t>(j) - grid.offset) * grid.step;
        out[j] = direct_point(terms, t);
    }
    return out;
}

std::vector<std::complex<double>> eval_at_points_serial(const DirichletTerms& terms,
                                                        std::span<const double> heights) {
    std::vector<std::complex<double>> out(heights.size());
    for (std::size_t j = 0; j < heights.size(); ++j) out[j] = direct_point(terms, heights[j]);
    return out;
}

}  // namespace kernels
}  // namespace dmlab
