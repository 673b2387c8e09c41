#include "dmlab/poly_eval.hpp"

#include "dmlab/errors.hpp"
#include "dmlab/summation.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace dmlab {

WeightSpec::WeightSpec(double height) : T(height), logT(std::log(height)) {
    if (!(height >= 100.0)) throw ValidationError("weight needs T >= 100");
}

double WeightSpec::operator()(double t) const {
    const double x = (t - T) * logT / T;
    return logT / (std::sqrt(std::numbers::pi) * T) * std::exp(-x * x);
}

UniformGrid TGrid::geometry() const {
    return {T, step, static_cast<std::ptrdiff_t>(center_index), size()};
}

double nyquist_step(double T, unsigned k, double alpha) {
    return std::numbers::pi / ((alpha * k + 2.0) * (alpha + 1.0) * std::log(T));
}

TGrid make_grid(double T, unsigned k_max, double alpha, double tail_eps, unsigned refinement,
                std::size_t point_budget) {
    if (!(tail_eps > 1e-16 && tail_eps < 1e-6))
        throw ValidationError("tail_eps must lie in (1e-16, 1e-6)");
    if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
    if (refinement == 0) throw ValidationError("refinement must be >= 1");
    const WeightSpec w(T);

    TGrid g;
    g.T = T;
    g.k_max = k_max;
    g.alpha = alpha;
    g.half_width = (T / w.logT) * std::sqrt(std::log(1.0 / tail_eps));
    const double max_step = nyquist_step(T, k_max, alpha);
    const auto half_steps =
        static_cast<std::size_t>(std::ceil(g.half_width / max_step)) * refinement;
    const std::size_t count = 2 * half_steps + 1;
    if (count > point_budget) {
        std::ostringstream os;
        os << "grid needs " << count << " points, budget is " << point_budget;
        throw CapacityError(os.str());
    }
    g.step = g.half_width / static_cast<double>(half_steps);
    g.center_index = half_steps;
    g.t_values.resize(count);
    g.weights.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double t =
            T + (static_cast<double>(j) - static_cast<double>(half_steps)) * g.step;
        g.t_values[j] = t;
        g.weights[j] = w(t) * g.step;
    }
    g.weights.front() *= 0.5;
    g.weights.back() *= 0.5;
    return g;
}

TGrid refine_grid(const TGrid& grid, std::size_t point_budget) {
    const std::size_t half_steps = 2 * grid.center_index;
    const std::size_t count = 2 * half_steps + 1;
    if (count > point_budget) throw CapacityError("refined grid exceeds point budget");
    const WeightSpec w(grid.T);
    TGrid g = grid;
    g.step = grid.step / 2.0;
    g.center_index = half_steps;
    g.t_values.resize(count);
    g.weights.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double t =
            grid.T + (static_cast<double>(j) - static_cast<double>(half_steps)) * g.step;
        g.t_values[j] = t;
        g.weights[j] = w(t) * g.step;
    }
    g.weights.front() *= 0.5;
    g.weights.back() *= 0.5;
    return g;
}

double weight_mass(const TGrid& grid) {
    return pairwise_sum(std::span<const double>(grid.weights));
}

PolyValues eval_dirichlet(const DirichletTerms& terms, const TGrid& grid, std::string source) {
    PolyValues v;
    v.z = kernels::eval_recurrence(terms, grid.geometry());
    v.source = std::move(source);
    v.abs_bound = terms.abs_sum;
    return v;
}

PolyValues eval_dirichlet(const CoeffSeries& coeffs, const TGrid& grid) {
    if (coeffs.length() < 1) throw ValidationError("empty coefficient series");
    return eval_dirichlet(make_terms(coeffs), grid, coeffs.description);
}

PolyValues eval_dirichlet_direct(const CoeffSeries& coeffs, const TGrid& grid) {
    const DirichletTerms terms = make_terms(coeffs);
    PolyValues v;
    v.z = kernels::eval_direct_serial(terms, grid.geometry());
    v.source = coeffs.description;
    v.abs_bound = terms.abs_sum;
    return v;
}

PolyValues eval_Z(double alpha, double T, const TGrid& grid, const FactorTables& tables) {
    return eval_dirichlet(zhat_coeffs(alpha, T, tables), grid);
}

double off_diagonal_factor(std::uint64_t m, std::uint64_t n, double T) {
    const double lr = std::log(static_cast<double>(m)) - std::log(static_cast<double>(n));
    const double L = std::log(T);
    return std::exp(-T * T * lr * lr / (4.0 * L * L));
}

std::complex<double> grid_fourier(const TGrid& grid, double log_ratio) {
    std::vector<std::complex<double>> terms(grid.size());
    constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const long double theta =
            std::fmod(static_cast<long double>(grid.t_values[j]) * log_ratio, kTwoPi);
        terms[j] = grid.weights[j] * std::complex<double>(static_cast<double>(std::cos(theta)),
                                                          static_cast<double>(std::sin(theta)));
    }
    return pairwise_sum(std::span<const std::complex<double>>(terms));
}

void write_poly_csv(std::ostream& out, const TGrid& grid, const PolyValues& values) {
    out << "t,re,im\n" << std::setprecision(17);
    for (std::size_t j = 0; j < grid.size(); ++j)
        out << grid.t_values[j] << ',' << values.z[j].real() << ',' << values.z[j].imag() << '\n';
}

}  // namespace dmlab
