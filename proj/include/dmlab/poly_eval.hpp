#pragma once

#include "dmlab/arith_tables.hpp"
#include "dmlab/kernels.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dmlab {

// omega(1/2 + it) = log T / (sqrt(pi) T) * exp(-(t - T)^2 log^2 T / T^2)
struct WeightSpec {
    double T;
    double logT;

    explicit WeightSpec(double height);
    double operator()(double t) const;
};

struct TGrid {
    std::vector<double> t_values;
    std::vector<double> weights;  // omega(t_j) * step, trapezoid end corrections
    double T = 0.0;
    double half_width = 0.0;
    double step = 0.0;
    unsigned k_max = 0;
    double alpha = 0.0;
    std::size_t center_index = 0;

    std::size_t size() const { return t_values.size(); }
    UniformGrid geometry() const;
};

inline constexpr std::size_t kDefaultPointBudget = std::size_t{1} << 25;

// Largest step that resolves moment order k of Z_alpha against the mollifier.
double nyquist_step(double T, unsigned k, double alpha);

TGrid make_grid(double T, unsigned k_max, double alpha, double tail_eps = 1e-12,
                unsigned refinement = 1, std::size_t point_budget = kDefaultPointBudget);

// Grid with the same window and half the step.
TGrid refine_grid(const TGrid& grid, std::size_t point_budget = kDefaultPointBudget);

double weight_mass(const TGrid& grid);

struct PolyValues {
    std::vector<std::complex<double>> z;
    std::string source;
    double abs_bound = 0.0;  // sum |c(n)| n^{-1/2}
};

PolyValues eval_dirichlet(const CoeffSeries& coeffs, const TGrid& grid);
PolyValues eval_dirichlet(const DirichletTerms& terms, const TGrid& grid,
                          std::string source = {});

// Serial per-point evaluation kept as the test oracle.
PolyValues eval_dirichlet_direct(const CoeffSeries& coeffs, const TGrid& grid);

PolyValues eval_Z(double alpha, double T, const TGrid& grid, const FactorTables& tables);

double off_diagonal_factor(std::uint64_t m, std::uint64_t n, double T);

// sum_j w_j exp(i t_j log_ratio): the grid's version of the integral of omega (m/n)^{it}.
std::complex<double> grid_fourier(const TGrid& grid, double log_ratio);

void write_poly_csv(std::ostream& out, const TGrid& grid, const PolyValues& values);

}  // namespace dmlab
