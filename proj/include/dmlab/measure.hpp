#pragma once

#include "dmlab/arith_tables.hpp"
#include "dmlab/poly_eval.hpp"
#include "dmlab/rational.hpp"

#include <complex>
#include <optional>
#include <span>
#include <string>

namespace dmlab {

enum class Method { quadrature, diagonal, closed_form, monte_carlo };

std::string to_string(Method m);

struct MomentResult {
    double value = 0.0;
    double imag = 0.0;  // retained for the symmetry check; reports use `value`
    Method method = Method::quadrature;
    double err_estimate = 0.0;
    std::optional<Rational> exact;
};

struct GridRequest {
    unsigned k_max = 2;
    double alpha = 1.0;
    double tail_eps = 1e-12;
    unsigned refinement = 1;
};

// Probability measure mu_A: density omega |A(1/2+it)|^2 / mass on a quadrature grid.
struct MeasureContext {
    MollifierSpec spec;
    double T = 0.0;
    double mass = 0.0;       // quadrature of omega |A|^2
    double diag_mass = 0.0;  // sum_{n < T0} a(n)^2 / n
    TGrid grid;
    CoeffSeries coeffs;
    PolyValues A_values;
    std::vector<double> density;  // w_j |A(t_j)|^2, unnormalized
};

MeasureContext build_measure(const MollifierSpec& spec, double T, const FactorTables& tables,
                             const GridRequest& request = {});
MeasureContext build_measure(const MollifierSpec& spec, double T, const FactorTables& tables,
                             TGrid grid);

// Throws NyquistError when the grid step cannot resolve order k at alpha.
void check_nyquist(const TGrid& grid, unsigned k, double alpha);

PolyValues measure_Z(const MeasureContext& ctx, double alpha, const FactorTables& tables);

// integral of f d mu_A from per-point values; error from the every-other-point subgrid.
MomentResult measure_average(const MeasureContext& ctx, std::span<const double> f);
MomentResult measure_average(const MeasureContext& ctx,
                             std::span<const std::complex<double>> f);

MomentResult pseudo_moment_numeric(const MeasureContext& ctx, const PolyValues& z, unsigned k,
                                   double alpha);
MomentResult pseudo_moment_numeric(const MeasureContext& ctx, unsigned k, double alpha,
                                   const FactorTables& tables);

MomentResult mean_square_numeric(const MeasureContext& ctx, const PolyValues& z, double alpha);
MomentResult mean_square_numeric(const MeasureContext& ctx, double alpha,
                                 const FactorTables& tables);

// integral of C^p Im^q d mu_A where Z = C + i Im.
MomentResult mixed_moment_numeric(const MeasureContext& ctx, const PolyValues& z, unsigned p,
                                  unsigned q);

// Splitting B = Z_alpha A at T0 = T / log^2 T into head (m < T0) and tail.
struct TailDecomposition {
    MomentResult tail;   // integral of omega |tail|^2 (not normalized by the mass)
    double full = 0.0;   // integral of omega |Z A|^2
    double head = 0.0;   // integral of omega |head|^2
    double cross = 0.0;  // 2 Re integral of omega head conj(tail)
    double cross_bound = 0.0;  // coefficient bound via the Gaussian off-diagonal factor
    double identity_residual = 0.0;  // full - head - tail - cross
    double mass = 0.0;
    std::size_t tail_terms = 0;
};

TailDecomposition tail_mean_square(const MollifierSpec& spec, double alpha, double T,
                                   const FactorTables& tables, const TGrid& grid);

}  // namespace dmlab
