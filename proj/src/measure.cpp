#include "dmlab/measure.hpp"

#include "dmlab/errors.hpp"
#include "dmlab/summation.hpp"

#include <cmath>
#include <sstream>

namespace dmlab {

std::string to_string(Method m) {
    switch (m) {
        case Method::quadrature: return "quadrature";
        case Method::diagonal: return "diagonal";
        case Method::closed_form: return "closed_form";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

MeasureContext build_measure(const MollifierSpec& spec, double T, const FactorTables& tables,
                             const GridRequest& request) {
    return build_measure(spec, T, tables,
                         make_grid(T, request.k_max, request.alpha, request.tail_eps,
                                   request.refinement));
}

MeasureContext build_measure(const MollifierSpec& spec, double T, const FactorTables& tables,
                             TGrid grid) {
    MeasureContext ctx;
    ctx.spec = spec;
    ctx.T = T;
    ctx.coeffs = mollifier_coeffs(spec, T, tables);
    ctx.grid = std::move(grid);
    ctx.A_values = eval_dirichlet(ctx.coeffs, ctx.grid);

    KahanSum diag;
    for (std::size_t n = 1; n <= ctx.coeffs.length(); ++n) {
        const double a = ctx.coeffs.values[n];
        diag.add(a * a / static_cast<double>(n));
    }
    ctx.diag_mass = diag.value();

    ctx.density.resize(ctx.grid.size());
    for (std::size_t j = 0; j < ctx.grid.size(); ++j)
        ctx.density[j] = ctx.grid.weights[j] * std::norm(ctx.A_values.z[j]);
    ctx.mass = pairwise_sum(std::span<const double>(ctx.density));
    if (!(ctx.mass > 0.0)) throw ValidationError("degenerate measure: mass <= 0");
    return ctx;
}

void check_nyquist(const TGrid& grid, unsigned k, double alpha) {
    const double needed = nyquist_step(grid.T, k, alpha);
    if (grid.step > needed * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "grid step " << grid.step << " too coarse for k=" << k << " alpha=" << alpha
           << " (needs <= " << needed << "); rebuild the grid with k_max >= " << k;
        throw NyquistError(os.str());
    }
}

PolyValues measure_Z(const MeasureContext& ctx, double alpha, const FactorTables& tables) {
    return eval_Z(alpha, ctx.T, ctx.grid, tables);
}

namespace {

template <typename V>
MomentResult average_impl(const MeasureContext& ctx, std::span<const V> f) {
    if (f.size() != ctx.grid.size()) throw ValidationError("values not aligned with grid");
    const std::size_t n = f.size();
    std::vector<V> fine(n);
    std::vector<V> coarse_num;
    std::vector<double> coarse_mass;
    coarse_num.reserve(n / 2 + 1);
    coarse_mass.reserve(n / 2 + 1);
    const std::size_t parity = ctx.grid.center_index % 2;
    for (std::size_t j = 0; j < n; ++j) {
        fine[j] = ctx.density[j] * f[j];
        if (j % 2 == parity) {
            coarse_num.push_back(fine[j]);
            coarse_mass.push_back(ctx.density[j]);
        }
    }
    const V num = pairwise_sum(std::span<const V>(fine));
    const V cnum = pairwise_sum(std::span<const V>(coarse_num));
    const double cmass = pairwise_sum(std::span<const double>(coarse_mass));
    const V value = num / ctx.mass;
    const V coarse = cnum / cmass;

    MomentResult r;
    r.method = Method::quadrature;
    if constexpr (std::is_same_v<V, double>) {
        r.value = value;
        r.err_estimate = std::abs(value - coarse);
    } else {
        r.value = value.real();
        r.imag = value.imag();
        r.err_estimate = std::abs(value - coarse);
    }
    return r;
}

}  // namespace

MomentResult measure_average(const MeasureContext& ctx, std::span<const double> f) {
    return average_impl(ctx, f);
}

MomentResult measure_average(const MeasureContext& ctx,
                             std::span<const std::complex<double>> f) {
    return average_impl(ctx, f);
}

MomentResult pseudo_moment_numeric(const MeasureContext& ctx, const PolyValues& z, unsigned k,
                                   double alpha) {
    check_nyquist(ctx.grid, k, alpha);
    std::vector<std::complex<double>> f(z.z.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        std::complex<double> p{1.0, 0.0};
        for (unsigned i = 0; i < k; ++i) p *= z.z[j];
        f[j] = p;
    }
    return measure_average(ctx, std::span<const std::complex<double>>(f));
}

MomentResult pseudo_moment_numeric(const MeasureContext& ctx, unsigned k, double alpha,
                                   const FactorTables& tables) {
    check_nyquist(ctx.grid, k, alpha);
    return pseudo_moment_numeric(ctx, measure_Z(ctx, alpha, tables), k, alpha);
}

MomentResult mean_square_numeric(const MeasureContext& ctx, const PolyValues& z, double alpha) {
    check_nyquist(ctx.grid, 2, alpha);
    std::vector<double> f(z.z.size());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::norm(z.z[j]);
    return measure_average(ctx, std::span<const double>(f));
}

MomentResult mean_square_numeric(const MeasureContext& ctx, double alpha,
                                 const FactorTables& tables) {
    check_nyquist(ctx.grid, 2, alpha);
    return mean_square_numeric(ctx, measure_Z(ctx, alpha, tables), alpha);
}

MomentResult mixed_moment_numeric(const MeasureContext& ctx, const PolyValues& z, unsigned p,
                                  unsigned q) {
    std::vector<double> f(z.z.size());
    for (std::size_t j = 0; j < f.size(); ++j)
        f[j] = std::pow(z.z[j].real(), p) * std::pow(z.z[j].imag(), q);
    return measure_average(ctx, std::span<const double>(f));
}

TailDecomposition tail_mean_square(const MollifierSpec& spec, double alpha, double T,
                                   const FactorTables& tables, const TGrid& grid) {
    check_nyquist(grid, 2, alpha);
    const CoeffSeries b = convolve_b(spec, alpha, T, tables);
    const std::size_t head_len = mollifier_length(T);
    if (b.length() <= head_len) throw ValidationError("tail of the b-series is empty");

    const DirichletTerms head_terms = make_terms(b, 1, head_len);
    const DirichletTerms tail_terms = make_terms(b, head_len + 1, b.length());
    const PolyValues head = eval_dirichlet(head_terms, grid, "b head");
    const PolyValues tail = eval_dirichlet(tail_terms, grid, "b tail");
    const PolyValues z = eval_Z(alpha, T, grid, tables);
    const PolyValues a = eval_dirichlet(mollifier_coeffs(spec, T, tables), grid);

    const std::size_t n = grid.size();
    std::vector<double> full(n), hd(n), tl(n), cr(n), dens(n);
    std::vector<double> tl_coarse;
    const std::size_t parity = grid.center_index % 2;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = grid.weights[j];
        full[j] = w * std::norm(z.z[j] * a.z[j]);
        hd[j] = w * std::norm(head.z[j]);
        tl[j] = w * std::norm(tail.z[j]);
        cr[j] = 2.0 * w * (head.z[j] * std::conj(tail.z[j])).real();
        dens[j] = w * std::norm(a.z[j]);
        if (j % 2 == parity) tl_coarse.push_back(2.0 * tl[j]);
    }
    auto sum = [](const std::vector<double>& v) { return pairwise_sum(std::span<const double>(v)); };

    TailDecomposition d;
    d.full = sum(full);
    d.head = sum(hd);
    d.cross = sum(cr);
    d.mass = sum(dens);
    d.tail.value = sum(tl);
    d.tail.err_estimate = std::abs(d.tail.value - sum(tl_coarse));
    d.tail.method = Method::quadrature;
    d.identity_residual = d.full - d.head - d.tail.value - d.cross;
    d.tail_terms = tail_terms.size();

    // |integral omega (m/n)^{it}| equals the Gaussian factor for the exact weight.
    KahanSum bound;
    const double T0 = mollifier_bound(T);
    for (std::size_t m = 1; m <= head_len; ++m) {
        if (b.values[m] == 0.0) continue;
        for (std::size_t k = head_len + 1; k <= b.length(); ++k) {
            const double f = off_diagonal_factor(m, k, T);
            if (f < 1e-300 && static_cast<double>(k) > T0) break;
            if (b.values[k] == 0.0) continue;
            bound.add(2.0 * std::abs(b.values[m] * b.values[k]) /
                      std::sqrt(static_cast<double>(m) * static_cast<double>(k)) * f);
        }
    }
    d.cross_bound = bound.value();
    return d;
}

}  // namespace dmlab
