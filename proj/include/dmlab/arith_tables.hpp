#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dmlab {

// Sieved arithmetic data for 1 <= n <= limit. Index 0 is unused padding.
struct FactorTables {
    std::uint64_t limit = 0;
    std::vector<std::uint32_t> spf;       // smallest prime factor, spf[1] = 1
    std::vector<std::int8_t> lambda_vals;  // Liouville lambda(n)
    std::vector<std::uint8_t> big_omega;  // Omega(n), prime factors with multiplicity
    std::vector<double> mangoldt;         // Lambda(n) in natural-log units

    bool covers(std::uint64_t n) const { return n >= 1 && n <= limit; }
    bool operator==(const FactorTables&) const = default;
};

struct PrimePower {
    std::uint32_t prime;
    std::uint32_t exponent;
};

// Default ceiling for table memory (bytes); build_factor_tables refuses beyond it.
inline constexpr std::size_t kDefaultTableBudget = std::size_t{3} << 30;

std::size_t factor_tables_bytes(std::uint64_t limit);

FactorTables build_factor_tables(std::uint64_t limit,
                                 std::size_t memory_budget = kDefaultTableBudget);

std::vector<PrimePower> factorize(std::uint64_t n, const FactorTables& tables);

int lambda_k_value(std::uint64_t n, unsigned k, const FactorTables& tables);

// Generalized divisor function d_r(n): multiplicative, d_r(p^e) = C(e + r - 1, e).
std::uint64_t divisor_r(std::uint64_t n, unsigned r, const FactorTables& tables);

// d_r(n) for all 1 <= n <= upto (index 0 unused), computed in one sweep.
std::vector<double> divisor_r_sequence(std::uint64_t upto, unsigned r,
                                       const FactorTables& tables);

enum class MollifierKind {
    unit,
    liouville,
    liouville_k,
    interval_flip,
    liouville_divisor,
    general,
};

// a(n) = s(n) d_r(n) (1 - log n / log T)^eta where s(n) is 1, lambda(n),
// lambda_k(n), or the completely multiplicative interval-flip sign.
struct MollifierSpec {
    MollifierKind kind = MollifierKind::unit;
    double beta1 = 0.0;
    double beta2 = 0.0;
    unsigned r = 1;
    unsigned eta = 0;
    unsigned k = 1;  // only for liouville_k

    static MollifierSpec unit();
    static MollifierSpec liouville();
    static MollifierSpec liouville_k(unsigned k);
    static MollifierSpec interval_flip(double beta1, double beta2);
    static MollifierSpec liouville_divisor(unsigned r, unsigned eta = 0);
    static MollifierSpec general(double beta1, double beta2, unsigned r, unsigned eta);

    // Flip window in the closed-form sense: empty when no prime flips,
    // [0,1] when every prime below T flips.
    std::pair<double, double> flip_window() const;

    std::string name() const;
    bool operator==(const MollifierSpec&) const = default;
};

MollifierSpec parse_mollifier(const std::string& text);

// Sign of the interval-flip function at n: -1 per prime factor p (with
// multiplicity) satisfying T^beta1 < p <= T^beta2.
int interval_flip_sign(std::uint64_t n, double beta1, double beta2, double T,
                       const FactorTables& tables);

// Dense coefficients; values[n] for 1 <= n <= length, values[0] = 0.
// Consumers multiply by `scale` exactly once.
struct CoeffSeries {
    std::vector<double> values;
    double T = 0.0;
    double scale = 1.0;
    std::string description;

    std::size_t length() const { return values.empty() ? 0 : values.size() - 1; }
    double operator[](std::size_t n) const { return values[n]; }
};

// T0 = T / log^2 T, the mollifier length bound (strict n < T0).
double mollifier_bound(double T);
std::uint64_t mollifier_length(double T);

double mollifier_value(std::uint64_t n, const MollifierSpec& spec, double T,
                       const FactorTables& tables);

CoeffSeries mollifier_coeffs(const MollifierSpec& spec, double T,
                             const FactorTables& tables);

// Lambda(n)(1 - log n / (alpha log T)) for n < T^alpha; scale = -2/(alpha log T).
CoeffSeries zhat_coeffs(double alpha, double T, const FactorTables& tables);

// Coefficients of Z_alpha(s) A(s) up to `upto` (default: everything, < T^(alpha+1)),
// with the -2/(alpha log T) factor folded in (scale = 1).
CoeffSeries convolve_b(const MollifierSpec& spec, double alpha, double T,
                       const FactorTables& tables, std::uint64_t upto = 0,
                       std::size_t memory_budget = kDefaultTableBudget);

struct ArFit {
    double leading = 0.0;     // A_r
    double correction = 0.0;  // coefficient of (log x)^(r^2 - 1)
    double condition = 0.0;
};

// Least-squares fit of sum_{m < x} d_r(m)^2 / m on 32 geometric points of [N/100, N].
ArFit fit_Ar_detail(unsigned r, std::uint64_t N, const FactorTables& tables,
                    double condition_limit = 1e12);
double fit_Ar(unsigned r, std::uint64_t N, const FactorTables& tables);

}  // namespace dmlab
