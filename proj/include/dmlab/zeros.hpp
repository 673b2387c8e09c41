#pragma once

#include "dmlab/arith_tables.hpp"

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace dmlab {

// Imaginary parts of zeta zeros, strictly increasing.
struct ZeroTable {
    std::vector<double> heights;
    std::string source;
    double complete_to = 0.0;  // every zero up to this height is present; defaults to the last one

    std::size_t count_up_to(double T) const;
};

// One decimal height per line; '#' lines and blank lines are skipped. A header line
// "# complete-to: H" declares that the table holds every zero up to H.
ZeroTable load_zeros(const std::string& path);
ZeroTable load_zeros(std::istream& in, const std::string& source);

// (T / 2 pi) log(T / (2 pi e)) + 7/8
double riemann_von_mangoldt(double T);

// gamma log(gamma / 2 pi) / 2 pi, so consecutive normalized heights are spaced about 1 apart
double normalized_height(double gamma);

inline constexpr double kSincWindow = 200.0 * 3.14159265358979323846;

struct ZeroSum {
    double value = 0.0;
    double tail_estimate = 0.0;  // expected contribution of zeros beyond the window
    std::size_t terms = 0;
};

// sum_gamma sinc^2((alpha/2)(gamma - t) log T) - 1/alpha over |gamma - t| (alpha/2) log T <= 200 pi.
ZeroSum c_alpha_from_zeros(double t, double alpha, const ZeroTable& zt, double T);

struct LgAverage {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t zeros = 0;
};

// Mean of Im Z_alpha(gamma + 2 pi d / log T) over zeros 0 < gamma <= T.
LgAverage lg_empirical(double d, double alpha, const ZeroTable& zt, double T,
                       const FactorTables& tables);

}  // namespace dmlab
