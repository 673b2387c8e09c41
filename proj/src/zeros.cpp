#include "dmlab/zeros.hpp"

#include "dmlab/errors.hpp"
#include "dmlab/kernels.hpp"
#include "dmlab/summation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dmlab {

std::size_t ZeroTable::count_up_to(double T) const {
    return static_cast<std::size_t>(std::upper_bound(heights.begin(), heights.end(), T) -
                                    heights.begin());
}

ZeroTable load_zeros(std::istream& in, const std::string& source) {
    ZeroTable zt;
    zt.source = source;
    std::string line;
    std::size_t lineno = 0;
    double declared = 0.0;
    const std::string directive = "# complete-to:";
    while (std::getline(in, line)) {
        ++lineno;
        if (line.rfind(directive, 0) == 0) {
            try {
                declared = std::stod(line.substr(directive.size()));
            } catch (const std::exception&) {
                throw ParseError(source + ": bad complete-to directive", lineno);
            }
            continue;
        }
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        const char* begin = line.data() + first;
        const char* end = line.data() + last + 1;
        double h = 0.0;
        const auto [ptr, ec] = std::from_chars(begin, end, h);
        if (ec != std::errc() || ptr != end || !std::isfinite(h) || h <= 0.0)
            throw ParseError(source + ": expected one positive height per line", lineno);
        if (!zt.heights.empty() && h <= zt.heights.back())
            throw ParseError(source + ": heights must be strictly increasing", lineno);
        zt.heights.push_back(h);
    }
    if (zt.heights.empty()) throw ParseError(source + ": no zeros found", lineno);
    zt.complete_to = std::max(declared, zt.heights.back());
    return zt;
}

ZeroTable load_zeros(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open zero table " + path);
    return load_zeros(in, path);
}

double riemann_von_mangoldt(double T) {
    const double two_pi = 2.0 * std::numbers::pi;
    return T / two_pi * std::log(T / (two_pi * std::numbers::e)) + 0.875;
}

double normalized_height(double gamma) {
    const double two_pi = 2.0 * std::numbers::pi;
    return gamma * std::log(gamma / two_pi) / two_pi;
}

ZeroSum c_alpha_from_zeros(double t, double alpha, const ZeroTable& zt, double T) {
    if (!(alpha > 0.0 && alpha <= 4.0)) throw ValidationError("c_alpha_from_zeros needs 0 < alpha <= 4");
    if (!(T > 1.0)) throw ValidationError("c_alpha_from_zeros needs T > 1");
    const double scale = 0.5 * alpha * std::log(T);
    const double half_width = kSincWindow / scale;
    if (t - half_width < 0.0 || t + half_width > zt.complete_to) {
        std::ostringstream os;
        os << "t = " << t << " needs zeros on [" << t - half_width << ", " << t + half_width
           << "], table is complete to " << zt.complete_to;
        throw ValidationError(os.str());
    }
    const auto lo = std::lower_bound(zt.heights.begin(), zt.heights.end(), t - half_width);
    const auto hi = std::upper_bound(zt.heights.begin(), zt.heights.end(), t + half_width);
    KahanSum sum;
    for (auto it = lo; it != hi; ++it) {
        const double x = scale * (*it - t);
        if (std::abs(x) < 1e-8) {
            sum += 1.0 - x * x / 3.0;
        } else {
            const double s = std::sin(x) / x;
            sum += s * s;
        }
    }
    ZeroSum out;
    out.terms = static_cast<std::size_t>(hi - lo);
    out.value = sum.value() - 1.0 / alpha;
    // zeros have density 1/(pi alpha) in x; sin^2 averages 1/2 on both sides
    out.tail_estimate = 1.0 / (std::numbers::pi * alpha * kSincWindow);
    return out;
}

LgAverage lg_empirical(double d, double alpha, const ZeroTable& zt, double T,
                       const FactorTables& tables) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("lg_empirical needs 0 < alpha < 1");
    if (zt.complete_to < T) {
        std::ostringstream os;
        os << "zero table is complete to " << zt.complete_to << ", need " << T;
        throw ValidationError(os.str());
    }
    const std::size_t n = zt.count_up_to(T);
    if (n < 2) throw ValidationError("lg_empirical needs at least two zeros below T");
    const double shift = 2.0 * std::numbers::pi * d / std::log(T);
    std::vector<double> points(zt.heights.begin(), zt.heights.begin() + n);
    for (double& p : points) p += shift;

    const CoeffSeries z = zhat_coeffs(alpha, T, tables);
    const DirichletTerms terms = make_terms(z);
    const auto values = kernels::eval_at_points(terms, points);

    std::vector<double> im(n), im2(n);
    for (std::size_t i = 0; i < n; ++i) {
        im[i] = values[i].imag();
        im2[i] = im[i] * im[i];
    }
    const double mean = pairwise_sum<double>(im) / static_cast<double>(n);
    const double var = std::max(0.0, pairwise_sum<double>(im2) / static_cast<double>(n) - mean * mean);
    return {mean, std::sqrt(var / static_cast<double>(n - 1)), n};
}

}  // namespace dmlab
