#include "dmlab/random_models.hpp"

#include "dmlab/errors.hpp"
#include "dmlab/summation.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

namespace dmlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kBlock = 1 << 14;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

// Running sums of re, im and their squares for one moment order.
struct MomentAccumulator {
    KahanSum re, im, re2, im2;

    void add(std::complex<double> z) {
        re += z.real();
        im += z.imag();
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
    }
    void merge(const MomentAccumulator& o) {
        re += o.re.value();
        im += o.im.value();
        re2 += o.re2.value();
        im2 += o.im2.value();
    }
    void finish(RvMoment& out, double n) const {
        const double mr = re.value() / n, mi = im.value() / n;
        out.empirical = {mr, mi};
        const double vr = std::max(0.0, re2.value() / n - mr * mr);
        const double vi = std::max(0.0, im2.value() / n - mi * mi);
        out.se_re = std::sqrt(vr / (n - 1.0));
        out.se_im = std::sqrt(vi / (n - 1.0));
    }
};

// Fixed-size blocks summed independently, then merged in block order.
template <class Fill>
std::vector<MomentAccumulator> blocked_monte_carlo(std::uint64_t samples, unsigned width,
                                                   Fill fill) {
    const std::uint64_t nblocks = (samples + kBlock - 1) / kBlock;
    std::vector<std::vector<MomentAccumulator>> partial(
        nblocks, std::vector<MomentAccumulator>(width));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlock;
        const std::uint64_t hi = std::min(samples, lo + kBlock);
        for (std::uint64_t i = lo; i < hi; ++i) fill(i, partial[b]);
    }
    std::vector<MomentAccumulator> total(width);
    for (const auto& blk : partial)
        for (unsigned k = 0; k < width; ++k) total[k].merge(blk[k]);
    return total;
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t index) const {
    return splitmix(splitmix(seed_ ^ splitmix(stream)) + index * 0xd1b54a32d192ed03ULL);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t index) const {
    return (static_cast<double>(bits(stream, index) >> 11) + 0.5) * 0x1.0p-53;
}

double RvMoment::z_score() const {
    auto z = [](double diff, double se) {
        if (se > 0.0) return std::abs(diff) / se;
        return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    };
    return std::max(z(empirical.real() - analytic, se_re), z(empirical.imag(), se_im));
}

Rational circle_rv_moment(unsigned k) { return Rational(BigInt(1), BigInt(1) << k); }

RvMoment circle_rv_monte_carlo(unsigned k, std::uint64_t samples, std::uint64_t seed,
                               unsigned terms) {
    if (samples < 2) throw ValidationError("need at least two samples");
    const CounterRng rng(seed);
    auto acc = blocked_monte_carlo(samples, 1, [&](std::uint64_t i, auto& out) {
        const double t = kTwoPi * rng.uniform(0, i);
        const std::complex<double> rot = std::polar(1.0, t);
        std::complex<double> e = rot, x = 0.5;
        double a = 0.5;
        for (unsigned n = 1; n <= terms; ++n) {
            x += a * e;
            e *= rot;
            a *= 0.5;
        }
        out[0].add(std::pow(x, static_cast<int>(k)));
    });
    RvMoment m;
    m.k = k;
    m.analytic = std::ldexp(1.0, -static_cast<int>(k));
    acc[0].finish(m, static_cast<double>(samples));
    return m;
}

double LognormalLaw::mu() const { return std::log(mean) - 0.5 * sigma * sigma; }

double LognormalLaw::moment(unsigned k) const {
    const double zq = normal_quantile(1.0 - upper_tail);
    const double kd = k;
    return std::exp(kd * mu() + 0.5 * kd * kd * sigma * sigma) *
           normal_cdf(zq - kd * sigma) / normal_cdf(zq);
}

double LognormalLaw::sample(double u) const {
    return std::exp(mu() + sigma * normal_quantile(u * (1.0 - upper_tail)));
}

std::vector<double> wasilewski_coefficients(const WasilewskiConfig& config) {
    std::vector<double> a = config.coefficients;
    if (a.empty()) {
        const double ex = config.x_law.moment(1);
        a.assign(config.series_terms + 1, 0.0);
        double denom = 1.0;  // (n+1)! E[X]^n
        for (unsigned n = 1; n <= config.series_terms; ++n) {
            denom *= (n + 1) * ex;
            a[n] = config.amplitude / denom;
        }
    }
    double total = 0.0;
    for (std::size_t n = 1; n < a.size(); ++n) total += std::abs(a[n]);
    if (!(2.0 * total < 1.0))
        throw ValidationError("coefficients violate 2 sum |a_n| < 1; the angle density could go negative");
    a[0] = 0.0;
    return a;
}

std::complex<double> angle_law_fourier(const std::vector<double>& a, unsigned k) {
    // p is a trigonometric polynomial, so the periodic trapezoid rule with enough nodes is exact
    const std::size_t nodes = 2 * (a.size() + k) + 8;
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
        const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(nodes);
        double p = 1.0;
        for (std::size_t n = 1; n < a.size(); ++n) p += 2.0 * a[n] * std::cos(n * t);
        sum += p * std::polar(1.0, k * t);
    }
    return sum / static_cast<double>(nodes);
}

std::vector<RvMoment> wasilewski_moments(const WasilewskiConfig& config) {
    if (config.samples < 2) throw ValidationError("need at least two samples");
    if (config.x_law.sigma <= 0.0 || config.x_law.mean <= 0.0)
        throw ValidationError("lognormal law needs positive mean and sigma");
    const std::vector<double> a = wasilewski_coefficients(config);
    double envelope = 1.0;
    for (std::size_t n = 1; n < a.size(); ++n) envelope += 2.0 * std::abs(a[n]);
    const CounterRng rng(config.seed);
    const unsigned width = config.k_max + 1;

    auto acc = blocked_monte_carlo(config.samples, width, [&](std::uint64_t i, auto& out) {
        double t = 0.0;
        for (std::uint64_t attempt = 0;; ++attempt) {
            t = kTwoPi * rng.uniform(1 + 2 * attempt, i);
            // cos(nt) by the Chebyshev recurrence
            const double c1 = std::cos(t);
            double prev = 1.0, cur = c1, p = 1.0;
            for (std::size_t n = 1; n < a.size(); ++n) {
                p += 2.0 * a[n] * cur;
                const double next = 2.0 * c1 * cur - prev;
                prev = cur;
                cur = next;
            }
            if (rng.uniform(2 + 2 * attempt, i) * envelope <= p) break;
        }
        const double x = config.x_law.sample(rng.uniform(0, i));
        const std::complex<double> z = std::polar(x, t);
        std::complex<double> zk = 1.0;
        for (unsigned k = 0; k < width; ++k) {
            out[k].add(zk);
            zk *= z;
        }
    });

    std::vector<RvMoment> result(width);
    for (unsigned k = 0; k < width; ++k) {
        RvMoment& m = result[k];
        m.k = k;
        m.a_k = k == 0 ? 1.0 : angle_law_fourier(a, k).real();
        m.x_moment = config.x_law.moment(k);
        m.analytic = m.a_k * m.x_moment;
        acc[k].finish(m, static_cast<double>(config.samples));
    }
    return result;
}

}  // namespace dmlab
