#pragma once

#include "dmlab/rational.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace dmlab {

// Counter-based generator: every draw is a pure function of (seed, stream, index),
// so sample i is the same no matter which thread produces it.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const;
    // uniform in (0, 1)
    double uniform(std::uint64_t stream, std::uint64_t index) const;

private:
    std::uint64_t seed_;
};

struct RvMoment {
    unsigned k = 0;
    std::complex<double> empirical;
    double se_re = 0.0;
    double se_im = 0.0;
    double analytic = 0.0;  // exact or closed-form expectation (real)
    double a_k = 0.0;       // Fourier coefficient of the angle law (Wasilewski model)
    double x_moment = 0.0;  // E[X^k] (Wasilewski model)

    // |empirical - analytic| in units of the standard error, worst of re and im
    double z_score() const;
};

// X(t) = 1/2 + sum a_n e^{int} with t uniform: E[X^k] = 2^-k.
Rational circle_rv_moment(unsigned k);

// Monte Carlo with a_n = 2^-n, n = 1..terms.
RvMoment circle_rv_monte_carlo(unsigned k, std::uint64_t samples, std::uint64_t seed,
                               unsigned terms = 40);

// Lognormal law with the given untruncated mean, truncated at its upper `upper_tail` quantile.
struct LognormalLaw {
    double mean = 1.0;
    double sigma = 0.5;
    double upper_tail = 1e-12;

    double mu() const;
    double moment(unsigned k) const;  // of the truncated law
    double sample(double u) const;    // inverse CDF of the truncated law
};

struct WasilewskiConfig {
    unsigned k_max = 6;
    LognormalLaw x_law;
    double amplitude = 0.5;  // a_n = amplitude / ((n+1)! E[X]^n)
    unsigned series_terms = 24;
    std::vector<double> coefficients;  // overrides the default a_n when non-empty (index 0 unused)
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 12345;
};

// a_n for n = 0..series_terms (index 0 unused); throws ValidationError unless 2 sum a_n < 1.
std::vector<double> wasilewski_coefficients(const WasilewskiConfig& config);

// integral of p(t) e^{ikt} over one period, p(t) = (1 + 2 sum a_n cos nt) / 2pi.
std::complex<double> angle_law_fourier(const std::vector<double>& a, unsigned k);

// Empirical E[(X e^{iT})^k] for k = 0..k_max, T drawn by rejection from p.
std::vector<RvMoment> wasilewski_moments(const WasilewskiConfig& config);

}  // namespace dmlab
