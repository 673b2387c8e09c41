#include "dmlab/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace dmlab {

void set_thread_budget(int threads) {
    if (threads > 0) omp_set_num_threads(threads);
}

int thread_budget() { return omp_get_max_threads(); }

namespace kernels {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

struct PartialSum {
    unsigned level;
    std::vector<double> re, im;
};

// Streaming pairwise reduction: equal-level partials merge as they appear,
// giving the same tree as a recursive pairwise sum over the chunk sequence.
class PairwiseStack {
public:
    explicit PairwiseStack(std::size_t width) : width_(width) {}

    void push(std::vector<double> re, std::vector<double> im) {
        PartialSum cur{0, std::move(re), std::move(im)};
        while (!stack_.empty() && stack_.back().level == cur.level) {
            PartialSum& top = stack_.back();
            for (std::size_t j = 0; j < width_; ++j) {
                top.re[j] += cur.re[j];
                top.im[j] += cur.im[j];
            }
            cur = std::move(top);
            ++cur.level;
            stack_.pop_back();
        }
        stack_.push_back(std::move(cur));
    }

    void finish(std::complex<double>* out) {
        std::vector<double> re(width_, 0.0), im(width_, 0.0);
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
            for (std::size_t j = 0; j < width_; ++j) {
                re[j] += it->re[j];
                im[j] += it->im[j];
            }
        for (std::size_t j = 0; j < width_; ++j) out[j] = {re[j], im[j]};
    }

private:
    std::size_t width_;
    std::vector<PartialSum> stack_;
};

void eval_block(const DirichletTerms& terms, const UniformGrid& grid, std::size_t j0,
                std::size_t width, std::complex<double>* out) {
    const long double t0 =
        static_cast<long double>(grid.center) +
        static_cast<long double>(static_cast<std::ptrdiff_t>(j0) - grid.offset) * grid.step;

    alignas(64) double pr[kTermChunk], pi[kTermChunk], rr[kTermChunk], ri[kTermChunk];
    PairwiseStack stack(width);
    const std::size_t nterms = terms.size();

    for (std::size_t c0 = 0; c0 < nterms; c0 += kTermChunk) {
        const std::size_t m = std::min(kTermChunk, nterms - c0);
        for (std::size_t i = 0; i < m; ++i) {
            const long double ln = terms.log_n[c0 + i];
            const long double theta = std::fmod(t0 * ln, kTwoPi);
            const long double dtheta = std::fmod(static_cast<long double>(grid.step) * ln, kTwoPi);
            const double amp = terms.amplitude[c0 + i];
            pr[i] = amp * static_cast<double>(std::cos(theta));
            pi[i] = -amp * static_cast<double>(std::sin(theta));
            rr[i] = static_cast<double>(std::cos(dtheta));
            ri[i] = -static_cast<double>(std::sin(dtheta));
        }
        std::vector<double> sre(width), sim(width);
        for (std::size_t j = 0; j < width; ++j) {
            double sr = 0.0, si = 0.0;
#pragma omp simd reduction(+ : sr, si)
            for (std::size_t i = 0; i < m; ++i) {
                sr += pr[i];
                si += pi[i];
                const double nr = pr[i] * rr[i] - pi[i] * ri[i];
                const double ni = pr[i] * ri[i] + pi[i] * rr[i];
                pr[i] = nr;
                pi[i] = ni;
            }
            sre[j] = sr;
            sim[j] = si;
        }
        stack.push(std::move(sre), std::move(sim));
    }
    if (nterms == 0) {
        std::fill(out, out + width, std::complex<double>{});
        return;
    }
    stack.finish(out);
}

}  // namespace

std::vector<std::complex<double>> eval_recurrence(const DirichletTerms& terms,
                                                  const UniformGrid& grid) {
    std::vector<std::complex<double>> out(grid.count);
    const std::size_t nblocks = (grid.count + kRenormBlock - 1) / kRenormBlock;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t j0 = b * kRenormBlock;
        const std::size_t width = std::min(kRenormBlock, grid.count - j0);
        eval_block(terms, grid, j0, width, out.data() + j0);
    }
    return out;
}

std::vector<std::complex<double>> eval_at_points(const DirichletTerms& terms,
                                                 std::span<const double> heights) {
    // t log n reduced mod 2 pi in double: the fma residual keeps the product exact and the
    // two-part constant keeps the reduction exact for |t log n| well beyond 1e9.
    constexpr double two_pi_hi = 6.283185307179586;
    constexpr double two_pi_lo = 2.4492935982947064e-16;
    constexpr double inv_two_pi = 0.15915494309189535;
    std::vector<std::complex<double>> out(heights.size());
    const auto n = static_cast<std::ptrdiff_t>(heights.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        const double t = heights[j];
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const double ln = terms.log_n[i];
            const double p = t * ln;
            const double e = std::fma(t, ln, -p);
            const double k = std::nearbyint(p * inv_two_pi);
            const double theta = std::fma(-k, two_pi_lo, std::fma(-k, two_pi_hi, p)) + e;
            re += terms.amplitude[i] * std::cos(theta);
            im -= terms.amplitude[i] * std::sin(theta);
        }
        out[j] = {re, im};
    }
    return out;
}

}  // namespace kernels
}  // namespace dmlab
