#pragma once

#include "dmlab/arith_tables.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dmlab {

// Nonzero terms c(n) n^{-1/2} of a Dirichlet polynomial, ready for evaluation at s = 1/2 + it.
struct DirichletTerms {
    std::vector<double> log_n;
    std::vector<double> amplitude;  // scale * c(n) / sqrt(n)
    double abs_sum = 0.0;           // sum |amplitude|, the triangle-inequality bound

    std::size_t size() const { return log_n.size(); }
};

DirichletTerms make_terms(const CoeffSeries& coeffs, std::size_t first = 1,
                          std::size_t last = 0);

// t_j = center + (j - offset) * step, j in [0, count).
struct UniformGrid {
    double center = 0.0;
    double step = 0.0;
    std::ptrdiff_t offset = 0;
    std::size_t count = 0;

    double t(std::size_t j) const {
        return center + static_cast<double>(static_cast<std::ptrdiff_t>(j) - offset) * step;
    }
};

namespace kernels {

inline constexpr std::size_t kRenormBlock = 1024;  // grid steps between rotor resets
inline constexpr std::size_t kTermChunk = 256;

// Reference: independent exp(-i t log n) per (point, term), long double phases.
std::vector<std::complex<double>> eval_direct_serial(const DirichletTerms& terms,
                                                     const UniformGrid& grid);

// Phase-rotation recurrence over the uniform grid; rotors are reset from exact
// phases every kRenormBlock steps. Blocks run in parallel; the term reduction
// is a fixed pairwise tree over kTermChunk chunks, so output does not depend
// on the thread count.
std::vector<std::complex<double>> eval_recurrence(const DirichletTerms& terms,
                                                  const UniformGrid& grid);

// Direct evaluation at arbitrary heights, parallel over points.
std::vector<std::complex<double>> eval_at_points(const DirichletTerms& terms,
                                                 std::span<const double> heights);

// Serial counterpart of eval_at_points.
std::vector<std::complex<double>> eval_at_points_serial(const DirichletTerms& terms,
                                                        std::span<const double> heights);

}  // namespace kernels

// 0 keeps the OpenMP default.
void set_thread_budget(int threads);
int thread_budget();

}  // namespace dmlab
