#pragma once

#include "dmlab/arith_tables.hpp"
#include "dmlab/measure.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dmlab {

// One nondecreasing tuple of prime powers (n_1 <= ... <= n_k) with product < T0.
struct PrimePowerTuple {
    std::span<const std::uint64_t> parts;
    std::uint64_t product;
    std::uint64_t multiplicity;  // number of ordered tuples it stands for
    double weight;               // prod Lambda-hat(n_j)
};

struct TupleOptions {
    bool primes_only = false;
    std::uint64_t budget = 200'000'000;  // max tuples before CapacityError
};

// Visits every multiset of k prime powers below min(T^alpha, T0) with product < T0.
// Returns the number of tuples visited.
std::uint64_t enumerate_tuples(unsigned k, double alpha, double T, const FactorTables& tables,
                               const std::function<void(const PrimePowerTuple&)>& visit,
                               const TupleOptions& options = {});

struct DiagonalSum {
    double value = 0.0;  // (-2/(alpha log T))^k times the enumerated sum, not normalized
    std::uint64_t terms_enumerated = 0;
    unsigned k = 0;
    double constraint = 0.0;  // T0
    double diag_mass = 0.0;
};

DiagonalSum diagonal_sum(const MollifierSpec& spec, unsigned k, double alpha, double T,
                         const FactorTables& tables, const TupleOptions& options = {});

// The diagonal sum divided by sum a(n)^2/n; the quadrature-free pseudo-moment.
MomentResult diagonal_moment(const MollifierSpec& spec, unsigned k, double alpha, double T,
                             const FactorTables& tables, const TupleOptions& options = {});

struct HeadSum {
    double raw = 0.0;  // sum_{m < T0} b(m)^2 / m
    double normalized = 0.0;
    double diag_mass = 0.0;
};

HeadSum head_sum_bsq(const MollifierSpec& spec, double alpha, double T,
                     const FactorTables& tables);

// lambda_2(n) lambda_2(n p_1 ... p_k) for any k primes; depends on Omega(n) only.
int lambda2_shift_sign(unsigned omega_n, unsigned k);

struct Lambda2SignReport {
    unsigned k = 0;  // the moment order is 2k
    double restricted_lambda2 = 0.0;
    double restricted_lambda = 0.0;
    double relative_mismatch = 0.0;  // |S_l2 - (-1)^k S_l| / |S_l|
    std::uint64_t tuples = 0;
    std::uint64_t term_mismatches = 0;
    double prime_power_residual_lambda2 = 0.0;
    double prime_power_residual_lambda = 0.0;
};

Lambda2SignReport lambda2_sign_check(unsigned k, double alpha, double T,
                                     const FactorTables& tables);

}  // namespace dmlab
