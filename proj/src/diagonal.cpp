#include "dmlab/diagonal.hpp"

#include "dmlab/errors.hpp"
#include "dmlab/summation.hpp"

#include <omp.h>

#include <cmath>
#include <sstream>

namespace dmlab {

namespace {

struct Candidate {
    std::uint64_t value;
    double weight;  // Lambda-hat
};

std::vector<Candidate> prime_power_candidates(double alpha, double T, const FactorTables& tables,
                                              bool primes_only) {
    const double L = std::log(T);
    const double T0 = mollifier_bound(T);
    const double cap = std::min(std::pow(T, alpha), T0);
    const auto last = static_cast<std::uint64_t>(std::ceil(cap)) - 1;
    if (last > tables.limit) throw CapacityError("factor tables too small for the diagonal");
    std::vector<Candidate> out;
    for (std::uint64_t q = 2; q <= last; ++q) {
        const double lam = tables.mangoldt[q];
        if (lam == 0.0) continue;
        if (primes_only && tables.spf[q] != q) continue;
        out.push_back({q, lam * (1.0 - std::log(static_cast<double>(q)) / (alpha * L))});
    }
    return out;
}

std::uint64_t factorial_u64(unsigned n) {
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

struct Enumerator {
    const std::vector<Candidate>& cands;
    unsigned k;
    std::uint64_t limit;  // product must be <= limit (i.e. < T0)
    const std::function<void(const PrimePowerTuple&)>& visit;
    std::uint64_t budget;
    std::vector<std::uint64_t> parts;
    std::uint64_t count = 0;

    void run(std::size_t start, std::uint64_t product, double weight, std::uint64_t denom,
             unsigned run_len) {
        const unsigned depth = static_cast<unsigned>(parts.size());
        if (depth == k) {
            if (++count > budget) throw CapacityError("diagonal enumeration budget exceeded");
            visit({parts, product, factorial_u64(k) / denom, weight});
            return;
        }
        for (std::size_t i = start; i < cands.size(); ++i) {
            const std::uint64_t q = cands[i].value;
            if (product * q > limit) break;
            // Remaining factors are >= q, so the product must leave room for them.
            std::uint64_t probe = product * q;
            bool fits = true;
            for (unsigned r = depth + 1; r < k && fits; ++r) {
                if (probe > limit / q) fits = false;
                probe *= q;
            }
            if (!fits) break;
            const bool same = depth > 0 && parts.back() == q;
            const unsigned new_run = same ? run_len + 1 : 1;
            parts.push_back(q);
            run(i, product * q, weight * cands[i].weight, denom * new_run, new_run);
            parts.pop_back();
        }
    }
};

}  // namespace

std::uint64_t enumerate_tuples(unsigned k, double alpha, double T, const FactorTables& tables,
                               const std::function<void(const PrimePowerTuple&)>& visit,
                               const TupleOptions& options) {
    if (k == 0) throw ValidationError("tuple length must be >= 1");
    const auto cands = prime_power_candidates(alpha, T, tables, options.primes_only);
    Enumerator e{cands, k, mollifier_length(T), visit, options.budget, {}, 0};
    e.parts.reserve(k);
    e.run(0, 1, 1.0, 1, 0);
    return e.count;
}

DiagonalSum diagonal_sum(const MollifierSpec& spec, unsigned k, double alpha, double T,
                         const FactorTables& tables, const TupleOptions& options) {
    if (k == 0) throw ValidationError("diagonal moment needs k >= 1");
    const CoeffSeries a = mollifier_coeffs(spec, T, tables);
    const std::uint64_t len = a.length();
    const auto cands = prime_power_candidates(alpha, T, tables, options.primes_only);

    // Branches keyed by the smallest element are independent; reduced in order.
    std::vector<double> branch(cands.size(), 0.0);
    std::vector<std::uint64_t> branch_count(cands.size(), 0);
    const auto nb = static_cast<std::ptrdiff_t>(cands.size());
    const std::uint64_t per_branch_budget = options.budget;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        KahanSum acc;
        std::function<void(const PrimePowerTuple&)> visit = [&](const PrimePowerTuple& tup) {
            KahanSum inner;
            for (std::uint64_t n = 1; n * tup.product <= len; ++n)
                inner.add(a.values[n] * a.values[n * tup.product] / static_cast<double>(n));
            acc.add(static_cast<double>(tup.multiplicity) * tup.weight * inner.value() /
                    static_cast<double>(tup.product));
        };
        Enumerator e{cands, k, len, visit, per_branch_budget, {}, 0};
        const std::uint64_t q = cands[b].value;
        if (k == 1 || q <= len / q) {
            e.parts.push_back(q);
            if (k == 1)
                visit({e.parts, q, 1, cands[b].weight});
            else
                e.run(static_cast<std::size_t>(b), q, cands[b].weight, 1, 1);
            branch_count[b] = k == 1 ? 1 : e.count;
        }
        branch[b] = acc.value();
    }

    DiagonalSum out;
    KahanSum total;
    for (std::size_t b = 0; b < branch.size(); ++b) {
        total.add(branch[b]);
        out.terms_enumerated += branch_count[b];
    }
    if (out.terms_enumerated > options.budget)
        throw CapacityError("diagonal enumeration budget exceeded");
    const double L = std::log(T);
    out.value = std::pow(-2.0 / (alpha * L), static_cast<double>(k)) * total.value();
    out.k = k;
    out.constraint = mollifier_bound(T);
    KahanSum mass;
    for (std::uint64_t n = 1; n <= len; ++n) mass.add(a.values[n] * a.values[n] / static_cast<double>(n));
    out.diag_mass = mass.value();
    return out;
}

MomentResult diagonal_moment(const MollifierSpec& spec, unsigned k, double alpha, double T,
                             const FactorTables& tables, const TupleOptions& options) {
    const DiagonalSum s = diagonal_sum(spec, k, alpha, T, tables, options);
    MomentResult r;
    r.method = Method::diagonal;
    r.value = s.value / s.diag_mass;
    r.err_estimate = 1e-14 * std::max(1.0, std::abs(r.value));
    return r;
}

HeadSum head_sum_bsq(const MollifierSpec& spec, double alpha, double T,
                     const FactorTables& tables) {
    const std::uint64_t head_len = mollifier_length(T);
    const CoeffSeries b = convolve_b(spec, alpha, T, tables, head_len);
    const CoeffSeries a = mollifier_coeffs(spec, T, tables);
    HeadSum h;
    KahanSum raw, mass;
    for (std::uint64_t m = 1; m <= b.length(); ++m)
        raw.add(b.values[m] * b.values[m] / static_cast<double>(m));
    for (std::uint64_t n = 1; n <= a.length(); ++n)
        mass.add(a.values[n] * a.values[n] / static_cast<double>(n));
    h.raw = raw.value();
    h.diag_mass = mass.value();
    h.normalized = h.raw / h.diag_mass;
    return h;
}

int lambda2_shift_sign(unsigned omega_n, unsigned k) {
    return ((omega_n / 2 + (omega_n + k) / 2) % 2 == 0) ? 1 : -1;
}

Lambda2SignReport lambda2_sign_check(unsigned k, double alpha, double T,
                                     const FactorTables& tables) {
    if (k == 0) throw ValidationError("lambda2 sign check needs k >= 1");
    const unsigned order = 2 * k;
    const std::uint64_t len = mollifier_length(T);
    if (len > tables.limit) throw CapacityError("factor tables too small");
    const double flip = (k % 2 == 0) ? 1.0 : -1.0;

    Lambda2SignReport rep;
    rep.k = k;
    KahanSum s2, s1;
    auto visit = [&](const PrimePowerTuple& tup) {
        KahanSum in2, in1;
        for (std::uint64_t n = 1; n * tup.product <= len; ++n) {
            const std::uint64_t m = n * tup.product;
            const double t2 = static_cast<double>(lambda_k_value(n, 2, tables) *
                                                  lambda_k_value(m, 2, tables)) / static_cast<double>(n);
            const double t1 = static_cast<double>(tables.lambda_vals[n] * tables.lambda_vals[m]) /
                              static_cast<double>(n);
            if (t2 != flip * t1) ++rep.term_mismatches;
            in2.add(t2);
            in1.add(t1);
        }
        const double scale = static_cast<double>(tup.multiplicity) * tup.weight /
                             static_cast<double>(tup.product);
        s2.add(scale * in2.value());
        s1.add(scale * in1.value());
    };
    TupleOptions primes;
    primes.primes_only = true;
    rep.tuples = enumerate_tuples(order, alpha, T, tables, visit, primes);

    const double pref = std::pow(-2.0 / (alpha * std::log(T)), static_cast<double>(order));
    rep.restricted_lambda2 = pref * s2.value();
    rep.restricted_lambda = pref * s1.value();
    rep.relative_mismatch = std::abs(rep.restricted_lambda2 - flip * rep.restricted_lambda) /
                            std::abs(rep.restricted_lambda);

    const DiagonalSum full2 = diagonal_sum(MollifierSpec::liouville_k(2), order, alpha, T, tables);
    const DiagonalSum full1 = diagonal_sum(MollifierSpec::liouville(), order, alpha, T, tables);
    rep.prime_power_residual_lambda2 = full2.value - rep.restricted_lambda2;
    rep.prime_power_residual_lambda = full1.value - rep.restricted_lambda;
    return rep;
}

}  // namespace dmlab
