#include "dmlab/arith_tables.hpp"

#include "dmlab/errors.hpp"
#include "dmlab/summation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace dmlab {

namespace {

constexpr std::uint64_t kMaxSieveLimit = std::uint64_t{1} << 31;

std::uint64_t binom_u64(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

void require_covered(std::uint64_t n, const FactorTables& tables) {
    if (!tables.covers(n)) {
        std::ostringstream os;
        os << "n = " << n << " outside factor tables [1, " << tables.limit << "]";
        throw ValidationError(os.str());
    }
}

}  // namespace

std::size_t factor_tables_bytes(std::uint64_t limit) {
    const std::size_t per_entry =
        sizeof(std::uint32_t) + sizeof(std::int8_t) + sizeof(std::uint8_t) + sizeof(double);
    return static_cast<std::size_t>(limit + 1) * per_entry;
}

FactorTables build_factor_tables(std::uint64_t limit, std::size_t memory_budget) {
    if (limit < 2 || limit > kMaxSieveLimit)
        throw ValidationError("factor table limit must lie in [2, 2^31]");
    if (factor_tables_bytes(limit) > memory_budget) {
        std::ostringstream os;
        os << "factor tables up to " << limit << " need " << factor_tables_bytes(limit)
           << " bytes, budget is " << memory_budget;
        throw CapacityError(os.str());
    }

    FactorTables t;
    t.limit = limit;
    const std::size_t size = static_cast<std::size_t>(limit) + 1;
    t.spf.assign(size, 0);
    t.big_omega.assign(size, 0);
    t.lambda_vals.assign(size, 0);
    t.mangoldt.assign(size, 0.0);

    // Linear sieve: every composite is crossed out exactly once by its spf.
    std::vector<std::uint32_t> primes;
    t.spf[1] = 1;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (t.spf[i] == 0) {
            t.spf[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        const std::uint32_t pi = t.spf[i];
        for (std::uint32_t p : primes) {
            const std::uint64_t m = std::uint64_t{p} * i;
            if (p > pi || m > limit) break;
            t.spf[m] = p;
        }
    }

    t.lambda_vals[1] = 1;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        const std::uint32_t p = t.spf[n];
        const std::uint64_t q = n / p;
        t.big_omega[n] = static_cast<std::uint8_t>(t.big_omega[q] + 1);
        t.lambda_vals[n] = static_cast<std::int8_t>(-t.lambda_vals[q]);
        if (q == 1 || (t.spf[q] == p && t.mangoldt[q] != 0.0))
            t.mangoldt[n] = std::log(static_cast<double>(p));
    }
    return t;
}

std::vector<PrimePower> factorize(std::uint64_t n, const FactorTables& tables) {
    require_covered(n, tables);
    std::vector<PrimePower> out;
    while (n > 1) {
        const std::uint32_t p = tables.spf[n];
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    return out;
}

int lambda_k_value(std::uint64_t n, unsigned k, const FactorTables& tables) {
    require_covered(n, tables);
    if (k == 0) throw ValidationError("lambda_k needs k >= 1");
    return (tables.big_omega[n] / k) % 2 == 0 ? 1 : -1;
}

std::uint64_t divisor_r(std::uint64_t n, unsigned r, const FactorTables& tables) {
    if (r == 0) throw ValidationError("divisor_r needs r >= 1");
    std::uint64_t result = 1;
    for (const auto& [p, e] : factorize(n, tables)) result *= binom_u64(e + r - 1, e);
    return result;
}

std::vector<double> divisor_r_sequence(std::uint64_t upto, unsigned r,
                                       const FactorTables& tables) {
    if (r == 0) throw ValidationError("divisor_r needs r >= 1");
    if (upto > tables.limit) require_covered(upto, tables);
    std::vector<double> d(static_cast<std::size_t>(upto) + 1, 0.0);
    if (upto >= 1) d[1] = 1.0;
    for (std::uint64_t n = 2; n <= upto; ++n) {
        const std::uint32_t p = tables.spf[n];
        std::uint64_t m = n;
        std::uint32_t e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        d[n] = d[m] * static_cast<double>(binom_u64(e + r - 1, e));
    }
    return d;
}

MollifierSpec MollifierSpec::unit() { return {}; }

MollifierSpec MollifierSpec::liouville() {
    MollifierSpec s;
    s.kind = MollifierKind::liouville;
    return s;
}

MollifierSpec MollifierSpec::liouville_k(unsigned k) {
    if (k == 0) throw ValidationError("liouville_k needs k >= 1");
    MollifierSpec s;
    s.kind = MollifierKind::liouville_k;
    s.k = k;
    return s;
}

MollifierSpec MollifierSpec::interval_flip(double beta1, double beta2) {
    if (!(beta1 >= 0.0 && beta1 <= beta2 && beta2 <= 1.0))
        throw ValidationError("flip window needs 0 <= beta1 <= beta2 <= 1");
    MollifierSpec s;
    s.kind = MollifierKind::interval_flip;
    s.beta1 = beta1;
    s.beta2 = beta2;
    return s;
}

MollifierSpec MollifierSpec::liouville_divisor(unsigned r, unsigned eta) {
    if (r == 0) throw ValidationError("divisor order r must be >= 1");
    MollifierSpec s;
    s.kind = MollifierKind::liouville_divisor;
    s.r = r;
    s.eta = eta;
    return s;
}

MollifierSpec MollifierSpec::general(double beta1, double beta2, unsigned r, unsigned eta) {
    MollifierSpec s = interval_flip(beta1, beta2);
    if (r == 0) throw ValidationError("divisor order r must be >= 1");
    s.kind = MollifierKind::general;
    s.r = r;
    s.eta = eta;
    return s;
}

std::pair<double, double> MollifierSpec::flip_window() const {
    switch (kind) {
        case MollifierKind::unit: return {0.0, 0.0};
        case MollifierKind::liouville:
        case MollifierKind::liouville_divisor: return {0.0, 1.0};
        case MollifierKind::liouville_k:
            if (k == 1) return {0.0, 1.0};
            throw ValidationError("lambda_k with k > 1 has no flip-window form");
        case MollifierKind::interval_flip:
        case MollifierKind::general: return {beta1, beta2};
    }
    return {0.0, 0.0};
}

std::string MollifierSpec::name() const {
    std::ostringstream os;
    switch (kind) {
        case MollifierKind::unit: os << "unit"; break;
        case MollifierKind::liouville: os << "lambda"; break;
        case MollifierKind::liouville_k:
            if (k == 2)
                os << "lambda2";
            else
                os << "lambdaK=" << k;
            break;
        case MollifierKind::interval_flip: os << "flip=" << beta1 << ',' << beta2; break;
        case MollifierKind::liouville_divisor:
            os << "lambda-dr=" << r;
            if (eta != 0) os << ',' << eta;
            break;
        case MollifierKind::general:
            os << "general=" << beta1 << ',' << beta2 << ',' << r << ',' << eta;
            break;
    }
    return os.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw ValidationError("bad number '" + s + "'");
    return v;
}

unsigned parse_unsigned(const std::string& s) {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size() || v < 0) throw ValidationError("bad integer '" + s + "'");
    return static_cast<unsigned>(v);
}

}  // namespace

MollifierSpec parse_mollifier(const std::string& text) {
    const auto eq = text.find('=');
    const std::string head = text.substr(0, eq);
    const std::string args = eq == std::string::npos ? "" : text.substr(eq + 1);
    const auto parts = split_csv(args);
    try {
        if (head == "unit" && args.empty()) return MollifierSpec::unit();
        if ((head == "lambda" || head == "liouville") && args.empty())
            return MollifierSpec::liouville();
        if (head == "lambda2" && args.empty()) return MollifierSpec::liouville_k(2);
        if (head == "lambdaK" && parts.size() == 1)
            return MollifierSpec::liouville_k(parse_unsigned(parts[0]));
        if (head == "flip" && parts.size() == 2)
            return MollifierSpec::interval_flip(parse_double(parts[0]), parse_double(parts[1]));
        if (head == "lambda-dr" && (parts.size() == 1 || parts.size() == 2))
            return MollifierSpec::liouville_divisor(
                parse_unsigned(parts[0]), parts.size() == 2 ? parse_unsigned(parts[1]) : 0);
        if (head == "general" && parts.size() == 4)
            return MollifierSpec::general(parse_double(parts[0]), parse_double(parts[1]),
                                          parse_unsigned(parts[2]), parse_unsigned(parts[3]));
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
    throw ValidationError("unrecognized mollifier '" + text + "'");
}

int interval_flip_sign(std::uint64_t n, double beta1, double beta2, double T,
                       const FactorTables& tables) {
    const double lo = std::pow(T, beta1);
    const double hi = std::pow(T, beta2);
    int sign = 1;
    for (const auto& [p, e] : factorize(n, tables)) {
        const double pd = static_cast<double>(p);
        if (pd > lo && pd <= hi && (e % 2 == 1)) sign = -sign;
    }
    return sign;
}

double mollifier_bound(double T) {
    const double L = std::log(T);
    return T / (L * L);
}

std::uint64_t mollifier_length(double T) {
    const double T0 = mollifier_bound(T);
    return static_cast<std::uint64_t>(std::ceil(T0)) - 1;
}

double mollifier_value(std::uint64_t n, const MollifierSpec& spec, double T,
                       const FactorTables& tables) {
    require_covered(n, tables);
    auto weight = [&](double base) {
        if (spec.eta == 0) return base;
        const double w = 1.0 - std::log(static_cast<double>(n)) / std::log(T);
        return base * std::pow(w, static_cast<double>(spec.eta));
    };
    switch (spec.kind) {
        case MollifierKind::unit: return 1.0;
        case MollifierKind::liouville: return tables.lambda_vals[n];
        case MollifierKind::liouville_k: return lambda_k_value(n, spec.k, tables);
        case MollifierKind::interval_flip:
            return interval_flip_sign(n, spec.beta1, spec.beta2, T, tables);
        case MollifierKind::liouville_divisor:
            return weight(tables.lambda_vals[n] *
                          static_cast<double>(divisor_r(n, spec.r, tables)));
        case MollifierKind::general:
            return weight(interval_flip_sign(n, spec.beta1, spec.beta2, T, tables) *
                          static_cast<double>(divisor_r(n, spec.r, tables)));
    }
    return 0.0;
}

CoeffSeries mollifier_coeffs(const MollifierSpec& spec, double T, const FactorTables& tables) {
    if (!(T >= 100.0)) throw ValidationError("mollifier needs T >= 100");
    const std::uint64_t len = mollifier_length(T);
    if (len > tables.limit) {
        std::ostringstream os;
        os << "factor tables up to " << tables.limit << " too small for mollifier length "
           << len;
        throw ValidationError(os.str());
    }
    CoeffSeries out;
    out.T = T;
    out.values.assign(static_cast<std::size_t>(len) + 1, 0.0);
    for (std::uint64_t n = 1; n <= len; ++n) out.values[n] = mollifier_value(n, spec, T, tables);
    std::ostringstream os;
    os << "mollifier " << spec.name() << " T=" << T << " n<" << mollifier_bound(T);
    out.description = os.str();
    return out;
}

CoeffSeries zhat_coeffs(double alpha, double T, const FactorTables& tables) {
    if (!(alpha > 0.0) || !(T > 1.0)) throw ValidationError("zhat needs alpha > 0, T > 1");
    const double L = std::log(T);
    const double bound = std::pow(T, alpha);
    const std::uint64_t len = static_cast<std::uint64_t>(std::ceil(bound)) - 1;
    if (len > tables.limit) {
        std::ostringstream os;
        os << "Z_alpha needs factor tables up to " << len << ", have " << tables.limit;
        throw CapacityError(os.str());
    }
    CoeffSeries out;
    out.T = T;
    out.scale = -2.0 / (alpha * L);
    out.values.assign(static_cast<std::size_t>(len) + 1, 0.0);
    for (std::uint64_t n = 2; n <= len; ++n) {
        const double lam = tables.mangoldt[n];
        if (lam != 0.0)
            out.values[n] = lam * (1.0 - std::log(static_cast<double>(n)) / (alpha * L));
    }
    std::ostringstream os;
    os << "Z_alpha alpha=" << alpha << " T=" << T << " scale=-2/(alpha log T)=" << out.scale;
    out.description = os.str();
    return out;
}

CoeffSeries convolve_b(const MollifierSpec& spec, double alpha, double T,
                       const FactorTables& tables, std::uint64_t upto,
                       std::size_t memory_budget) {
    const CoeffSeries z = zhat_coeffs(alpha, T, tables);
    const CoeffSeries a = mollifier_coeffs(spec, T, tables);
    const std::uint64_t full = static_cast<std::uint64_t>(z.length()) * a.length();
    const std::uint64_t len = upto == 0 ? full : std::min<std::uint64_t>(upto, full);
    if ((len + 1) * sizeof(double) > memory_budget) {
        std::ostringstream os;
        os << "b-series of length " << len << " exceeds memory budget";
        throw CapacityError(os.str());
    }
    CoeffSeries out;
    out.T = T;
    out.values.assign(static_cast<std::size_t>(len) + 1, 0.0);
    for (std::size_t d = 2; d <= z.length() && d <= len; ++d) {
        const double zd = z.values[d];
        if (zd == 0.0) continue;
        for (std::size_t n = 1; n <= a.length(); ++n) {
            const std::uint64_t m = static_cast<std::uint64_t>(d) * n;
            if (m > len) break;
            out.values[m] += zd * a.values[n];
        }
    }
    for (double& v : out.values) v *= z.scale;
    std::ostringstream os;
    os << "b = Z_alpha * A for " << spec.name() << " alpha=" << alpha << " T=" << T
       << " m<=" << len;
    out.description = os.str();
    return out;
}

ArFit fit_Ar_detail(unsigned r, std::uint64_t N, const FactorTables& tables,
                    double condition_limit) {
    if (r == 0) throw ValidationError("fit_Ar needs r >= 1");
    if (N < 100000) throw ValidationError("fit_Ar needs N >= 1e5");
    if (N > tables.limit) throw ValidationError("fit_Ar: N beyond factor tables");

    constexpr int kSamples = 32;
    std::array<double, kSamples> xs{};
    const double lo = static_cast<double>(N) / 100.0;
    const double hi = static_cast<double>(N);
    for (int i = 0; i < kSamples; ++i)
        xs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (kSamples - 1));

    // S(x) = sum_{m < x} d_r(m)^2 / m, sampled while sweeping m upward.
    const auto d = divisor_r_sequence(N, r, tables);
    std::array<double, kSamples> sums{};
    KahanSum acc;
    int next = 0;
    for (std::uint64_t m = 1; m <= N && next < kSamples; ++m) {
        while (next < kSamples && static_cast<double>(m) >= xs[next]) sums[next++] = acc.value();
        acc.add(d[m] * d[m] / static_cast<double>(m));
    }
    while (next < kSamples) sums[next++] = acc.value();

    const double p1 = static_cast<double>(r) * r;
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    // Columns scaled by their value at x = N to keep the normal matrix near unit size.
    const double Lmax = std::log(hi);
    const double s1 = std::pow(Lmax, p1), s2 = std::pow(Lmax, p1 - 1);
    for (int i = 0; i < kSamples; ++i) {
        const double L = std::log(xs[i]);
        const double c1 = std::pow(L, p1) / s1, c2 = std::pow(L, p1 - 1) / s2;
        a11 += c1 * c1;
        a12 += c1 * c2;
        a22 += c2 * c2;
        b1 += c1 * sums[i];
        b2 += c2 * sums[i];
    }
    const double det = a11 * a22 - a12 * a12;
    const double tr = a11 + a22;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
    const double lmax = tr / 2 + disc, lmin = tr / 2 - disc;
    ArFit fit;
    fit.condition = lmin > 0 ? lmax / lmin : INFINITY;
    if (!(fit.condition <= condition_limit)) {
        std::ostringstream os;
        os << "A_r fit ill-conditioned (condition " << fit.condition << ")";
        throw ValidationError(os.str());
    }
    fit.leading = (a22 * b1 - a12 * b2) / det / s1;
    fit.correction = (a11 * b2 - a12 * b1) / det / s2;
    return fit;
}

double fit_Ar(unsigned r, std::uint64_t N, const FactorTables& tables) {
    return fit_Ar_detail(r, N, tables).leading;
}

}  // namespace dmlab
