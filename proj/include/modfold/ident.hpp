#pragma once

// Identifiability predicates for modulo-DFT models and modulo-sampled
// periodic bandlimited (PBL) signals.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>

#include "modfold/cyclotomic.hpp"
#include "modfold/types.hpp"

namespace modfold {

enum class IdentCondition {
    thm1_full,
    coro1_tail,
    thm3_roots,
    thm4_HN,
    vandermonde_necessary,
    oversampling_sufficient,
};

struct IdentVerdict {
    bool identifiable = false;
    std::vector<std::vector<int>> failing_classes;
    IdentCondition condition_used = IdentCondition::thm1_full;
    std::string reason;  // human-readable note (e.g. below-Nyquist cases)
};

/// Periodic bandlimited signal description. The complex Fourier coefficients
/// c_{-P..P} are stored as c[0..2P] with c[P+p] = c_p; conjugate symmetry
/// c_{-p} = conj(c_p) and real c_0 are enforced on construction.
struct PBLConfig {
    int P = 1;
    int n = 2;
    double f0 = 1.0;  // hertz; metadata only
    ComplexVector coeffs;  // size 2P+1, index P+p holds c_p

    PBLConfig(int P_, int n_, ComplexVector c, double f0_ = 1.0)
        : P(P_), n(n_), f0(f0_), coeffs(std::move(c)) {
        if (P < 1 || n < 1) throw std::domain_error("PBLConfig: need P >= 1, N >= 1");
        if (coeffs.size() != static_cast<size_t>(2 * P + 1))
            throw std::domain_error("PBLConfig: need 2P+1 coefficients");
        if (coeffs[P].imag() != 0.0) throw std::domain_error("PBLConfig: c_0 must be real");
        for (int p = 1; p <= P; ++p)
            if (coeffs[P - p] != std::conj(coeffs[P + p]))
                throw std::domain_error("PBLConfig: conjugate symmetry violated");
    }

    double oversampling() const { return static_cast<double>(n) / (2 * P); }

    /// Samples s[k] = sum_p c_p e^{j 2 pi p k / N}, real by symmetry.
    RealVector samples() const {
        RealVector s(n);
        for (int k = 0; k < n; ++k) {
            double acc = coeffs[P].real();
            for (int p = 1; p <= P; ++p)
                acc += 2.0 * (coeffs[P + p] * std::polar(1.0, 2.0 * M_PI * p * k / n)).real();
            s[k] = acc;
        }
        return s;
    }
};

namespace detail {

inline IdentVerdict class_hitting(int n, const IndexSet& v, bool skip_zero_class,
                                  IdentCondition cond) {
    std::vector<bool> in_v(n, false);
    for (int idx : v) {
        if (idx < 0 || idx >= n) throw std::domain_error("identifiable: V index out of range");
        in_v[idx] = true;
    }
    IdentVerdict verdict;
    verdict.condition_used = cond;
    for (const auto& cls : partition_gaussian(n).classes) {
        if (skip_zero_class && cls.size() == 1 && cls[0] == 0) continue;
        if (std::none_of(cls.begin(), cls.end(), [&](int k) { return in_v[k]; }))
            verdict.failing_classes.push_back(cls);
    }
    verdict.identifiable = verdict.failing_classes.empty();
    return verdict;
}

}  // namespace detail

/// Full recovery from folded DFT measurements with zeroed rows V: possible
/// iff every irreducible-factor class of x^N - 1 over Q[j] meets V.
inline IdentVerdict identifiable_full(int n, const IndexSet& v) {
    return detail::class_hitting(n, v, false, IdentCondition::thm1_full);
}

/// Recovery of s_{1..N-1} only (DC dropped): the {0} class need not be hit.
inline IdentVerdict identifiable_tail(int n, const IndexSet& v) {
    return detail::class_hitting(n, v, true, IdentCondition::coro1_tail);
}

namespace detail {

/// Best rational approximation of x with denominator <= max_den, by
/// continued fractions. Returns nullopt if no fraction comes within tol.
inline std::optional<std::pair<long long, long long>> rationalize(double x, double tol,
                                                                  long long max_den) {
    long long p0 = 1, q0 = 0, p1 = std::llround(std::floor(x)), q1 = 1;
    double frac = x - std::floor(x);
    for (int iter = 0; iter < 64; ++iter) {
        if (std::abs(x - static_cast<double>(p1) / q1) <= tol) return std::pair{p1, q1};
        if (frac < 1e-15) break;
        double inv = 1.0 / frac;
        long long a = static_cast<long long>(std::floor(inv));
        frac = inv - std::floor(inv);
        long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    if (std::abs(x - static_cast<double>(p1) / q1) <= tol && q1 <= max_den)
        return std::pair{p1, q1};
    return std::nullopt;
}

inline bool is_gaussian_rational(Complex z, double tol, long long max_den = 0) {
    // Irrational values admit rational approximations with error about
    // 1/q^2, so a large denominator cap misclassifies them (e.g. sqrt(2)/2
    // is within 8e-10 of 13860/19601). Capping q at (1/tol)^(1/3) keeps the
    // closest irrational approach around tol^(2/3), orders of magnitude
    // above the tolerance, while still certifying ordinary rational nodes.
    if (max_den <= 0) max_den = static_cast<long long>(std::cbrt(1.0 / std::max(tol, 1e-15)));
    return rationalize(z.real(), tol, max_den) && rationalize(z.imag(), tol, max_den);
}

}  // namespace detail

/// Necessary condition for a Vandermonde sensing matrix: every column whose
/// node lies in Q[j] must be kept unfolded. A false verdict proves the model
/// unidentifiable; a true verdict proves nothing.
inline IdentVerdict vandermonde_necessary(const ComplexVector& nodes, const IndexSet& v,
                                          double rational_tol = 1e-9) {
    int n = static_cast<int>(nodes.size());
    std::vector<bool> in_v(n, false);
    for (int idx : v) {
        if (idx < 0 || idx >= n) throw std::domain_error("vandermonde_necessary: V index out of range");
        in_v[idx] = true;
    }
    IdentVerdict verdict;
    verdict.condition_used = IdentCondition::vandermonde_necessary;
    std::vector<int> missed;
    for (int j = 0; j < n; ++j)
        if (detail::is_gaussian_rational(nodes[j], rational_tol) && !in_v[j]) missed.push_back(j);
    if (!missed.empty()) {
        verdict.failing_classes.push_back(std::move(missed));
        verdict.reason = "Gaussian-rational node outside V";
    }
    verdict.identifiable = verdict.failing_classes.empty();
    return verdict;
}

/// Indices of the Gaussian-rational nodes (the set the necessary condition
/// compares against V).
inline IndexSet gaussian_rational_nodes(const ComplexVector& nodes, double rational_tol = 1e-9) {
    IndexSet out;
    for (size_t j = 0; j < nodes.size(); ++j)
        if (detail::is_gaussian_rational(nodes[j], rational_tol)) out.insert(static_cast<int>(j));
    return out;
}

/// PBL identifiability (up to an integer DC constant) by the root-location
/// test: for every divisor d > 1 of N, some multiple n of N/d in the kept
/// band {P+1..N-P-1} must have gcd(d, n d / N) = 1, i.e. some primitive d-th
/// root of unity survives among the kept DFT rows.
inline IdentVerdict pbl_identifiable_roots(int n, int P) {
    if (P < 1 || n < 1) throw std::domain_error("pbl_identifiable_roots: need P >= 1, N >= 1");
    IdentVerdict verdict;
    verdict.condition_used = IdentCondition::thm3_roots;
    if (n <= 2 * P + 1) {
        verdict.identifiable = false;
        verdict.reason = "below Nyquist-plus-one samples (N <= 2P+1): unidentifiable regardless";
        return verdict;
    }
    FactorPartition part = partition_rational(n);
    for (int c = 0; c < part.K(); ++c) {
        long d = part.class_divisor[c];
        if (d == 1) continue;
        bool hit = false;
        for (long k = P + 1; k <= n - P - 1 && !hit; ++k)
            if (k * d % n == 0 && std::gcd(d, k * d / n) == 1) hit = true;
        if (!hit) verdict.failing_classes.push_back(part.classes[c]);
    }
    verdict.identifiable = verdict.failing_classes.empty();
    return verdict;
}

/// Same predicate via the closed-form threshold: identifiable iff
/// H(N) >= P+1, compared exactly over the rationals.
inline IdentVerdict pbl_identifiable_HN(int n, int P) {
    if (P < 1 || n < 1) throw std::domain_error("pbl_identifiable_HN: need P >= 1, N >= 1");
    IdentVerdict verdict;
    verdict.condition_used = IdentCondition::thm4_HN;
    if (n <= 2 * P + 1) {
        verdict.identifiable = false;
        verdict.reason = "below Nyquist-plus-one samples (N <= 2P+1): unidentifiable regardless";
        return verdict;
    }
    verdict.identifiable = H_of(n) >= Rational(P + 1);
    if (!verdict.identifiable) verdict.reason = "H(N) < P+1";
    return verdict;
}

/// Simple sufficient condition: oversampling factor gamma = N/(2P) at least
/// 3(1 + 1/P), i.e. N >= 6(P+1).
inline bool oversampling_sufficient(int n, int P) {
    if (P < 1) throw std::domain_error("oversampling_sufficient: need P >= 1");
    return n >= 6 * (P + 1);
}

/// For an unidentifiable (N, V) pair, a nonzero Gaussian-integer vector in
/// the kernel of F_V^H: the coefficients of the product of all class factors
/// except one failing class. Adding F^H times this vector to s leaves the
/// folded measurements unchanged.
inline GaussianIntegerVector unidentifiability_witness(int n, const IndexSet& v) {
    IdentVerdict verdict = identifiable_full(n, v);
    if (verdict.identifiable)
        throw std::domain_error("unidentifiability_witness: model is identifiable");
    FactorPartition part = partition_gaussian(n);
    const auto& miss = verdict.failing_classes.front();
    std::vector<GaussPoly> polys = gaussian_class_polys(n);
    GaussPoly prod{{1, 0}};
    for (int c = 0; c < part.K(); ++c)
        if (part.classes[c] != miss) prod = gauss_poly_mul(prod, polys[c]);
    GaussianIntegerVector out(n);
    for (size_t i = 0; i < prod.size() && i < static_cast<size_t>(n); ++i)
        out[i] = GaussInt{prod[i].re, prod[i].im};
    return out;
}

}  // namespace modfold
