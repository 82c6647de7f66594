#pragma once

// Exact number theory: divisors, cyclotomic polynomials over Z, root-class
// partitions of x^N - 1 over Q and over Q[j], and the h(d) / H(N) threshold
// functions.
//
// Everything here is integer/rational arithmetic; the only floating point is
// the root-product construction of the Q[j] class factors, whose rounded
// coefficients are then verified exactly.

#include <gmpxx.h>

#include <map>
#include <mutex>
#include <numeric>
#include <vector>

#include "modfold/types.hpp"

namespace modfold {

using BigInt = mpz_class;
using Rational = mpq_class;
using IntPoly = std::vector<BigInt>;  // coefficients, ascending degree

/// Gaussian integer polynomial, ascending degree.
struct GaussCoeff {
    long long re = 0;
    long long im = 0;
    friend bool operator==(const GaussCoeff&, const GaussCoeff&) = default;
};
using GaussPoly = std::vector<GaussCoeff>;

/// Ascending list of all positive divisors of N, including 1 and N.
inline std::vector<long> divisors(long n) {
    if (n < 1) throw std::domain_error("divisors: N must be positive");
    std::vector<long> lo, hi;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        lo.push_back(d);
        if (d != n / d) hi.push_back(n / d);
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

inline long euler_phi(long n) {
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace detail {

// Quotient of a by monic b, exact division; remainder must come out zero.
inline IntPoly divide_exact(IntPoly a, const IntPoly& b) {
    if (b.empty() || b.back() != 1) throw std::logic_error("divide_exact: divisor not monic");
    if (a.size() < b.size()) throw std::logic_error("divide_exact: degree underflow");
    IntPoly q(a.size() - b.size() + 1);
    for (size_t i = q.size(); i-- > 0;) {
        BigInt c = a[i + b.size() - 1];
        q[i] = c;
        if (c == 0) continue;
        for (size_t k = 0; k < b.size(); ++k) a[i + k] -= c * b[k];
    }
    for (const auto& c : a)
        if (c != 0) throw std::logic_error("divide_exact: nonzero remainder");
    return q;
}

}  // namespace detail

/// The d-th cyclotomic polynomial, exact integer coefficients, by repeated
/// exact division: Phi_d = (x^d - 1) / prod_{e | d, e < d} Phi_e. Memoized.
inline const IntPoly& cyclotomic_poly(long d) {
    if (d < 1) throw std::domain_error("cyclotomic_poly: d must be positive");
    static std::map<long, IntPoly> memo;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = memo.find(d);
    if (it != memo.end()) return it->second;

    std::vector<long> stack{d};
    while (!stack.empty()) {
        long m = stack.back();
        if (memo.count(m)) {
            stack.pop_back();
            continue;
        }
        bool ready = true;
        for (long e : divisors(m))
            if (e != m && !memo.count(e)) {
                stack.push_back(e);
                ready = false;
            }
        if (!ready) continue;
        stack.pop_back();
        IntPoly num(m + 1, 0);
        num[0] = -1;
        num[m] = 1;
        IntPoly q = std::move(num);
        for (long e : divisors(m))
            if (e != m) q = detail::divide_exact(std::move(q), memo.at(e));
        memo.emplace(m, std::move(q));
    }
    return memo.at(d);
}

/// Partition of {0..N-1} by the irreducible factor of x^N - 1 whose root
/// e^{j 2 pi n / N} is. One class per divisor over Q; 4|d classes split in
/// two over Q[j].
struct FactorPartition {
    enum class Field { rational, gaussian_rational };
    int n = 0;
    Field field = Field::rational;
    std::vector<std::vector<int>> classes;
    std::vector<long> class_divisor;  // divisor d owning each class

    int K() const { return static_cast<int>(classes.size()); }
};

/// Classes of x^N - 1 over Q: for each divisor d, the exponents n with
/// gcd(n, N) = N/d (the primitive d-th roots among the N-th roots).
inline FactorPartition partition_rational(int n) {
    if (n < 1) throw std::domain_error("partition_rational: N must be positive");
    FactorPartition part;
    part.n = n;
    part.field = FactorPartition::Field::rational;
    for (long d : divisors(n)) {
        std::vector<int> cls;
        for (int k = 0; k < n; ++k)
            if (std::gcd(static_cast<long>(k), static_cast<long>(n)) == n / d)
                cls.push_back(k);
        part.classes.push_back(std::move(cls));
        part.class_divisor.push_back(d);
    }
    return part;
}

/// Classes of x^N - 1 over Q[j]: the rational classes, with each class for a
/// divisor d with 4 | d split by the residue of the primitive index
/// k = n d / N mod 4 (1 vs 3). Reproduces the closed forms for N = 2^M,
/// N prime, and N = 2p; the general split is validated by the exact factor
/// reconstruction in gaussian_class_polys.
inline FactorPartition partition_gaussian(int n) {
    FactorPartition base = partition_rational(n);
    FactorPartition part;
    part.n = n;
    part.field = FactorPartition::Field::gaussian_rational;
    for (int c = 0; c < base.K(); ++c) {
        long d = base.class_divisor[c];
        if (d % 4 != 0) {
            part.classes.push_back(base.classes[c]);
            part.class_divisor.push_back(d);
            continue;
        }
        std::vector<int> one, three;
        for (int idx : base.classes[c]) {
            long k = static_cast<long>(idx) * d / n;
            (k % 4 == 1 ? one : three).push_back(idx);
        }
        part.classes.push_back(std::move(one));
        part.class_divisor.push_back(d);
        part.classes.push_back(std::move(three));
        part.class_divisor.push_back(d);
    }
    return part;
}

/// The paper's per-divisor threshold function; exact rational.
inline Rational h_of(long d) {
    if (d < 2) throw std::domain_error("h_of: d must be >= 2");
    Rational r;
    if (d % 2 == 1)
        r = Rational(2) + Rational(2, d - 1);
    else if (d == 2)
        r = 2;
    else if (d % 4 != 0)
        r = Rational(2) + Rational(8, d - 4);
    else
        r = Rational(2) + Rational(4, d - 2);
    r.canonicalize();
    return r;
}

/// H(N) = N / max_{d | N, d > 1} h(d), exact rational.
inline Rational H_of(long n) {
    if (n < 2) throw std::domain_error("H_of: N must be >= 2");
    Rational hmax = 0;
    for (long d : divisors(n)) {
        if (d == 1) continue;
        Rational h = h_of(d);
        if (h > hmax) hmax = h;
    }
    Rational r = Rational(n) / hmax;
    r.canonicalize();
    return r;
}

/// Exact Gaussian-integer product of two Gaussian-integer polynomials.
inline GaussPoly gauss_poly_mul(const GaussPoly& a, const GaussPoly& b) {
    GaussPoly out(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < b.size(); ++k) {
            out[i + k].re += a[i].re * b[k].re - a[i].im * b[k].im;
            out[i + k].im += a[i].re * b[k].im + a[i].im * b[k].re;
        }
    return out;
}

/// The monic Gaussian-integer factor of x^N - 1 for each class of
/// partition_gaussian(N), aligned with its class order. Coefficients are
/// built numerically from the class roots, rounded, checked to be within
/// 1e-8 of Gaussian integers, and the full product is verified to equal
/// x^N - 1 exactly.
inline std::vector<GaussPoly> gaussian_class_polys(int n) {
    FactorPartition part = partition_gaussian(n);
    std::vector<GaussPoly> polys;
    polys.reserve(part.classes.size());
    for (const auto& cls : part.classes) {
        std::vector<Complex> coeff{1.0};
        for (int idx : cls) {
            Complex root = std::polar(1.0, 2.0 * M_PI * idx / n);
            coeff.push_back(0.0);
            for (size_t i = coeff.size() - 1; i > 0; --i)
                coeff[i] = coeff[i - 1] - root * coeff[i];
            coeff[0] *= -root;
        }
        GaussPoly p(coeff.size());
        for (size_t i = 0; i < coeff.size(); ++i) {
            p[i].re = std::llround(coeff[i].real());
            p[i].im = std::llround(coeff[i].imag());
            if (std::abs(coeff[i].real() - static_cast<double>(p[i].re)) > 1e-8 ||
                std::abs(coeff[i].imag() - static_cast<double>(p[i].im)) > 1e-8)
                throw std::logic_error("gaussian_class_polys: coefficient not near-Gaussian-integer");
        }
        polys.push_back(std::move(p));
    }
    GaussPoly prod{{1, 0}};
    for (const auto& p : polys) prod = gauss_poly_mul(prod, p);
    bool ok = static_cast<int>(prod.size()) == n + 1 && prod[0] == GaussCoeff{-1, 0} &&
              prod[n] == GaussCoeff{1, 0};
    for (int i = 1; ok && i < n; ++i) ok = prod[i] == GaussCoeff{0, 0};
    if (!ok) throw std::logic_error("gaussian_class_polys: product != x^N - 1");
    return polys;
}

}  // namespace modfold
