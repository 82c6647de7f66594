#pragma once

// Centered modulo operators, the unitary DFT / Vandermonde forward models,
// and the decomposition of folded measurements into z = y + eps.

#include <algorithm>
#include <cmath>

#include "modfold/types.hpp"

namespace modfold {

/// Centered modulo: t - floor(t + 1/2), range [-1/2, 1/2). Inputs exactly at
/// +1/2 map to -1/2.
inline double centered_mod(double t) {
    if (!std::isfinite(t)) throw std::domain_error("centered_mod: non-finite input");
    return t - std::floor(t + 0.5);
}

inline RealVector centered_mod(const RealVector& t) {
    RealVector out(t.size());
    std::transform(t.begin(), t.end(), out.begin(),
                   [](double x) { return centered_mod(x); });
    return out;
}

/// Componentwise centered modulo on real and imaginary parts.
inline Complex complex_mod(const Complex& u) {
    return {centered_mod(u.real()), centered_mod(u.imag())};
}

inline ComplexVector complex_mod(const ComplexVector& u) {
    ComplexVector out(u.size());
    std::transform(u.begin(), u.end(), out.begin(),
                   [](const Complex& x) { return complex_mod(x); });
    return out;
}

namespace detail {

// e^{-j 2 pi k / N} for k = 0..N-1, angles reduced before trig evaluation.
inline ComplexVector twiddle_table(int n) {
    ComplexVector w(n);
    for (int k = 0; k < n; ++k) {
        double theta = -2.0 * M_PI * static_cast<double>(k) / n;
        w[k] = {std::cos(theta), std::sin(theta)};
    }
    return w;
}

}  // namespace detail

/// y = F s with the unitary DFT, F[n1][n2] = e^{-j 2 pi n1 n2 / N} / sqrt(N).
/// The index product is reduced mod N before the table lookup so unitarity
/// holds to ~1e-15 for the sizes this library targets.
inline ComplexVector dft_apply(const ComplexVector& s) {
    const int n = static_cast<int>(s.size());
    if (n < 1) throw std::domain_error("dft_apply: empty input");
    const ComplexVector w = detail::twiddle_table(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexVector y(n);
    for (int r = 0; r < n; ++r) {
        Complex acc = 0.0;
        for (int c = 0; c < n; ++c) acc += w[static_cast<int>((1LL * r * c) % n)] * s[c];
        y[r] = acc * scale;
    }
    return y;
}

/// s = F^H y, the exact inverse of dft_apply up to rounding.
inline ComplexVector adjoint_dft(const ComplexVector& y) {
    const int n = static_cast<int>(y.size());
    if (n < 1) throw std::domain_error("adjoint_dft: empty input");
    const ComplexVector w = detail::twiddle_table(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexVector s(n);
    for (int r = 0; r < n; ++r) {
        Complex acc = 0.0;
        for (int c = 0; c < n; ++c)
            acc += std::conj(w[static_cast<int>((1LL * r * c) % n)]) * y[c];
        s[r] = acc * scale;
    }
    return s;
}

/// Column j of the sensing matrix for cfg (DFT column or Vandermonde powers).
inline ComplexVector sensing_column(const SensingConfig& cfg, int j) {
    const int n = cfg.n;
    ComplexVector col(n);
    if (std::holds_alternative<DftKind>(cfg.matrix_kind)) {
        const ComplexVector w = detail::twiddle_table(n);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (int i = 0; i < n; ++i) col[i] = w[static_cast<int>((1LL * i * j) % n)] * scale;
    } else {
        const auto& vk = std::get<VandermondeKind>(cfg.matrix_kind);
        if (static_cast<int>(vk.nodes.size()) != n)
            throw std::domain_error("sensing_column: node count != N");
        Complex p = 1.0;
        for (int i = 0; i < n; ++i) {
            col[i] = p;
            p *= vk.nodes[static_cast<size_t>(j)];
        }
    }
    return col;
}

inline ComplexVector sensing_apply(const SensingConfig& cfg, const ComplexVector& s) {
    if (static_cast<int>(s.size()) != cfg.n)
        throw std::domain_error("sensing_apply: size mismatch");
    if (std::holds_alternative<DftKind>(cfg.matrix_kind)) return dft_apply(s);
    ComplexVector y(cfg.n, 0.0);
    for (int j = 0; j < cfg.n; ++j) {
        if (s[j] == Complex{0.0, 0.0}) continue;
        ComplexVector col = sensing_column(cfg, j);
        for (int i = 0; i < cfg.n; ++i) y[i] += col[i] * s[j];
    }
    return y;
}

/// Folded measurements z = lambda * C((M s) / lambda). Entries of s indexed
/// by V must be exactly zero.
inline ComplexVector forward(const ComplexVector& s, const SensingConfig& cfg) {
    if (static_cast<int>(s.size()) != cfg.n) throw std::domain_error("forward: size mismatch");
    for (int v : cfg.zero_set) {
        if (v < 0 || v >= cfg.n) throw std::domain_error("forward: V index out of range");
        if (s[v] != Complex{0.0, 0.0})
            throw constraint_error("forward: signal nonzero at a V index");
    }
    ComplexVector y = sensing_apply(cfg, s);
    const double lam = cfg.scale;
    ComplexVector z(y.size());
    for (size_t i = 0; i < y.size(); ++i) z[i] = lam * complex_mod(y[i] / lam);
    return z;
}

/// Extract eps = (z - y) / lambda as an exact Gaussian integer vector;
/// residual above tol means y is not the unfolded counterpart of z.
inline GaussianIntegerVector fold_decompose(const ComplexVector& z, const ComplexVector& y,
                                            double tol = 1e-9, double lambda = 1.0) {
    if (z.size() != y.size()) throw std::domain_error("fold_decompose: size mismatch");
    GaussianIntegerVector eps(z.size());
    for (size_t i = 0; i < z.size(); ++i) {
        Complex d = (z[i] - y[i]) / lambda;
        GaussInt g{std::llround(d.real()), std::llround(d.imag())};
        if (std::abs(d.real() - static_cast<double>(g.re)) > tol ||
            std::abs(d.imag() - static_cast<double>(g.im)) > tol)
            throw decomposition_error("fold_decompose: residual exceeds tolerance");
        eps[i] = g;
    }
    return eps;
}

}  // namespace modfold
